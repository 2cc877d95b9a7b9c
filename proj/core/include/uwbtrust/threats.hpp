#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "uwbtrust/geometry.hpp"
#include "uwbtrust/ranging.hpp"

namespace uwbtrust {

struct UnknownAnchorTarget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ThreatKind {
  ShrAttack,
  NlosObstruction,
  WeakSignalDrift,
  Overheat,
  BatteryDrainAccelerate,
  AnchorOutage,
};

const char* to_string(ThreatKind kind);
ThreatKind threat_kind_from_string(const std::string& name);

// One scheduled fault. target_anchors empty means node-level. The window
// [start_tick, end_tick] is inclusive.
struct ThreatEvent {
  ThreatKind kind = ThreatKind::AnchorOutage;
  std::vector<std::string> target_anchors;
  int start_tick = 0;
  int end_tick = 0;
  double spoof_bias_m = 1.0;          // ShrAttack
  double excess_delay_m = 3.0;        // NlosObstruction
  double extra_path_loss_db = 5.0;    // NlosObstruction, WeakSignalDrift
  double heat_rate_c_per_s = 0.5;     // Overheat
  double draw_multiplier = 5.0;       // BatteryDrainAccelerate

  bool active_at(int tick) const { return tick >= start_tick && tick <= end_tick; }
};

// Voltage over consumed charge, piecewise linear, strictly decreasing.
// The default approximates an INR 18650-20R cell at 45 degC and passes
// through the 3360 mV / 3092 mV tuning points at one hour / fifteen
// minutes of remaining runtime under the default draw.
struct DischargeCurve {
  std::vector<std::pair<double, double>> points;  // (charge consumed in [0,1], mV)
  std::string temperature_label = "45C";

  static DischargeCurve default_curve();
};

// Interpolated voltage; clamps past either end of the curve.
double battery_voltage(double charge_consumed, const DischargeCurve& curve);

struct BatteryParams {
  double capacity_j = 7200.0;
  double draw_w = 0.5;
  DischargeCurve curve = DischargeCurve::default_curve();

  double runtime_s() const { return capacity_j / draw_w; }
};

struct NodeEnvironment {
  double ambient_temperature_c = 25.0;
  double tick_interval_s = 0.1;
  BatteryParams battery;
};

// Validates event parameters and anchor targets once, then applies the
// schedule per tick. Mutations are computed from (config, events, tick)
// alone, so applying the active set twice per tick changes nothing, and
// node temperature/charge evolve continuously across ticks.
class ThreatSchedule {
 public:
  ThreatSchedule() = default;
  ThreatSchedule(std::vector<ThreatEvent> events, const std::vector<Anchor>& anchors,
                 NodeEnvironment env);

  const std::vector<ThreatEvent>& events() const { return events_; }
  const NodeEnvironment& environment() const { return env_; }

  // Node base state at a tick with no threats applied.
  NodeState base_node_state(Position2D position, double clock_offset_s, double clock_drift,
                            int tick) const;

  void apply(std::map<std::string, ChannelRealization>& channels, NodeState& node,
             int tick) const;

 private:
  double consumed_charge(int tick) const;

  std::vector<ThreatEvent> events_;
  NodeEnvironment env_;
};

}  // namespace uwbtrust
