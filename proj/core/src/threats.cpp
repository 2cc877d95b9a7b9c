#include "uwbtrust/threats.hpp"

#include <algorithm>
#include <cmath>

namespace uwbtrust {
namespace {

// Window overlap of [0, elapsed) with a threat's active interval, in
// seconds of simulated time.
double active_overlap_s(const ThreatEvent& e, int tick, double dt) {
  const double begin = static_cast<double>(e.start_tick) * dt;
  const double end = static_cast<double>(e.end_tick + 1) * dt;
  const double now = static_cast<double>(tick) * dt;
  return std::max(0.0, std::min(now, end) - std::min(now, begin));
}

}  // namespace

const char* to_string(ThreatKind kind) {
  switch (kind) {
    case ThreatKind::ShrAttack: return "shr_attack";
    case ThreatKind::NlosObstruction: return "nlos_obstruction";
    case ThreatKind::WeakSignalDrift: return "weak_signal_drift";
    case ThreatKind::Overheat: return "overheat";
    case ThreatKind::BatteryDrainAccelerate: return "battery_drain_accelerate";
    case ThreatKind::AnchorOutage: return "anchor_outage";
  }
  return "unknown";
}

ThreatKind threat_kind_from_string(const std::string& name) {
  if (name == "shr_attack") return ThreatKind::ShrAttack;
  if (name == "nlos_obstruction") return ThreatKind::NlosObstruction;
  if (name == "weak_signal_drift") return ThreatKind::WeakSignalDrift;
  if (name == "overheat") return ThreatKind::Overheat;
  if (name == "battery_drain_accelerate") return ThreatKind::BatteryDrainAccelerate;
  if (name == "anchor_outage") return ThreatKind::AnchorOutage;
  throw std::invalid_argument("unknown threat kind: " + name);
}

DischargeCurve DischargeCurve::default_curve() {
  DischargeCurve curve;
  curve.points = {
      {0.0, 4050.0},   {0.05, 3950.0},  {0.15, 3820.0}, {0.30, 3700.0},
      {0.50, 3560.0},  {0.65, 3450.0},  {0.75, 3360.0}, {0.85, 3230.0},
      {0.9375, 3092.0}, {0.97, 2980.0}, {1.0, 2800.0},
  };
  return curve;
}

double battery_voltage(double charge_consumed, const DischargeCurve& curve) {
  const auto& pts = curve.points;
  if (pts.empty()) throw std::invalid_argument("battery_voltage: empty curve");
  if (charge_consumed <= pts.front().first) return pts.front().second;
  if (charge_consumed >= pts.back().first) return pts.back().second;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (charge_consumed <= pts[i].first) {
      const auto& [c0, v0] = pts[i - 1];
      const auto& [c1, v1] = pts[i];
      const double t = (charge_consumed - c0) / (c1 - c0);
      return v0 + t * (v1 - v0);
    }
  }
  return pts.back().second;
}

ThreatSchedule::ThreatSchedule(std::vector<ThreatEvent> events, const std::vector<Anchor>& anchors,
                               NodeEnvironment env)
    : events_(std::move(events)), env_(std::move(env)) {
  for (const auto& e : events_) {
    if (e.start_tick > e.end_tick) {
      throw std::invalid_argument("threat window must satisfy start <= end");
    }
    for (const auto& target : e.target_anchors) {
      const bool known = std::any_of(anchors.begin(), anchors.end(),
                                     [&](const Anchor& a) { return a.id == target; });
      if (!known) {
        throw UnknownAnchorTarget("threat targets unknown anchor: " + target);
      }
    }
    switch (e.kind) {
      case ThreatKind::ShrAttack:
        if (!(e.spoof_bias_m >= 0.0)) throw std::invalid_argument("spoof_bias_m must be >= 0");
        break;
      case ThreatKind::NlosObstruction:
        if (!(e.excess_delay_m >= 0.0)) throw std::invalid_argument("excess_delay_m must be >= 0");
        if (!(e.extra_path_loss_db >= 0.0)) {
          throw std::invalid_argument("extra_path_loss_db must be >= 0");
        }
        break;
      case ThreatKind::WeakSignalDrift:
        if (!(e.extra_path_loss_db >= 0.0)) {
          throw std::invalid_argument("extra_path_loss_db must be >= 0");
        }
        break;
      case ThreatKind::Overheat:
        if (!std::isfinite(e.heat_rate_c_per_s)) {
          throw std::invalid_argument("heat_rate_c_per_s must be finite");
        }
        break;
      case ThreatKind::BatteryDrainAccelerate:
        if (!(e.draw_multiplier >= 1.0)) {
          throw std::invalid_argument("draw_multiplier must be >= 1");
        }
        break;
      case ThreatKind::AnchorOutage:
        break;
    }
  }
}

double ThreatSchedule::consumed_charge(int tick) const {
  const double dt = env_.tick_interval_s;
  double energy = env_.battery.draw_w * static_cast<double>(tick) * dt;
  for (const auto& e : events_) {
    if (e.kind != ThreatKind::BatteryDrainAccelerate) continue;
    energy += env_.battery.draw_w * (e.draw_multiplier - 1.0) * active_overlap_s(e, tick, dt);
  }
  return std::min(1.0, energy / env_.battery.capacity_j);
}

NodeState ThreatSchedule::base_node_state(Position2D position, double clock_offset_s,
                                          double clock_drift, int tick) const {
  NodeState node;
  node.true_position = position;
  node.temperature_c = env_.ambient_temperature_c;
  const double dt = env_.tick_interval_s;
  const double consumed =
      std::min(1.0, env_.battery.draw_w * static_cast<double>(tick) * dt / env_.battery.capacity_j);
  node.battery_charge = 1.0 - consumed;
  node.battery_voltage_mv = battery_voltage(consumed, env_.battery.curve);
  node.clock_offset_s = clock_offset_s;
  node.clock_drift = clock_drift;
  return node;
}

void ThreatSchedule::apply(std::map<std::string, ChannelRealization>& channels, NodeState& node,
                           int tick) const {
  const double dt = env_.tick_interval_s;

  bool node_touched = false;
  for (const auto& e : events_) {
    if (e.kind == ThreatKind::Overheat || e.kind == ThreatKind::BatteryDrainAccelerate) {
      if (active_overlap_s(e, tick, dt) > 0.0 || e.active_at(tick)) node_touched = true;
    }
  }
  if (node_touched) {
    double temperature = env_.ambient_temperature_c;
    for (const auto& e : events_) {
      if (e.kind != ThreatKind::Overheat) continue;
      temperature += e.heat_rate_c_per_s * active_overlap_s(e, tick, dt);
    }
    node.temperature_c = temperature;
    const double consumed = consumed_charge(tick);
    node.battery_charge = 1.0 - consumed;
    node.battery_voltage_mv = battery_voltage(consumed, env_.battery.curve);
  }

  for (auto& [anchor_id, channel] : channels) {
    bool shr = false, nlos = false, outage = false;
    double spoof = 0.0, excess = 0.0, loss = 0.0;
    bool touched = false;
    for (const auto& e : events_) {
      if (!e.active_at(tick)) continue;
      if (std::find(e.target_anchors.begin(), e.target_anchors.end(), anchor_id) ==
          e.target_anchors.end()) {
        continue;
      }
      touched = true;
      switch (e.kind) {
        case ThreatKind::ShrAttack:
          shr = true;
          spoof = std::max(spoof, e.spoof_bias_m);
          break;
        case ThreatKind::NlosObstruction:
          nlos = true;
          excess = std::max(excess, e.excess_delay_m);
          loss += e.extra_path_loss_db;
          break;
        case ThreatKind::WeakSignalDrift:
          loss += e.extra_path_loss_db;
          break;
        case ThreatKind::AnchorOutage:
          outage = true;
          break;
        default:
          break;
      }
    }
    if (!touched) continue;
    channel.condition = shr ? ChannelCondition::ShrAttacked
                            : (nlos ? ChannelCondition::Nlos : ChannelCondition::Los);
    channel.spoof_bias_m = shr ? spoof : 0.0;
    channel.nlos_excess_delay_m = nlos ? excess : 0.0;
    channel.extra_path_loss_db = loss;
    channel.forced_outage = outage;
  }
}

}  // namespace uwbtrust
