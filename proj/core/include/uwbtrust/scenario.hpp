#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwbtrust/anomaly.hpp"
#include "uwbtrust/geometry.hpp"
#include "uwbtrust/ranging.hpp"
#include "uwbtrust/threats.hpp"
#include "uwbtrust/trust.hpp"

namespace uwbtrust {

// Malformed scenario document (syntax or wrong types/fields).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Well-formed document violating a scenario invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Waypoint {
  int tick = 0;
  Position2D position;
};

enum class RunMode { Basic, Sequential, Both };

const char* to_string(RunMode mode);

// How to obtain the CIR anomaly detector: either an inline serialized
// model, or calibration on a deterministic synthetic line-of-sight set.
struct DetectorCalibrationSpec {
  int num_cirs = 500;
  std::uint64_t seed = 7;
  double min_distance_m = 1.0;
  double max_distance_m = 5.0;
  CirParams cir;             // generator shape used for calibration
  PathLossParams path_loss;  // link budget for the calibration distances
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  std::vector<Anchor> anchors;
  std::vector<Waypoint> trajectory;
  double tick_interval_s = 0.1;
  int total_ticks = 100;
  std::uint64_t rng_seed = 1;
  RunMode mode = RunMode::Both;
  TrustConfig trust;
  PathLossParams path_loss;
  RangingParams ranging;
  double channel_rssi_sigma_db = 1.0;
  double node_ambient_temperature_c = 25.0;
  double node_clock_offset_s = 0.0;
  double node_clock_drift = 5e-6;
  BatteryParams battery;
  std::vector<ThreatEvent> threats;
  std::optional<std::string> detector_model_json;  // overrides calibration when set
  DetectorCalibrationSpec detector_calibration;

  // Node position at a tick: linear interpolation between waypoints,
  // clamped at both ends of the trajectory.
  Position2D position_at(int tick) const;
};

// Parses and fully validates a scenario document. Throws ParseError or
// ValidationError; source_name seasons the messages.
ScenarioConfig parse_scenario(const std::string& json_text, const std::string& source_name);

// Reads a scenario file; std::ios_base::failure on I/O trouble.
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Deterministic synthetic trusted-channel set for detector calibration.
std::vector<Cir> synthesize_calibration_set(const DetectorCalibrationSpec& spec);

// Inline model if present, otherwise calibrate per the spec.
CalibrationModel resolve_detector(const ScenarioConfig& config);

// Paper-default trust tuning and channel parameters as a JSON document,
// for `uwbtrust config --dump-defaults`.
std::string dump_defaults_json();

struct BundledScenario {
  std::string name;
  std::string description;
  std::string json_text;
};

// Scenarios compiled into the library: a benign reference run, an
// anchor-walkout geometry-degradation run, and an SHR-attack run.
const std::vector<BundledScenario>& bundled_scenarios();

// Loads a bundled scenario by name.
std::optional<ScenarioConfig> find_bundled_scenario(const std::string& name);

}  // namespace uwbtrust
