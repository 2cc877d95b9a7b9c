#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace uwbtrust {

// 2D position, meters. Coordinates must stay finite.
struct Position2D {
  double x = 0.0;  // m
  double y = 0.0;  // m

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
  bool operator==(const Position2D&) const = default;
};

// Fixed reference device at a known position.
struct Anchor {
  std::string id;
  Position2D position;
};

// Mobile node state for one tick. Clock terms model the node's local
// timebase: local_time = clock_offset + (1 + clock_drift) * global_time.
struct NodeState {
  Position2D true_position;
  double temperature_c = 25.0;
  double battery_voltage_mv = 4050.0;
  double battery_charge = 1.0;   // remaining fraction, [0,1]
  double clock_offset_s = 0.0;
  double clock_drift = 0.0;      // fractional (20 ppm -> 20e-6)
};

// Discrete simulation time.
struct SimClock {
  std::int64_t tick_index = 0;   // >= 0
  double tick_interval_s = 0.1;  // > 0

  double seconds() const { return static_cast<double>(tick_index) * tick_interval_s; }
};

// Euclidean distance, meters.
double distance(const Position2D& a, const Position2D& b);

}  // namespace uwbtrust
