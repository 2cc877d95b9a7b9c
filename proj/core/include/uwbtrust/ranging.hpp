#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "uwbtrust/geometry.hpp"
#include "uwbtrust/rng.hpp"

namespace uwbtrust {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// All simulated event times are snapped to a dyadic grid of 2^-46 s
// (~14 fs, three orders below the noise floor of any UWB timestamping
// hardware). Sums of on-grid times below 128 s are exact in double
// precision, so interval reconstruction from timestamps carries no
// floating-point fuzz of its own.
inline constexpr double kTimeQuantum = 0x1.0p-46;  // s

inline double quantize_time(double t) {
  return std::nearbyint(t * 0x1.0p46) * kTimeQuantum;
}

enum class ChannelCondition { Los, Nlos, ShrAttacked };

// Per-link propagation state for one tick. rssi_mean_db is the clean
// path-loss mean; threat attenuation accumulates separately in
// extra_path_loss_db so reapplying a threat schedule cannot compound.
struct ChannelRealization {
  ChannelCondition condition = ChannelCondition::Los;
  double true_distance_m = 1.0;
  double path_loss_exponent = 2.0;
  double rssi_mean_db = -70.0;
  double rssi_sigma_db = 1.0;
  double spoof_bias_m = 0.0;        // > 0 only when ShrAttacked
  double nlos_excess_delay_m = 0.0; // path stretch, meters equivalent
  double extra_path_loss_db = 0.0;
  bool forced_outage = false;

  double effective_rssi_mean_db() const { return rssi_mean_db - extra_path_loss_db; }
};

// Channel impulse response estimate recorded at packet reception.
struct Cir {
  std::vector<double> taps;      // real amplitudes
  int first_path_index = 0;      // leading-edge detector output
  double sample_spacing_ns = 1.0;
};

// One full double-sided two-way ranging exchange. Node timestamps
// (t_a, t_b, t_c) are in the node clock, anchor timestamps
// (tau_a, tau_b, tau_c) in the anchor clock. cirs holds the responses
// estimated for packets a, b, c in that order.
struct RangingRecord {
  std::string anchor_id;
  double t_a = 0.0, t_b = 0.0, t_c = 0.0;          // s, node clock
  double tau_a = 0.0, tau_b = 0.0, tau_c = 0.0;    // s, anchor clock
  double rssi_db = 0.0;
  std::vector<Cir> cirs;
  bool success = false;
};

struct RangeEstimate {
  std::string anchor_id;
  double range_m = 0.0;  // finite; may be negative under attack
  RangingRecord record;
};

// Log-distance path loss model.
struct PathLossParams {
  double reference_distance_m = 1.0;
  double rssi_at_reference_db = -70.0;
  double path_loss_exponent = 2.0;
};

// Packet error rate over RSSI: logistic in log-odds, anchored at a
// single published operating point. steepness is dB per decade of odds.
struct PerCurve {
  double anchor_rssi_db = -92.0;
  double anchor_per = 0.01;
  double steepness_db_per_decade = 1.5;
};

// Synthetic CIR generator shape parameters. Amplitudes scale with the
// channel's mean RSSI relative to reference_rssi_db, so received energy
// tracks path loss.
struct CirParams {
  int taps = 64;
  double sample_spacing_ns = 1.0;
  int first_path_base_index = 8;
  double first_path_jitter = 0.08;     // relative sigma on the direct amplitude
  double tail_scale = 0.25;            // multipath tail level vs direct path
  double tail_decay_taps = 6.0;
  double noise_floor = 0.01;
  double detect_threshold = 0.2;       // leading-edge: first tap above frac of max
  double reference_rssi_db = -70.0;    // RSSI at which direct amplitude = 1
  double nlos_min_attenuation_db = 6.0;
  double nlos_max_attenuation_db = 12.0;
  double shr_noise_scale = 0.4;        // jammer tap sigma vs legit direct amplitude
};

struct RangingParams {
  double response_delay_anchor_s = 1.0e-3;  // D_a
  double response_delay_node_s = 2.0e-3;    // D_n
  double timestamp_noise_s = 3.0e-10;       // sigma per reception event
  PerCurve per;
  CirParams cir;
};

struct InvalidRecord : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mean RSSI at a given distance under the log-distance model.
// Throws std::invalid_argument for distance <= 0.
double rssi_from_path(double distance_m, const PathLossParams& env);

// Packet error probability in [0, 1], monotone non-increasing in rssi.
double packet_error_prob(double rssi_db, const PerCurve& curve = {});

// Draws one synthetic CIR matching the channel condition.
Cir synthesize_cir(const ChannelRealization& channel, const CirParams& params, Rng& rng);

// Simulates the four-packet exchange at timestamp level. Always consumes
// the same rng draws for a given channel condition, whether or not the
// exchange succeeds, so downstream links see a stable stream.
RangingRecord simulate_exchange(const NodeState& node, const Anchor& anchor,
                                const ChannelRealization& channel,
                                const RangingParams& params, Rng& rng);

// Asymmetric DS-TWR range from the six timestamps. Throws InvalidRecord
// on success=false or non-monotone timestamps.
RangeEstimate compute_range(const RangingRecord& record);

}  // namespace uwbtrust
