#include "uwbtrust/ranging.hpp"

#include <algorithm>
#include <cmath>

namespace uwbtrust {
namespace {

constexpr double kLn10 = 2.302585092994045684;

// a*b - c*d with one rounding error of the result instead of the
// operands (Kahan's determinant kernel). Eq-level DS-TWR forms the
// difference of two near-equal ~1e-6 s^2 products to extract a ~1e-11
// s^2 time-of-flight term; the naive expression would lose it.
double product_difference(double a, double b, double c, double d) {
  const double w = c * d;
  const double e = std::fma(-c, d, w);
  const double f = std::fma(a, b, -w);
  return f + e;
}

int detect_first_path(const std::vector<double>& taps, double threshold_frac) {
  double peak = 0.0;
  for (double t : taps) peak = std::max(peak, std::abs(t));
  if (peak <= 0.0) return 0;
  const double threshold = threshold_frac * peak;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    if (std::abs(taps[i]) >= threshold) return static_cast<int>(i);
  }
  return 0;
}

}  // namespace

double rssi_from_path(double distance_m, const PathLossParams& env) {
  if (!(distance_m > 0.0)) {
    throw std::invalid_argument("rssi_from_path: distance must be > 0");
  }
  return env.rssi_at_reference_db -
         10.0 * env.path_loss_exponent * std::log10(distance_m / env.reference_distance_m);
}

double packet_error_prob(double rssi_db, const PerCurve& curve) {
  // Linear in log10-odds: steepness dB of RSSI per decade of error odds.
  const double odds0 = curve.anchor_per / (1.0 - curve.anchor_per);
  const double log_odds = std::log(odds0) -
                          (rssi_db - curve.anchor_rssi_db) * (kLn10 / curve.steepness_db_per_decade);
  return 1.0 / (1.0 + std::exp(-log_odds));
}

Cir synthesize_cir(const ChannelRealization& channel, const CirParams& params, Rng& rng) {
  const int n = params.taps;
  std::vector<double> taps(static_cast<std::size_t>(n), 0.0);

  // Received amplitude tracks the link budget.
  const double amp =
      std::pow(10.0, (channel.effective_rssi_mean_db() - params.reference_rssi_db) / 20.0);

  // Thermal noise floor, every condition.
  for (int i = 0; i < n; ++i) {
    taps[static_cast<std::size_t>(i)] = params.noise_floor * amp * rng.gaussian();
  }

  const int base = std::min(params.first_path_base_index, n - 1);

  switch (channel.condition) {
    case ChannelCondition::Los: {
      const double direct = amp * (1.0 + params.first_path_jitter * rng.gaussian());
      taps[static_cast<std::size_t>(base)] += direct;
      for (int i = 0; i < n; ++i) {
        const double g = std::abs(rng.gaussian());
        if (i > base) {
          taps[static_cast<std::size_t>(i)] +=
              params.tail_scale * amp * std::exp(-(i - base) / params.tail_decay_taps) * g;
        }
      }
      break;
    }
    case ChannelCondition::Nlos: {
      // Direct path delayed and attenuated; diffuse cluster peaks later.
      const double meters_per_sample = kSpeedOfLight * params.sample_spacing_ns * 1e-9;
      const int delay =
          std::max(1, static_cast<int>(std::lround(channel.nlos_excess_delay_m / meters_per_sample)));
      const int first = std::min(base + delay, n - 2);
      const int peak_idx = std::min(first + 3, n - 1);
      const double peak = amp * (1.0 + params.first_path_jitter * rng.gaussian());
      const double attenuation_db =
          rng.uniform(params.nlos_min_attenuation_db, params.nlos_max_attenuation_db);
      const double first_amp = peak * std::pow(10.0, -attenuation_db / 20.0);
      for (int i = 0; i < n; ++i) {
        const double g = std::abs(rng.gaussian());
        if (i < first) continue;
        double level;
        if (i <= peak_idx) {
          const double frac = (peak_idx == first) ? 1.0
                                                  : static_cast<double>(i - first) /
                                                        static_cast<double>(peak_idx - first);
          level = first_amp + (peak - first_amp) * frac;
        } else {
          level = peak * std::exp(-(i - peak_idx) / (1.5 * params.tail_decay_taps));
        }
        taps[static_cast<std::size_t>(i)] += level * (i == first ? 1.0 : g);
      }
      break;
    }
    case ChannelCondition::ShrAttacked: {
      // Jammer energy swamps the estimate: broadband noise, no leading edge.
      for (int i = 0; i < n; ++i) {
        taps[static_cast<std::size_t>(i)] += params.shr_noise_scale * amp * rng.gaussian();
      }
      const double remnant = 0.5 * amp * (1.0 + params.first_path_jitter * rng.gaussian());
      taps[static_cast<std::size_t>(base)] += remnant;
      break;
    }
  }

  Cir cir;
  cir.taps = std::move(taps);
  cir.sample_spacing_ns = params.sample_spacing_ns;
  cir.first_path_index = detect_first_path(cir.taps, params.detect_threshold);
  return cir;
}

RangingRecord simulate_exchange(const NodeState& node, const Anchor& anchor,
                                const ChannelRealization& channel,
                                const RangingParams& params, Rng& rng) {
  if (!(params.response_delay_anchor_s > 0.0) || !(params.response_delay_node_s > 0.0)) {
    throw std::invalid_argument("simulate_exchange: response delays must be > 0");
  }
  if (!(channel.true_distance_m >= 0.0)) {
    throw std::invalid_argument("simulate_exchange: distance must be >= 0");
  }

  // Draw order is fixed per channel condition: RSSI, packet deliveries,
  // reception timestamp noise, then CIRs for packets a, b, c.
  const double rssi = rng.gaussian(channel.effective_rssi_mean_db(), channel.rssi_sigma_db);

  const double per = packet_error_prob(rssi, params.per);
  bool delivered = true;
  for (int packet = 0; packet < 4; ++packet) {
    const bool ok = rng.bernoulli(1.0 - per);
    delivered = delivered && ok;
  }

  double noise[3];
  for (double& sample : noise) {
    sample = quantize_time(params.timestamp_noise_s * rng.gaussian());
  }

  RangingRecord record;
  record.anchor_id = anchor.id;
  record.rssi_db = rssi;
  record.cirs.reserve(3);
  for (int packet = 0; packet < 3; ++packet) {
    record.cirs.push_back(synthesize_cir(channel, params.cir, rng));
  }

  // Effective one-way flight time; an SHR attack pulls the detected
  // leading edge early, which shortens it.
  const double tof = quantize_time(
      (channel.true_distance_m + channel.nlos_excess_delay_m - channel.spoof_bias_m) /
      kSpeedOfLight);
  const double delay_anchor = quantize_time(params.response_delay_anchor_s);
  const double delay_node = quantize_time(params.response_delay_node_s);

  // Global timeline, origin at the node's first transmission. The anchor
  // clock is the global timeline; the node clock applies offset + drift.
  const double rx_a = tof;
  const double tx_b = rx_a + delay_anchor;
  const double rx_b = tx_b + tof;
  const double tx_c = rx_b + delay_node;
  const double rx_c = tx_c + tof;

  const auto node_clock = [&](double global) {
    return quantize_time(node.clock_offset_s + (1.0 + node.clock_drift) * global);
  };

  record.t_a = node_clock(0.0);
  record.tau_a = rx_a + noise[0];
  record.tau_b = tx_b;
  record.t_b = node_clock(rx_b) + noise[1];
  record.t_c = node_clock(tx_c);
  record.tau_c = rx_c + noise[2];
  record.success = delivered && !channel.forced_outage;
  return record;
}

RangeEstimate compute_range(const RangingRecord& record) {
  if (!record.success) {
    throw InvalidRecord("compute_range: exchange did not complete");
  }
  if (!(record.t_a < record.t_b && record.t_b < record.t_c) ||
      !(record.tau_a < record.tau_b && record.tau_b < record.tau_c)) {
    throw InvalidRecord("compute_range: non-monotone timestamps");
  }

  const double round_node = record.t_b - record.t_a;      // R_n
  const double delay_node = record.t_c - record.t_b;      // D_n
  const double delay_anchor = record.tau_b - record.tau_a;  // D_a
  const double round_anchor = record.tau_c - record.tau_b;  // R_a

  const double numerator = product_difference(round_anchor, round_node, delay_anchor, delay_node);
  const double denominator = round_anchor + delay_anchor + round_node + delay_node;

  RangeEstimate estimate;
  estimate.anchor_id = record.anchor_id;
  estimate.range_m = kSpeedOfLight * numerator / denominator;
  estimate.record = record;
  return estimate;
}

}  // namespace uwbtrust
