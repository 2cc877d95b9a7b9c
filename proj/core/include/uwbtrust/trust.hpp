#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace uwbtrust {

struct EmptyLinkSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tuning pair for the indicator sigmoid: the mapping crosses 0.5 at
// m_low and reaches 0.9 at m_high. m_high < m_low flips the orientation
// (larger metric = less trustworthy).
struct SigmoidParams {
  double m_low;
  double m_high;
};

// T = 1 / (1 + exp(-g (m - m_low) / (m_high - m_low))), g = ln 9.
// Output in (0, 1). Throws std::invalid_argument when m_low == m_high.
double sigmoid_indicator(double m, const SigmoidParams& p);

enum class AssessmentMode { Basic, Sequential };

const char* to_string(AssessmentMode mode);

// Indicator tuning and system scheme switches. Defaults are the
// reference operating values for a DW1000-class node; see the scenario
// format documentation.
struct TrustConfig {
  SigmoidParams temp{85.0, 75.0};      // deg C
  SigmoidParams bat{3092.0, 3360.0};   // mV
  SigmoidParams rssi{-92.0, -87.0};    // dB
  SigmoidParams pdop{8.0, 3.0};
  SigmoidParams na{3.0, 4.5};          // anchors in use
  bool encryption = true;
  bool authentication = true;
  bool secure_ranging = true;
  bool dynamic_addressing = true;
  double trust_threshold = 0.5;
};

struct LinkIndicators {
  double t_ml = 1.0;
  double t_rssi = 1.0;

  double minimum() const { return t_ml < t_rssi ? t_ml : t_rssi; }
};

// All indicator values for one tick. Link minima are taken over the
// anchors in `links` (the evaluated set); they default to 1 when no link
// is present so the index algebra degrades through t_na alone.
struct IndicatorSet {
  double t_temp = 1.0;
  double t_bat = 1.0;
  std::map<std::string, LinkIndicators> links;
  double t_ml_star = 1.0;
  double t_rssi_star = 1.0;
  double t_pdop = 1.0;
  double t_na = 1.0;
  double t_enc = 1.0;
  double t_auth = 1.0;
  double t_sr = 1.0;
  double t_da = 1.0;
};

struct IndexReport {
  double i_rel = 1.0;
  double i_res = 1.0;
  double i_sec = 1.0;
  double i_priv = 1.0;
  double i_overall = 1.0;
  std::vector<std::string> anchors_evaluated;
  AssessmentMode mode = AssessmentMode::Basic;
};

// Minimum over a per-anchor indicator map. Throws EmptyLinkSet.
double aggregate_link(const std::map<std::string, double>& values);

// PDoP indicator: sigmoid when >= 3 anchors are evaluated, exactly 1
// otherwise (with fewer anchors the geometry term carries no meaning).
double indicator_pdop(double m_pdop, int anchors_evaluated, const SigmoidParams& p);

// Attribute indices, each the minimum of its constituent indicators:
//   reliability  = min{temp, ml*, pdop, sr, bat, rssi*, na}
//   resilience   = na
//   security     = min{enc, da, auth, sr, ml*}
//   privacy      = da
// and the overall index is the minimum of the four.
IndexReport compute_indices(const IndicatorSet& ind, AssessmentMode mode);

// Basic keeps every reachable anchor; Sequential keeps anchors whose
// worst link indicator clears the threshold. An empty result is legal.
std::vector<std::string> select_anchors(AssessmentMode mode,
                                        const std::vector<std::string>& reachable,
                                        const std::map<std::string, LinkIndicators>& link_ind,
                                        double threshold = 0.5);

}  // namespace uwbtrust
