#include "uwbtrust/trust.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace uwbtrust {
namespace {

constexpr double kGain = 2.1972245773362196;  // ln 9

double min_of(std::initializer_list<double> values) {
  return *std::min_element(values.begin(), values.end());
}

}  // namespace

double sigmoid_indicator(double m, const SigmoidParams& p) {
  if (p.m_low == p.m_high) {
    throw std::invalid_argument("sigmoid_indicator: m_low and m_high must differ");
  }
  return 1.0 / (1.0 + std::exp(-kGain * (m - p.m_low) / (p.m_high - p.m_low)));
}

const char* to_string(AssessmentMode mode) {
  return mode == AssessmentMode::Basic ? "basic" : "sequential";
}

double aggregate_link(const std::map<std::string, double>& values) {
  if (values.empty()) {
    throw EmptyLinkSet("aggregate_link: no link values");
  }
  double worst = 1.0;
  for (const auto& [id, value] : values) worst = std::min(worst, value);
  return worst;
}

double indicator_pdop(double m_pdop, int anchors_evaluated, const SigmoidParams& p) {
  if (anchors_evaluated < 3) return 1.0;
  return sigmoid_indicator(m_pdop, p);
}

IndexReport compute_indices(const IndicatorSet& ind, AssessmentMode mode) {
  IndexReport report;
  report.mode = mode;
  report.i_rel = min_of({ind.t_temp, ind.t_ml_star, ind.t_pdop, ind.t_sr, ind.t_bat,
                         ind.t_rssi_star, ind.t_na});
  report.i_res = ind.t_na;
  report.i_sec = min_of({ind.t_enc, ind.t_da, ind.t_auth, ind.t_sr, ind.t_ml_star});
  report.i_priv = ind.t_da;
  report.i_overall = min_of({report.i_rel, report.i_res, report.i_sec, report.i_priv});
  for (const auto& [id, link] : ind.links) report.anchors_evaluated.push_back(id);
  return report;
}

std::vector<std::string> select_anchors(AssessmentMode mode,
                                        const std::vector<std::string>& reachable,
                                        const std::map<std::string, LinkIndicators>& link_ind,
                                        double threshold) {
  if (mode == AssessmentMode::Basic) return reachable;
  std::vector<std::string> kept;
  for (const auto& id : reachable) {
    auto it = link_ind.find(id);
    if (it != link_ind.end() && it->second.minimum() >= threshold) kept.push_back(id);
  }
  return kept;
}

}  // namespace uwbtrust
