#include "uwbtrust/assess.hpp"

#include <algorithm>
#include <cmath>

namespace uwbtrust {
namespace {

LinkIndicators link_indicators_for(const RangingRecord& record, const TrustConfig& config,
                                   const CalibrationModel& detector) {
  LinkIndicators out;
  out.t_ml = detector.score(record.cirs);
  out.t_rssi = sigmoid_indicator(record.rssi_db, config.rssi);
  return out;
}

}  // namespace

IndicatorSet evaluate_indicators(const AssessmentSnapshot& snapshot, const TrustConfig& config,
                                 const CalibrationModel& detector) {
  if (snapshot.links.empty()) {
    throw EmptyLinkSet("evaluate_indicators: no successful exchange to evaluate");
  }

  IndicatorSet ind;
  ind.t_temp = sigmoid_indicator(snapshot.temperature_c, config.temp);
  ind.t_bat = sigmoid_indicator(snapshot.battery_voltage_mv, config.bat);

  std::map<std::string, double> ml_values;
  std::map<std::string, double> rssi_values;
  for (const LinkMeasurement* link : snapshot.links) {
    const LinkIndicators li = link_indicators_for(link->record, config, detector);
    ind.links[link->anchor_id] = li;
    ml_values[link->anchor_id] = li.t_ml;
    rssi_values[link->anchor_id] = li.t_rssi;
  }
  ind.t_ml_star = aggregate_link(ml_values);
  ind.t_rssi_star = aggregate_link(rssi_values);

  const int m_na = static_cast<int>(snapshot.links.size());
  ind.t_na = sigmoid_indicator(static_cast<double>(m_na), config.na);
  ind.t_pdop = snapshot.m_pdop.has_value() ? indicator_pdop(*snapshot.m_pdop, m_na, config.pdop)
                                           : (m_na < 3 ? 1.0 : 0.0);

  ind.t_enc = config.encryption ? 1.0 : 0.0;
  ind.t_auth = config.authentication ? 1.0 : 0.0;
  ind.t_sr = config.secure_ranging ? 1.0 : 0.0;
  ind.t_da = config.dynamic_addressing ? 1.0 : 0.0;
  return ind;
}

AssessOutcome assess(const TickMeasurements& measurements, const std::vector<Anchor>& anchors,
                     AssessmentMode mode, const TrustConfig& config,
                     const CalibrationModel& detector) {
  AssessOutcome out;
  out.mode = mode;

  // Reachable = full exchange completed this tick.
  std::vector<const LinkMeasurement*> reachable;
  std::vector<std::string> reachable_ids;
  for (const auto& link : measurements.links) {
    if (!link.record.success) continue;
    reachable.push_back(&link);
    reachable_ids.push_back(link.anchor_id);
    out.link_screen[link.anchor_id] = link_indicators_for(link.record, config, detector);
  }

  const auto kept_ids =
      select_anchors(mode, reachable_ids, out.link_screen, config.trust_threshold);
  std::vector<const LinkMeasurement*> kept;
  for (const LinkMeasurement* link : reachable) {
    if (std::find(kept_ids.begin(), kept_ids.end(), link->anchor_id) != kept_ids.end()) {
      kept.push_back(link);
    }
  }
  out.selected = kept_ids;
  out.m_na = static_cast<int>(kept.size());

  // Localize on the evaluated set.
  std::vector<RangeEstimate> ranges;
  std::vector<Anchor> kept_anchors;
  for (const LinkMeasurement* link : kept) {
    ranges.push_back(compute_range(link->record));
    out.ranges_m[link->anchor_id] = ranges.back().range_m;
    for (const auto& a : anchors) {
      if (a.id == link->anchor_id) kept_anchors.push_back(a);
    }
  }
  if (kept.size() < 3) {
    out.failure_reason = "fewer than 3 evaluated anchors";
  } else {
    try {
      out.estimate = locate(ranges, kept_anchors);
      try {
        out.m_pdop = pdop(out.estimate->position, kept_anchors);
      } catch (const std::runtime_error&) {
        out.m_pdop.reset();  // geometry too degenerate for a DOP value
      }
    } catch (const std::runtime_error& err) {
      out.failure_reason = err.what();
    }
  }

  AssessmentSnapshot snapshot;
  snapshot.temperature_c = measurements.temperature_c;
  snapshot.battery_voltage_mv = measurements.battery_voltage_mv;
  snapshot.links = kept;
  snapshot.m_pdop = out.m_pdop;

  if (kept.empty()) {
    // Total distrust still yields a report: neutral link minima, t_na at
    // m_na = 0, localization marked failed.
    IndicatorSet ind;
    ind.t_temp = sigmoid_indicator(snapshot.temperature_c, config.temp);
    ind.t_bat = sigmoid_indicator(snapshot.battery_voltage_mv, config.bat);
    ind.t_na = sigmoid_indicator(0.0, config.na);
    ind.t_pdop = 1.0;
    ind.t_enc = config.encryption ? 1.0 : 0.0;
    ind.t_auth = config.authentication ? 1.0 : 0.0;
    ind.t_sr = config.secure_ranging ? 1.0 : 0.0;
    ind.t_da = config.dynamic_addressing ? 1.0 : 0.0;
    out.indicators = ind;
  } else {
    out.indicators = evaluate_indicators(snapshot, config, detector);
  }
  out.indices = compute_indices(out.indicators, mode);
  return out;
}

}  // namespace uwbtrust
