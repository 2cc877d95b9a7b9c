#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uwbtrust/anomaly.hpp"
#include "uwbtrust/localization.hpp"
#include "uwbtrust/ranging.hpp"
#include "uwbtrust/trust.hpp"

namespace uwbtrust {

// Raw per-tick measurements handed to the assessment: node sensor
// readings plus one ranging record per configured anchor (failed
// exchanges included, flagged by record.success).
struct LinkMeasurement {
  std::string anchor_id;
  RangingRecord record;
};

struct TickMeasurements {
  double temperature_c = 25.0;
  double battery_voltage_mv = 4050.0;
  std::vector<LinkMeasurement> links;
};

// Inputs for indicator evaluation over an already-chosen anchor set:
// only successful exchanges belong in links; m_pdop refers to the
// current position estimate and is absent when none exists.
struct AssessmentSnapshot {
  double temperature_c = 25.0;
  double battery_voltage_mv = 4050.0;
  std::vector<const LinkMeasurement*> links;
  std::optional<double> m_pdop;
};

// Maps every metric of the snapshot to its indicator. Binary scheme
// flags map to exactly 0 or 1. Throws EmptyLinkSet when links is empty.
IndicatorSet evaluate_indicators(const AssessmentSnapshot& snapshot, const TrustConfig& config,
                                 const CalibrationModel& detector);

struct AssessOutcome {
  AssessmentMode mode = AssessmentMode::Basic;
  // Link indicators for every reachable anchor (pre-filter view).
  std::map<std::string, LinkIndicators> link_screen;
  std::vector<std::string> selected;            // evaluated set, scenario order
  std::map<std::string, double> ranges_m;       // per selected anchor
  std::optional<PositionEstimate> estimate;     // empty = localization failed
  std::string failure_reason;
  std::optional<double> m_pdop;
  int m_na = 0;
  IndicatorSet indicators;
  IndexReport indices;
};

// One-tick assessment. Basic evaluates everything on all reachable
// anchors. Sequential first screens link indicators on all reachable
// anchors, keeps those above the threshold, then localizes and evaluates
// all indicators (link minima included) on the kept set only. Indices
// are produced even when localization fails; the shortage shows up in
// t_na.
AssessOutcome assess(const TickMeasurements& measurements, const std::vector<Anchor>& anchors,
                     AssessmentMode mode, const TrustConfig& config,
                     const CalibrationModel& detector);

}  // namespace uwbtrust
