#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwbtrust/ranging.hpp"
#include "uwbtrust/trust.hpp"

namespace uwbtrust {

struct AllZeroCir : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooFewSamples : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kCirFeatureCount = 5;

// Hand-picked CIR shape descriptors. first_path_ratio and tap_kurtosis
// are invariant to positive scaling of the taps.
struct CirFeatures {
  double total_energy = 0.0;             // sum of squared taps
  double first_path_ratio = 0.0;         // |first path| / max |tap|, in [0,1]
  double rise_time_samples = 0.0;        // first path -> strongest tap
  double rms_delay_spread_samples = 0.0; // energy-weighted spread
  double tap_kurtosis = 0.0;

  Eigen::Matrix<double, kCirFeatureCount, 1> vector() const;
  static const std::array<const char*, kCirFeatureCount>& names();
};

// Throws AllZeroCir when every tap is zero.
CirFeatures extract_features(const Cir& cir);

// Gaussian reference of trusted-channel CIR features. Scores are the
// Mahalanobis distance to the reference pushed through a decreasing
// sigmoid, calibrated so the 95th-percentile calibration distance lands
// at 0.5. Anything consuming the [0,1] output can swap in another
// detector without touching the rest of the pipeline.
class CalibrationModel {
 public:
  // Needs >= 30 CIRs (TooFewSamples otherwise). Covariance gets a ridge
  // of 1e-6 x mean diagonal so near-constant features stay invertible.
  static CalibrationModel calibrate(const std::vector<Cir>& trusted_cirs);

  double mahalanobis(const CirFeatures& f) const;

  // Trust value in (0, 1) for a single CIR.
  double score_single(const Cir& cir) const;

  // Exchange-level score: minimum over the packets' scores (the least
  // trusted packet speaks for the exchange). Accepts 1 to 3 CIRs.
  double score(const std::vector<Cir>& cirs_of_exchange) const;

  double distance_scale() const { return distance_scale_; }
  const Eigen::Matrix<double, kCirFeatureCount, 1>& means() const { return means_; }
  const Eigen::Matrix<double, kCirFeatureCount, kCirFeatureCount>& covariance() const {
    return covariance_;
  }

  std::string to_json() const;
  static CalibrationModel from_json(const std::string& text);

 private:
  CalibrationModel() = default;

  Eigen::Matrix<double, kCirFeatureCount, 1> means_;
  Eigen::Matrix<double, kCirFeatureCount, kCirFeatureCount> covariance_;
  Eigen::LLT<Eigen::Matrix<double, kCirFeatureCount, kCirFeatureCount>> factor_;
  double distance_scale_ = 1.0;
};

}  // namespace uwbtrust
