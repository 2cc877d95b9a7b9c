#include "uwbtrust/anomaly.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace uwbtrust {
namespace {

using Json = nlohmann::json;
using FeatureVec = Eigen::Matrix<double, kCirFeatureCount, 1>;
using FeatureMat = Eigen::Matrix<double, kCirFeatureCount, kCirFeatureCount>;

constexpr int kMinCalibrationCirs = 30;

// Order statistic at the q-quantile; values at or below it make up a
// fraction >= q of the sample.
double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto idx = static_cast<std::size_t>(std::ceil(q * n));
  idx = std::min(idx, values.size() - 1);
  return values[idx];
}

}  // namespace

FeatureVec CirFeatures::vector() const {
  FeatureVec v;
  v << total_energy, first_path_ratio, rise_time_samples, rms_delay_spread_samples, tap_kurtosis;
  return v;
}

const std::array<const char*, kCirFeatureCount>& CirFeatures::names() {
  static const std::array<const char*, kCirFeatureCount> kNames = {
      "total_energy", "first_path_ratio", "rise_time_samples", "rms_delay_spread_samples",
      "tap_kurtosis"};
  return kNames;
}

CirFeatures extract_features(const Cir& cir) {
  const auto& taps = cir.taps;
  const auto n = taps.size();

  double energy = 0.0;
  double peak = 0.0;
  std::size_t peak_idx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    energy += taps[i] * taps[i];
    const double a = std::abs(taps[i]);
    if (a > peak) {
      peak = a;
      peak_idx = i;
    }
  }
  if (energy <= 0.0 || peak <= 0.0) {
    throw AllZeroCir("extract_features: all taps are zero");
  }

  const auto fpi = static_cast<std::size_t>(
      std::clamp(cir.first_path_index, 0, static_cast<int>(n) - 1));

  CirFeatures f;
  f.total_energy = energy;
  f.first_path_ratio = std::abs(taps[fpi]) / peak;
  f.rise_time_samples = peak_idx >= fpi ? static_cast<double>(peak_idx - fpi) : 0.0;

  // Energy-weighted delay spread around the energy centroid.
  double centroid = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    centroid += static_cast<double>(i) * taps[i] * taps[i] / energy;
  }
  double spread = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(i) - centroid;
    spread += d * d * taps[i] * taps[i] / energy;
  }
  f.rms_delay_spread_samples = std::sqrt(spread);

  // Population kurtosis of the tap amplitudes.
  double mean = 0.0;
  for (double t : taps) mean += t;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m4 = 0.0;
  for (double t : taps) {
    const double d = t - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  f.tap_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
  return f;
}

CalibrationModel CalibrationModel::calibrate(const std::vector<Cir>& trusted_cirs) {
  if (trusted_cirs.size() < kMinCalibrationCirs) {
    throw TooFewSamples("calibrate: need >= 30 trusted CIRs");
  }

  std::vector<FeatureVec> samples;
  samples.reserve(trusted_cirs.size());
  for (const auto& cir : trusted_cirs) samples.push_back(extract_features(cir).vector());
  const double count = static_cast<double>(samples.size());

  CalibrationModel model;
  model.means_ = FeatureVec::Zero();
  for (const auto& s : samples) model.means_ += s;
  model.means_ /= count;

  FeatureMat cov = FeatureMat::Zero();
  for (const auto& s : samples) {
    const FeatureVec d = s - model.means_;
    cov += d * d.transpose();
  }
  cov /= count;
  const double ridge = 1e-6 * cov.diagonal().mean();
  cov += ridge * FeatureMat::Identity();
  model.covariance_ = cov;
  model.factor_.compute(cov);

  // Anchor the score sigmoid: a distance at the calibration 95th
  // percentile maps to exactly 0.5.
  std::vector<double> distances;
  distances.reserve(samples.size());
  for (const auto& s : samples) {
    const FeatureVec d = s - model.means_;
    const FeatureVec w = model.factor_.solve(d);
    distances.push_back(std::sqrt(d.dot(w)));
  }
  model.distance_scale_ = quantile(std::move(distances), 0.95);
  return model;
}

double CalibrationModel::mahalanobis(const CirFeatures& f) const {
  const FeatureVec d = f.vector() - means_;
  const FeatureVec w = factor_.solve(d);
  return std::sqrt(d.dot(w));
}

double CalibrationModel::score_single(const Cir& cir) const {
  // Reuses the indicator sigmoid with a decreasing orientation: distance
  // distance_scale -> 0.5, distance_scale/2 -> 0.9, zero -> ~0.99.
  const double d = mahalanobis(extract_features(cir));
  return sigmoid_indicator(d, SigmoidParams{distance_scale_, distance_scale_ / 2.0});
}

double CalibrationModel::score(const std::vector<Cir>& cirs_of_exchange) const {
  if (cirs_of_exchange.empty() || cirs_of_exchange.size() > 3) {
    throw std::invalid_argument("score: expected 1 to 3 CIRs");
  }
  double worst = 1.0;
  for (const auto& cir : cirs_of_exchange) {
    worst = std::min(worst, score_single(cir));
  }
  return worst;
}

std::string CalibrationModel::to_json() const {
  Json doc;
  doc["features"] = std::vector<std::string>(names().begin(), names().end());
  doc["means"] = std::vector<double>(means_.data(), means_.data() + kCirFeatureCount);
  Json rows = Json::array();
  for (int r = 0; r < kCirFeatureCount; ++r) {
    Json row = Json::array();
    for (int c = 0; c < kCirFeatureCount; ++c) row.push_back(covariance_(r, c));
    rows.push_back(std::move(row));
  }
  doc["covariance"] = std::move(rows);
  doc["distance_scale"] = distance_scale_;
  return doc.dump(2);
}

CalibrationModel CalibrationModel::from_json(const std::string& text) {
  const Json doc = Json::parse(text);
  CalibrationModel model;
  const auto means = doc.at("means").get<std::vector<double>>();
  if (means.size() != kCirFeatureCount) {
    throw std::invalid_argument("CalibrationModel: expected 5 feature means");
  }
  for (int i = 0; i < kCirFeatureCount; ++i) model.means_(i) = means[static_cast<std::size_t>(i)];
  const auto& rows = doc.at("covariance");
  if (rows.size() != kCirFeatureCount) {
    throw std::invalid_argument("CalibrationModel: expected 5x5 covariance");
  }
  for (int r = 0; r < kCirFeatureCount; ++r) {
    const auto row = rows.at(static_cast<std::size_t>(r)).get<std::vector<double>>();
    if (row.size() != kCirFeatureCount) {
      throw std::invalid_argument("CalibrationModel: expected 5x5 covariance");
    }
    for (int c = 0; c < kCirFeatureCount; ++c) model.covariance_(r, c) = row[static_cast<std::size_t>(c)];
  }
  model.distance_scale_ = doc.at("distance_scale").get<double>();
  if (!(model.distance_scale_ > 0.0)) {
    throw std::invalid_argument("CalibrationModel: distance_scale must be > 0");
  }
  model.factor_.compute(model.covariance_);
  if (model.factor_.info() != Eigen::Success) {
    throw std::invalid_argument("CalibrationModel: covariance is not positive definite");
  }
  return model;
}

}  // namespace uwbtrust
