#include "uwbtrust/localization.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace uwbtrust {
namespace {

constexpr int kMaxIterations = 50;
constexpr double kStepTolerance = 1e-9;       // m
constexpr double kSingularRatio = 1e-13;      // det / trace^2 cutoff for 2x2 systems

struct Observation {
  Position2D anchor_pos;
  double range_m;
  std::string anchor_id;
};

std::vector<Observation> match_ranges(const std::vector<RangeEstimate>& ranges,
                                      const std::vector<Anchor>& anchors) {
  std::unordered_map<std::string, Position2D> by_id;
  for (const auto& a : anchors) by_id.emplace(a.id, a.position);

  std::vector<Observation> obs;
  obs.reserve(ranges.size());
  for (const auto& r : ranges) {
    auto it = by_id.find(r.anchor_id);
    if (it == by_id.end()) continue;
    if (!std::isfinite(r.range_m)) continue;
    obs.push_back({it->second, r.range_m, r.anchor_id});
  }
  return obs;
}

bool solvable(const Eigen::Matrix2d& normal) {
  const double tr = normal.trace();
  return normal.determinant() > kSingularRatio * tr * tr && tr > 0.0;
}

Position2D linear_solution(const std::vector<Observation>& obs) {
  // Subtracting the first anchor's sphere equation removes the quadratic
  // terms: 2 (x_i - x_0)^T x = r_0^2 - r_i^2 + ||x_i||^2 - ||x_0||^2.
  const auto& ref = obs.front();
  const double ref_norm2 = ref.anchor_pos.x * ref.anchor_pos.x + ref.anchor_pos.y * ref.anchor_pos.y;
  const double ref_r2 = ref.range_m * ref.range_m;

  Eigen::Matrix2d normal = Eigen::Matrix2d::Zero();
  Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
  for (std::size_t i = 1; i < obs.size(); ++i) {
    const auto& o = obs[i];
    const Eigen::Vector2d row(2.0 * (o.anchor_pos.x - ref.anchor_pos.x),
                              2.0 * (o.anchor_pos.y - ref.anchor_pos.y));
    const double norm2 = o.anchor_pos.x * o.anchor_pos.x + o.anchor_pos.y * o.anchor_pos.y;
    const double b = ref_r2 - o.range_m * o.range_m + norm2 - ref_norm2;
    normal += row * row.transpose();
    rhs += row * b;
  }
  if (!solvable(normal)) {
    throw DegenerateGeometry("locate: anchors are collinear or coincident");
  }
  const Eigen::Vector2d x = normal.ldlt().solve(rhs);
  return {x(0), x(1)};
}

}  // namespace

Position2D locate_linear(const std::vector<RangeEstimate>& ranges,
                         const std::vector<Anchor>& anchors) {
  const auto obs = match_ranges(ranges, anchors);
  if (obs.size() < 3) {
    throw InsufficientAnchors("locate: need >= 3 ranges to known anchors");
  }
  return linear_solution(obs);
}

PositionEstimate locate(const std::vector<RangeEstimate>& ranges,
                        const std::vector<Anchor>& anchors) {
  const auto obs = match_ranges(ranges, anchors);
  if (obs.size() < 3) {
    throw InsufficientAnchors("locate: need >= 3 ranges to known anchors");
  }

  Position2D x = linear_solution(obs);

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    Eigen::Matrix2d normal = Eigen::Matrix2d::Zero();
    Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
    for (const auto& o : obs) {
      const double dx = x.x - o.anchor_pos.x;
      const double dy = x.y - o.anchor_pos.y;
      const double dist = std::hypot(dx, dy);
      if (dist < 1e-12) continue;  // gradient undefined on top of an anchor
      const Eigen::Vector2d jac(dx / dist, dy / dist);
      const double residual = dist - o.range_m;
      normal += jac * jac.transpose();
      gradient += jac * residual;
    }
    if (!solvable(normal)) {
      throw DegenerateGeometry("locate: singular normal matrix");
    }
    const Eigen::Vector2d step = normal.ldlt().solve(-gradient);
    x.x += step(0);
    x.y += step(1);
    if (step.norm() < kStepTolerance) break;
  }

  PositionEstimate estimate;
  estimate.position = x;
  double sum_sq = 0.0;
  for (const auto& o : obs) {
    const double residual = distance(x, {o.anchor_pos.x, o.anchor_pos.y}) - o.range_m;
    sum_sq += residual * residual;
    estimate.anchors_used.push_back(o.anchor_id);
  }
  estimate.residual_norm_m = std::sqrt(sum_sq);
  return estimate;
}

double pdop(const Position2D& estimate, const std::vector<Anchor>& anchors) {
  if (anchors.size() < 2) {
    throw SingularGeometry("pdop: need >= 2 anchors");
  }
  Eigen::Matrix2d gram = Eigen::Matrix2d::Zero();
  for (const auto& a : anchors) {
    const double cx = a.position.x - estimate.x;
    const double cy = a.position.y - estimate.y;
    const double norm = std::hypot(cx, cy);
    if (norm < 1e-12) {
      throw AnchorAtEstimate("pdop: anchor coincides with the estimate");
    }
    const Eigen::Vector2d unit(cx / norm, cy / norm);
    gram += unit * unit.transpose();
  }
  if (!solvable(gram)) {
    throw SingularGeometry("pdop: anchors collinear with the estimate");
  }
  // trace of the 2x2 inverse = trace / det.
  return std::sqrt(gram.trace() / gram.determinant());
}

}  // namespace uwbtrust
