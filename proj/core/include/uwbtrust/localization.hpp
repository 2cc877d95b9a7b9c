#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "uwbtrust/geometry.hpp"
#include "uwbtrust/ranging.hpp"

namespace uwbtrust {

struct InsufficientAnchors : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateGeometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularGeometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AnchorAtEstimate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PositionEstimate {
  Position2D position;
  double residual_norm_m = 0.0;
  std::vector<std::string> anchors_used;  // >= 3 entries
};

// Linearized closed-form solution by reference-anchor subtraction.
// Used to seed the nonlinear refinement; exposed for testing.
Position2D locate_linear(const std::vector<RangeEstimate>& ranges,
                         const std::vector<Anchor>& anchors);

// Least-squares multilateration: Gauss-Newton on
// sum_A (||x - x_A|| - r_A)^2, seeded by locate_linear. Ranges are taken
// as-is; rejecting implausible ones is the trust layer's job, so this
// stays total over finite inputs.
// Throws InsufficientAnchors (< 3 usable ranges) or DegenerateGeometry.
PositionEstimate locate(const std::vector<RangeEstimate>& ranges,
                        const std::vector<Anchor>& anchors);

// Position dilution of precision at the estimate: sqrt(trace((D^T D)^-1))
// with rows of D the unit vectors from the estimate to each anchor.
// Throws SingularGeometry or AnchorAtEstimate.
double pdop(const Position2D& estimate, const std::vector<Anchor>& anchors);

}  // namespace uwbtrust
