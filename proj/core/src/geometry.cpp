#include "uwbtrust/geometry.hpp"

namespace uwbtrust {

double distance(const Position2D& a, const Position2D& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace uwbtrust
