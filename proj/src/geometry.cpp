#include "posegun/geometry.hpp"

#include <algorithm>

namespace posegun {

double area(const BBox &b) { return (b.x_max - b.x_min) * (b.y_max - b.y_min); }

std::optional<BBox> intersect(const BBox &a, const BBox &b) {
  const double x0 = std::max(a.x_min, b.x_min);
  const double y0 = std::max(a.y_min, b.y_min);
  const double x1 = std::min(a.x_max, b.x_max);
  const double y1 = std::min(a.y_max, b.y_max);
  if (!(x0 < x1) || !(y0 < y1)) {
    return std::nullopt;
  }
  return BBox(x0, y0, x1, y1);
}

double iou(const BBox &a, const BBox &b) {
  const auto inter = intersect(a, b);
  if (!inter) {
    return 0.0;
  }
  const double ai = area(*inter);
  return ai / (area(a) + area(b) - ai);
}

double iomin(const BBox &a, const BBox &b) {
  const auto inter = intersect(a, b);
  if (!inter) {
    return 0.0;
  }
  return area(*inter) / std::min(area(a), area(b));
}

BBox union_box(const BBox &a, const BBox &b) {
  return BBox(std::min(a.x_min, b.x_min), std::min(a.y_min, b.y_min),
              std::max(a.x_max, b.x_max), std::max(a.y_max, b.y_max));
}

} // namespace posegun
