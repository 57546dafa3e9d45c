#pragma once

#include <optional>
#include <string>

#include "posegun/errors.hpp"

namespace posegun {

/// Axis-aligned box with continuous corner coordinates. Strictly positive
/// area is enforced at construction so overlap ratios never divide by zero.
struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  BBox() = default;

  BBox(double x0, double y0, double x1, double y1)
      : x_min(x0), y_min(y0), x_max(x1), y_max(y1) {
    if (!(x_min < x_max) || !(y_min < y_max)) {
      throw GeometryError("invalid box: extents must be strictly positive");
    }
  }

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }

  bool operator==(const BBox &other) const = default;
};

/// Box area in pixels^2; strictly positive for any constructed box.
double area(const BBox &b);

/// Overlap rectangle of two boxes, or empty when their interiors are
/// disjoint (touching edges count as disjoint: zero-area overlap).
std::optional<BBox> intersect(const BBox &a, const BBox &b);

/// Intersection over union; 0 when disjoint.
double iou(const BBox &a, const BBox &b);

/// Intersection over minimum area; 0 when disjoint, 1 when nested.
double iomin(const BBox &a, const BBox &b);

/// Bounding box of the union of two boxes.
BBox union_box(const BBox &a, const BBox &b);

/// One detector output: candidate box plus handgun probability.
struct Detection {
  BBox box;
  double score = 0.0; // in [0,1]

  Detection() = default;

  Detection(const BBox &b, double s) : box(b), score(s) {
    if (!(score >= 0.0 && score <= 1.0)) {
      throw GeometryError("detection score must be in [0,1]");
    }
  }
};

/// Annotated handgun location for one image.
struct GroundTruthBox {
  BBox box;
  std::string image_id;
};

} // namespace posegun
