#pragma once

#include <vector>

#include "posegun/geometry.hpp"
#include "posegun/image.hpp"
#include "posegun/skeleton.hpp"

namespace posegun {

inline constexpr double kDefaultDarkScale = 0.3;

/// One image with its annotations, transformed together so downstream
/// stages run unchanged.
struct TransformedEntry {
  ImageU8 image;
  std::vector<BBox> boxes;
  std::vector<Skeleton> skeletons;
};

/// Horizontal mirror. Boxes map to (W - x_max, y, W - x_min, y); defined
/// keypoints map x -> W - x and swap left/right identities so BODY_25
/// semantics stay correct. Exact involution.
TransformedEntry hflip(const ImageU8 &image, const std::vector<BBox> &boxes,
                       const std::vector<Skeleton> &skeletons);

/// Scales the HSV value channel by value_scale in (0,1]; hue and saturation
/// are preserved up to 8-bit rounding.
ImageU8 darken(const ImageU8 &image, double value_scale);

/// Camera-distance simulation: content block-average-downscaled by exactly
/// one half onto a black canvas of the original size. Boxes and defined
/// keypoints scale by 0.5; confidences are untouched. Placement is the
/// top-left corner unless `centered`.
TransformedEntry far_transform(const ImageU8 &image,
                               const std::vector<BBox> &boxes,
                               const std::vector<Skeleton> &skeletons,
                               bool centered = false);

} // namespace posegun
