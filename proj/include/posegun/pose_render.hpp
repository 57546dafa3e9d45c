#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "posegun/hand_region.hpp"
#include "posegun/image.hpp"
#include "posegun/skeleton.hpp"

namespace posegun {

/// A keypoint in body-local coordinates: translated so the neck sits at the
/// origin and scaled by the neck-to-mid-hip distance.
struct NormalizedKeypoint {
  double kx = 0.0;
  double ky = 0.0;
  double confidence = 0.0;

  bool defined() const { return confidence > 0.0; }
};

struct NormalizedSkeleton {
  std::array<NormalizedKeypoint, body25::kKeypointCount> keypoints{};
  // Normalization parameters, kept so arbitrary image points (e.g. a region
  // anchor wrist) can be mapped into the same frame.
  double origin_x = 0.0;
  double origin_y = 0.0;
  double scale = 1.0; // |neck - mid_hip|, strictly positive
};

/// 512x512 binary raster of the normalized skeleton, neck anchored at the
/// canvas center.
struct PoseCanvas {
  static constexpr int kSize = 512;
  std::vector<std::uint8_t> pixels; // kSize * kSize, values 0/1

  PoseCanvas() : pixels(kSize * kSize, 0) {}

  std::uint8_t &at(int x, int y) { return pixels[y * kSize + x]; }
  std::uint8_t at(int x, int y) const { return pixels[y * kSize + x]; }
};

/// One 256-wide x 512-tall half of a pose canvas.
struct PoseHalf {
  static constexpr int kWidth = 256;
  static constexpr int kHeight = 512;

  HandSide side = HandSide::left; // left or right half of the canvas
  std::vector<std::uint8_t> pixels; // kWidth * kHeight, values 0/1

  PoseHalf() : pixels(kWidth * kHeight, 0) {}

  std::uint8_t &at(int x, int y) { return pixels[y * kWidth + x]; }
  std::uint8_t at(int x, int y) const { return pixels[y * kWidth + x]; }
};

struct RenderParams {
  double px_per_unit = 80.0;  // canvas pixels per normalized unit
  double limb_thickness = 4.0;
  double point_radius = 4.0;

  void validate() const;
};

/// Maps every defined keypoint to (j_n - j_neck) / |j_neck - j_mid_hip|.
/// Throws NormalizationError when Neck or MidHip is undetected and
/// DegenerateSkeletonError when they coincide.
NormalizedSkeleton normalize_skeleton(const Skeleton &s);

/// Rasterizes the normalized skeleton: a filled disc per defined keypoint
/// and a filled capsule per limb whose endpoints are both defined. Keypoint
/// k maps to canvas position (256, 256) + px_per_unit * (kx, ky). Output is
/// strictly binary; geometry outside the canvas is clipped.
PoseCanvas render_canvas(const NormalizedSkeleton &ns,
                         const RenderParams &params);

/// Left half = columns [0, 256), right half = columns [256, 512).
std::pair<PoseHalf, PoseHalf> split_canvas(const PoseCanvas &canvas);

/// Canvas x-coordinate of an image point mapped through the normalization
/// frame of `ns`.
double canvas_x_of(const NormalizedSkeleton &ns, double image_x,
                   double px_per_unit);

/// Returns the half containing the region's anchor wrist; the tie at
/// canvas x = 256 goes right. Throws DataError when the anchor wrist is
/// undefined.
PoseHalf select_half(const HandRegion &region, const NormalizedSkeleton &ns,
                     const PoseCanvas &canvas, double px_per_unit);

/// 1-channel 0/1 rasters for lossless 1-bit export.
ImageU8 to_image(const PoseCanvas &canvas);
ImageU8 to_image(const PoseHalf &half);
PoseHalf pose_half_from_image(const ImageU8 &img, HandSide side);

} // namespace posegun
