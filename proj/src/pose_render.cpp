#include "posegun/pose_render.hpp"

#include <algorithm>
#include <cmath>

namespace posegun {

void RenderParams::validate() const {
  if (!(px_per_unit > 0.0)) {
    throw DataError("px_per_unit must be positive");
  }
  if (limb_thickness < 0.0 || point_radius < 0.0) {
    throw DataError("stroke parameters must be nonnegative");
  }
}

NormalizedSkeleton normalize_skeleton(const Skeleton &s) {
  const Keypoint2D &neck = s.keypoints[body25::kNeck];
  const Keypoint2D &hip = s.keypoints[body25::kMidHip];
  if (!neck.defined() || !hip.defined()) {
    throw NormalizationError(
        "normalization impossible: Neck or MidHip undetected");
  }
  const double dx = hip.x - neck.x;
  const double dy = hip.y - neck.y;
  const double scale = std::sqrt(dx * dx + dy * dy);
  if (scale == 0.0) {
    throw DegenerateSkeletonError(
        "degenerate skeleton: Neck and MidHip coincide");
  }
  NormalizedSkeleton ns;
  ns.origin_x = neck.x;
  ns.origin_y = neck.y;
  ns.scale = scale;
  for (int i = 0; i < body25::kKeypointCount; ++i) {
    const Keypoint2D &kp = s.keypoints[i];
    if (!kp.defined()) {
      continue; // stays (0, 0, 0)
    }
    ns.keypoints[i].kx = (kp.x - neck.x) / scale;
    ns.keypoints[i].ky = (kp.y - neck.y) / scale;
    ns.keypoints[i].confidence = kp.confidence;
  }
  return ns;
}

namespace {

// Squared distance from pixel sample point p to segment [a, b].
double dist2_to_segment(double px, double py, double ax, double ay, double bx,
                        double by) {
  const double abx = bx - ax;
  const double aby = by - ay;
  const double len2 = abx * abx + aby * aby;
  double t = 0.0;
  if (len2 > 0.0) {
    t = ((px - ax) * abx + (py - ay) * aby) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  const double qx = ax + t * abx;
  const double qy = ay + t * aby;
  return (px - qx) * (px - qx) + (py - qy) * (py - qy);
}

// Scanline fill of the capsule of radius r around [a, b]: a pixel is set
// when its integer sample point lies within r of the segment.
void fill_capsule(PoseCanvas &canvas, double ax, double ay, double bx,
                  double by, double r) {
  const int y0 = std::max(0, static_cast<int>(
                                 std::floor(std::min(ay, by) - r)));
  const int y1 = std::min(PoseCanvas::kSize - 1,
                          static_cast<int>(std::ceil(std::max(ay, by) + r)));
  const int x0 = std::max(0, static_cast<int>(
                                 std::floor(std::min(ax, bx) - r)));
  const int x1 = std::min(PoseCanvas::kSize - 1,
                          static_cast<int>(std::ceil(std::max(ax, bx) + r)));
  const double r2 = r * r;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (dist2_to_segment(x, y, ax, ay, bx, by) <= r2) {
        canvas.at(x, y) = 1;
      }
    }
  }
}

} // namespace

PoseCanvas render_canvas(const NormalizedSkeleton &ns,
                         const RenderParams &params) {
  params.validate();
  const double half = PoseCanvas::kSize / 2.0;
  const auto px = [&](const NormalizedKeypoint &k) {
    return half + params.px_per_unit * k.kx;
  };
  const auto py = [&](const NormalizedKeypoint &k) {
    return half + params.px_per_unit * k.ky;
  };

  PoseCanvas canvas;
  for (const NormalizedKeypoint &k : ns.keypoints) {
    if (k.defined()) {
      fill_capsule(canvas, px(k), py(k), px(k), py(k), params.point_radius);
    }
  }
  for (const auto &[ia, ib] : body25::limb_pairs()) {
    const NormalizedKeypoint &a = ns.keypoints[ia];
    const NormalizedKeypoint &b = ns.keypoints[ib];
    if (a.defined() && b.defined()) {
      fill_capsule(canvas, px(a), py(a), px(b), py(b),
                   params.limb_thickness / 2.0);
    }
  }
  return canvas;
}

std::pair<PoseHalf, PoseHalf> split_canvas(const PoseCanvas &canvas) {
  PoseHalf left, right;
  left.side = HandSide::left;
  right.side = HandSide::right;
  for (int y = 0; y < PoseCanvas::kSize; ++y) {
    for (int x = 0; x < PoseHalf::kWidth; ++x) {
      left.at(x, y) = canvas.at(x, y);
      right.at(x, y) = canvas.at(x + PoseHalf::kWidth, y);
    }
  }
  return {std::move(left), std::move(right)};
}

double canvas_x_of(const NormalizedSkeleton &ns, double image_x,
                   double px_per_unit) {
  const double kx = (image_x - ns.origin_x) / ns.scale;
  return PoseCanvas::kSize / 2.0 + px_per_unit * kx;
}

PoseHalf select_half(const HandRegion &region, const NormalizedSkeleton &ns,
                     const PoseCanvas &canvas, double px_per_unit) {
  if (!region.anchor_wrist.defined()) {
    throw DataError("cannot select pose half: anchor wrist undetected");
  }
  const double cx = canvas_x_of(ns, region.anchor_wrist.x, px_per_unit);
  auto [left, right] = split_canvas(canvas);
  return cx < PoseHalf::kWidth ? std::move(left) : std::move(right);
}

ImageU8 to_image(const PoseCanvas &canvas) {
  ImageU8 img(PoseCanvas::kSize, PoseCanvas::kSize, 1);
  std::copy(canvas.pixels.begin(), canvas.pixels.end(), img.data.begin());
  return img;
}

ImageU8 to_image(const PoseHalf &half) {
  ImageU8 img(PoseHalf::kWidth, PoseHalf::kHeight, 1);
  std::copy(half.pixels.begin(), half.pixels.end(), img.data.begin());
  return img;
}

PoseHalf pose_half_from_image(const ImageU8 &img, HandSide side) {
  if (img.channels != 1 || img.width != PoseHalf::kWidth ||
      img.height != PoseHalf::kHeight) {
    throw DataError("pose half raster must be 256x512 single-channel");
  }
  PoseHalf half;
  half.side = side;
  for (std::size_t i = 0; i < half.pixels.size(); ++i) {
    half.pixels[i] = img.data[i] ? 1 : 0;
  }
  return half;
}

} // namespace posegun
