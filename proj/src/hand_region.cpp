#include "posegun/hand_region.hpp"

#include <cmath>

namespace posegun {

std::string to_string(HandSide side) {
  switch (side) {
  case HandSide::left:
    return "left";
  case HandSide::right:
    return "right";
  case HandSide::merged:
    return "merged";
  }
  return "right";
}

HandSide hand_side_from_string(const std::string &s) {
  if (s == "left") {
    return HandSide::left;
  }
  if (s == "right") {
    return HandSide::right;
  }
  if (s == "merged") {
    return HandSide::merged;
  }
  throw DataError("unknown hand side: " + s);
}

void RegionParams::validate() const {
  if (!(conf_threshold >= 0.0 && conf_threshold <= 1.0)) {
    throw DataError("conf_threshold must be in [0,1]");
  }
  if (!(scale_s > 0.0)) {
    throw DataError("scale_s must be positive");
  }
  if (!(merge_iou > 0.0 && merge_iou <= 1.0)) {
    throw DataError("merge_iou must be in (0,1]");
  }
}

std::optional<HandRegion> hand_box_from_forearm(const Keypoint2D &elbow,
                                                const Keypoint2D &wrist,
                                                const RegionParams &params,
                                                HandSide side, int person_id) {
  if (elbow.confidence < params.conf_threshold ||
      wrist.confidence < params.conf_threshold) {
    return std::nullopt;
  }
  const double dx = wrist.x - elbow.x;
  const double dy = wrist.y - elbow.y;
  const double forearm = std::sqrt(dx * dx + dy * dy);
  if (forearm == 0.0) {
    return std::nullopt; // direction undefined
  }
  const double cx = wrist.x + params.extension_k * dx;
  const double cy = wrist.y + params.extension_k * dy;
  const double half = params.scale_s * forearm / 2.0;
  HandRegion region;
  region.box = BBox(cx - half, cy - half, cx + half, cy + half);
  region.person_id = person_id;
  region.side = side;
  region.anchor_wrist = wrist;
  return region;
}

std::vector<HandRegion> extract_hand_regions(const Skeleton &skeleton,
                                             const RegionParams &params) {
  const auto right = hand_box_from_forearm(
      skeleton.keypoints[body25::kRElbow], skeleton.keypoints[body25::kRWrist],
      params, HandSide::right, skeleton.person_id);
  const auto left = hand_box_from_forearm(
      skeleton.keypoints[body25::kLElbow], skeleton.keypoints[body25::kLWrist],
      params, HandSide::left, skeleton.person_id);

  std::vector<HandRegion> regions;
  if (right && left && iou(right->box, left->box) >= params.merge_iou) {
    HandRegion merged;
    merged.box = union_box(right->box, left->box);
    merged.person_id = skeleton.person_id;
    merged.side = HandSide::merged;
    // Anchor on the higher-confidence wrist; ties go right.
    merged.anchor_wrist =
        left->anchor_wrist.confidence > right->anchor_wrist.confidence
            ? left->anchor_wrist
            : right->anchor_wrist;
    regions.push_back(merged);
    return regions;
  }
  if (right) {
    regions.push_back(*right);
  }
  if (left) {
    regions.push_back(*left);
  }
  return regions;
}

std::optional<HandRegion> clip_to_image(const HandRegion &region, double width,
                                        double height) {
  if (!(width > 0.0 && height > 0.0)) {
    throw DataError("image dimensions must be positive");
  }
  const auto clipped = intersect(region.box, BBox(0.0, 0.0, width, height));
  if (!clipped) {
    return std::nullopt;
  }
  HandRegion out = region;
  out.box = *clipped;
  return out;
}

} // namespace posegun
