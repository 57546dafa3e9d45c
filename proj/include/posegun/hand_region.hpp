#pragma once

#include <optional>
#include <string>
#include <vector>

#include "posegun/geometry.hpp"
#include "posegun/skeleton.hpp"

namespace posegun {

enum class HandSide { left, right, merged };

std::string to_string(HandSide side);
HandSide hand_side_from_string(const std::string &s);

/// Square candidate box around one hand, extrapolated from the forearm.
struct HandRegion {
  BBox box;
  int person_id = 0;
  HandSide side = HandSide::right;
  Keypoint2D anchor_wrist;
};

/// Free parameters of the region-proposal geometry. The hand box is the
/// square of side scale_s * |wrist - elbow| centered at
/// wrist + extension_k * (wrist - elbow).
struct RegionParams {
  double conf_threshold = 0.3; // keypoint confidence gate
  double extension_k = 0.5;    // extrapolation past the wrist
  double scale_s = 1.5;        // box side per forearm length
  double merge_iou = 0.4;      // two-hand merge threshold

  void validate() const;
};

/// Square hand box from one elbow/wrist pair, or empty when either
/// confidence is below the gate or the forearm has zero length.
std::optional<HandRegion> hand_box_from_forearm(const Keypoint2D &elbow,
                                                const Keypoint2D &wrist,
                                                const RegionParams &params,
                                                HandSide side,
                                                int person_id = 0);

/// Per-person candidate regions: at most one per hand; when the two hand
/// boxes overlap at iou >= merge_iou they collapse into a single merged
/// region (a handgun held with both hands counts once).
std::vector<HandRegion> extract_hand_regions(const Skeleton &skeleton,
                                             const RegionParams &params);

/// Intersects the region with [0,width] x [0,height]; empty when nothing
/// of it lies inside the image.
std::optional<HandRegion> clip_to_image(const HandRegion &region, double width,
                                        double height);

} // namespace posegun
