#pragma once

#include <array>
#include <cstddef>
#include <utility>

namespace posegun {

/// One estimated body keypoint in image coordinates. An undetected keypoint
/// is encoded exactly as (0, 0, 0); confidence is clamped to [0,1].
struct Keypoint2D {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;

  Keypoint2D() = default;

  Keypoint2D(double px, double py, double conf) : x(px), y(py) {
    confidence = conf < 0.0 ? 0.0 : (conf > 1.0 ? 1.0 : conf);
  }

  bool defined() const { return confidence > 0.0; }
};

// BODY_25 keypoint layout (pose estimator convention).
namespace body25 {

inline constexpr int kKeypointCount = 25;

enum Index : int {
  kNose = 0,
  kNeck = 1,
  kRShoulder = 2,
  kRElbow = 3,
  kRWrist = 4,
  kLShoulder = 5,
  kLElbow = 6,
  kLWrist = 7,
  kMidHip = 8,
  kRHip = 9,
  kRKnee = 10,
  kRAnkle = 11,
  kLHip = 12,
  kLKnee = 13,
  kLAnkle = 14,
  kREye = 15,
  kLEye = 16,
  kREar = 17,
  kLEar = 18,
  kLBigToe = 19,
  kLSmallToe = 20,
  kLHeel = 21,
  kRBigToe = 22,
  kRSmallToe = 23,
  kRHeel = 24,
};

/// The 24 drawn limb connections (standard BODY_25 adjacency).
const std::array<std::pair<int, int>, 24> &limb_pairs();

/// Left/right counterpart indices; symmetric, identity on midline points.
/// Used to keep keypoint semantics correct under horizontal flips.
int mirrored_index(int index);

} // namespace body25

/// All 25 keypoints of one detected person.
struct Skeleton {
  std::array<Keypoint2D, body25::kKeypointCount> keypoints{};
  int person_id = 0;
};

} // namespace posegun
