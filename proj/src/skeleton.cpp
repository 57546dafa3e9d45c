#include "posegun/skeleton.hpp"

namespace posegun::body25 {

const std::array<std::pair<int, int>, 24> &limb_pairs() {
  static const std::array<std::pair<int, int>, 24> pairs = {{
      {kNeck, kMidHip},      {kNeck, kRShoulder},   {kNeck, kLShoulder},
      {kRShoulder, kRElbow}, {kRElbow, kRWrist},    {kLShoulder, kLElbow},
      {kLElbow, kLWrist},    {kMidHip, kRHip},      {kRHip, kRKnee},
      {kRKnee, kRAnkle},     {kMidHip, kLHip},      {kLHip, kLKnee},
      {kLKnee, kLAnkle},     {kNeck, kNose},        {kNose, kREye},
      {kREye, kREar},        {kNose, kLEye},        {kLEye, kLEar},
      {kLAnkle, kLBigToe},   {kLBigToe, kLSmallToe}, {kLAnkle, kLHeel},
      {kRAnkle, kRBigToe},   {kRBigToe, kRSmallToe}, {kRAnkle, kRHeel},
  }};
  return pairs;
}

int mirrored_index(int index) {
  switch (index) {
  case kRShoulder: return kLShoulder;
  case kLShoulder: return kRShoulder;
  case kRElbow:    return kLElbow;
  case kLElbow:    return kRElbow;
  case kRWrist:    return kLWrist;
  case kLWrist:    return kRWrist;
  case kRHip:      return kLHip;
  case kLHip:      return kRHip;
  case kRKnee:     return kLKnee;
  case kLKnee:     return kRKnee;
  case kRAnkle:    return kLAnkle;
  case kLAnkle:    return kRAnkle;
  case kREye:      return kLEye;
  case kLEye:      return kREye;
  case kREar:      return kLEar;
  case kLEar:      return kREar;
  case kRBigToe:   return kLBigToe;
  case kLBigToe:   return kRBigToe;
  case kRSmallToe: return kLSmallToe;
  case kLSmallToe: return kRSmallToe;
  case kRHeel:     return kLHeel;
  case kLHeel:     return kRHeel;
  default:         return index; // nose, neck, mid-hip stay in place
  }
}

} // namespace posegun::body25
