#include "posegun/transforms.hpp"

#include <algorithm>
#include <cmath>

namespace posegun {

TransformedEntry hflip(const ImageU8 &image, const std::vector<BBox> &boxes,
                       const std::vector<Skeleton> &skeletons) {
  TransformedEntry out;
  out.image = ImageU8(image.width, image.height, image.channels);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      for (int c = 0; c < image.channels; ++c) {
        out.image.at(x, y, c) = image.at(image.width - 1 - x, y, c);
      }
    }
  }
  const double w = image.width;
  for (const BBox &b : boxes) {
    out.boxes.emplace_back(w - b.x_max, b.y_min, w - b.x_min, b.y_max);
  }
  for (const Skeleton &s : skeletons) {
    Skeleton flipped;
    flipped.person_id = s.person_id;
    for (int i = 0; i < body25::kKeypointCount; ++i) {
      const Keypoint2D &kp = s.keypoints[i];
      Keypoint2D moved = kp;
      if (kp.defined()) {
        moved.x = w - kp.x;
      }
      flipped.keypoints[body25::mirrored_index(i)] = moved;
    }
    out.skeletons.push_back(flipped);
  }
  return out;
}

ImageU8 darken(const ImageU8 &image, double value_scale) {
  if (!(value_scale > 0.0 && value_scale <= 1.0)) {
    throw DataError("value_scale must be in (0,1]");
  }
  if (image.channels != 3) {
    throw DataError("darken expects an RGB image");
  }
  ImageU8 out(image.width, image.height, 3);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      double h, s, v;
      rgb_to_hsv(image.at(x, y, 0) / 255.0, image.at(x, y, 1) / 255.0,
                 image.at(x, y, 2) / 255.0, h, s, v);
      v *= value_scale;
      double r, g, b;
      hsv_to_rgb(h, s, v, r, g, b);
      const auto to_u8 = [](double c) {
        return static_cast<std::uint8_t>(
            std::clamp<long>(std::llround(c * 255.0), 0, 255));
      };
      out.at(x, y, 0) = to_u8(r);
      out.at(x, y, 1) = to_u8(g);
      out.at(x, y, 2) = to_u8(b);
    }
  }
  return out;
}

TransformedEntry far_transform(const ImageU8 &image,
                               const std::vector<BBox> &boxes,
                               const std::vector<Skeleton> &skeletons,
                               bool centered) {
  const ImageU8 content = downscale_half(image);
  const int ox = centered ? (image.width - content.width) / 2 : 0;
  const int oy = centered ? (image.height - content.height) / 2 : 0;

  TransformedEntry out;
  out.image = ImageU8(image.width, image.height, image.channels, 0);
  for (int y = 0; y < content.height; ++y) {
    for (int x = 0; x < content.width; ++x) {
      for (int c = 0; c < image.channels; ++c) {
        out.image.at(x + ox, y + oy, c) = content.at(x, y, c);
      }
    }
  }
  for (const BBox &b : boxes) {
    out.boxes.emplace_back(0.5 * b.x_min + ox, 0.5 * b.y_min + oy,
                           0.5 * b.x_max + ox, 0.5 * b.y_max + oy);
  }
  for (const Skeleton &s : skeletons) {
    Skeleton scaled;
    scaled.person_id = s.person_id;
    for (int i = 0; i < body25::kKeypointCount; ++i) {
      const Keypoint2D &kp = s.keypoints[i];
      if (kp.defined()) {
        scaled.keypoints[i] =
            Keypoint2D(0.5 * kp.x + ox, 0.5 * kp.y + oy, kp.confidence);
      }
    }
    out.skeletons.push_back(scaled);
  }
  return out;
}

} // namespace posegun
