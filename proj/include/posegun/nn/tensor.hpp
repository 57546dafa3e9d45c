#pragma once

#include <cstddef>
#include <vector>

namespace posegun::nn {

/// Dense feature map, channel-major: data[(c * h + y) * w + x].
struct Tensor {
  int c = 0;
  int h = 0;
  int w = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(int channels, int height, int width)
      : c(channels), h(height), w(width),
        data(static_cast<std::size_t>(channels) * height * width, 0.0) {}

  std::size_t size() const { return data.size(); }

  double &at(int ci, int y, int x) {
    return data[(static_cast<std::size_t>(ci) * h + y) * w + x];
  }
  double at(int ci, int y, int x) const {
    return data[(static_cast<std::size_t>(ci) * h + y) * w + x];
  }

  bool same_shape(int oc, int oh, int ow) const {
    return c == oc && h == oh && w == ow;
  }
};

} // namespace posegun::nn
