#pragma once

// Shared fixtures and generators for the test suites.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "posegun/geometry.hpp"
#include "posegun/image.hpp"
#include "posegun/skeleton.hpp"

namespace testutil {

/// Unique scratch directory removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string &tag) {
    static std::atomic<int> counter{0};
    dir_ = std::filesystem::temp_directory_path() /
           ("posegun_" + tag + "_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  const std::filesystem::path &path() const { return dir_; }
  std::filesystem::path operator/(const std::string &name) const {
    return dir_ / name;
  }

private:
  std::filesystem::path dir_;
};

inline std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

inline void write_file(const std::filesystem::path &path,
                       const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

/// Random box with integer-valued corners inside [0, extent]^2.
inline posegun::BBox random_int_box(std::mt19937_64 &rng, int extent = 100) {
  std::uniform_int_distribution<int> coord(0, extent - 1);
  std::uniform_int_distribution<int> side(1, extent / 2);
  const int x0 = coord(rng);
  const int y0 = coord(rng);
  return posegun::BBox(x0, y0, x0 + side(rng), y0 + side(rng));
}

/// Random box with continuous corners.
inline posegun::BBox random_box(std::mt19937_64 &rng, double extent = 100.0) {
  std::uniform_real_distribution<double> coord(0.0, extent);
  std::uniform_real_distribution<double> side(0.5, extent / 2);
  const double x0 = coord(rng);
  const double y0 = coord(rng);
  return posegun::BBox(x0, y0, x0 + side(rng), y0 + side(rng));
}

/// Skeleton with all 25 keypoints defined, laid out like a standing person
/// around (cx, cy); `unit` is the neck-to-hip distance.
inline posegun::Skeleton standing_skeleton(double cx, double cy,
                                           double unit = 80.0,
                                           int person_id = 0) {
  using posegun::Keypoint2D;
  namespace b = posegun::body25;
  posegun::Skeleton s;
  s.person_id = person_id;
  const auto put = [&](int idx, double dx, double dy) {
    s.keypoints[idx] = Keypoint2D(cx + dx * unit, cy + dy * unit, 0.9);
  };
  put(b::kNose, 0.0, -0.35);
  put(b::kNeck, 0.0, 0.0);
  put(b::kRShoulder, -0.35, 0.05);
  put(b::kRElbow, -0.55, 0.55);
  put(b::kRWrist, -0.65, 1.0);
  put(b::kLShoulder, 0.35, 0.05);
  put(b::kLElbow, 0.55, 0.55);
  put(b::kLWrist, 0.65, 1.0);
  put(b::kMidHip, 0.0, 1.0);
  put(b::kRHip, -0.2, 1.0);
  put(b::kRKnee, -0.22, 1.7);
  put(b::kRAnkle, -0.24, 2.4);
  put(b::kLHip, 0.2, 1.0);
  put(b::kLKnee, 0.22, 1.7);
  put(b::kLAnkle, 0.24, 2.4);
  put(b::kREye, -0.08, -0.42);
  put(b::kLEye, 0.08, -0.42);
  put(b::kREar, -0.16, -0.38);
  put(b::kLEar, 0.16, -0.38);
  put(b::kLBigToe, 0.3, 2.55);
  put(b::kLSmallToe, 0.36, 2.53);
  put(b::kLHeel, 0.2, 2.45);
  put(b::kRBigToe, -0.3, 2.55);
  put(b::kRSmallToe, -0.36, 2.53);
  put(b::kRHeel, -0.2, 2.45);
  return s;
}

/// Flat 75-number keypoint list for one skeleton (JSON fragment).
inline std::string keypoints_json(const posegun::Skeleton &s) {
  std::string flat;
  for (const auto &kp : s.keypoints) {
    if (!flat.empty()) {
      flat += ',';
    }
    flat += std::to_string(kp.x) + ',' + std::to_string(kp.y) + ',' +
            std::to_string(kp.confidence);
  }
  return "{\"pose_keypoints_2d\":[" + flat + "]}";
}

inline std::string keypoint_file_json(const std::vector<posegun::Skeleton> &v) {
  std::string people;
  for (const auto &s : v) {
    if (!people.empty()) {
      people += ',';
    }
    people += keypoints_json(s);
  }
  return "{\"people\":[" + people + "]}";
}

/// Uniform RGB test image.
inline posegun::ImageU8 flat_image(int w, int h, std::uint8_t r,
                                   std::uint8_t g, std::uint8_t b) {
  posegun::ImageU8 img(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.at(x, y, 0) = r;
      img.at(x, y, 1) = g;
      img.at(x, y, 2) = b;
    }
  }
  return img;
}

} // namespace testutil
