#include <doctest.h>

#include <cmath>
#include <random>

#include "posegun/pose_render.hpp"
#include "testutil.hpp"

using namespace posegun;

namespace {

// Independent raster oracle: evaluates the capsule/disc membership predicate
// at every canvas pixel instead of scanning expanded bounding boxes.
PoseCanvas oracle_render(const NormalizedSkeleton &ns,
                         const RenderParams &params) {
  PoseCanvas canvas;
  const double half = PoseCanvas::kSize / 2.0;
  const auto pos = [&](const NormalizedKeypoint &k) {
    return std::pair<double, double>(half + params.px_per_unit * k.kx,
                                     half + params.px_per_unit * k.ky);
  };
  const auto seg_dist2 = [](double px, double py, double ax, double ay,
                            double bx, double by) {
    const double abx = bx - ax, aby = by - ay;
    const double len2 = abx * abx + aby * aby;
    double t = len2 > 0.0 ? ((px - ax) * abx + (py - ay) * aby) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double qx = ax + t * abx, qy = ay + t * aby;
    return (px - qx) * (px - qx) + (py - qy) * (py - qy);
  };
  for (int y = 0; y < PoseCanvas::kSize; ++y) {
    for (int x = 0; x < PoseCanvas::kSize; ++x) {
      bool set = false;
      for (const auto &k : ns.keypoints) {
        if (!k.defined()) {
          continue;
        }
        const auto [cx, cy] = pos(k);
        if (seg_dist2(x, y, cx, cy, cx, cy) <=
            params.point_radius * params.point_radius) {
          set = true;
          break;
        }
      }
      if (!set) {
        for (const auto &[ia, ib] : body25::limb_pairs()) {
          const auto &a = ns.keypoints[ia];
          const auto &b = ns.keypoints[ib];
          if (!a.defined() || !b.defined()) {
            continue;
          }
          const auto [ax, ay] = pos(a);
          const auto [bx, by] = pos(b);
          const double r = params.limb_thickness / 2.0;
          if (seg_dist2(x, y, ax, ay, bx, by) <= r * r) {
            set = true;
            break;
          }
        }
      }
      canvas.at(x, y) = set ? 1 : 0;
    }
  }
  return canvas;
}

int popcount(const PoseCanvas &c) {
  int n = 0;
  for (const auto v : c.pixels) {
    n += v;
  }
  return n;
}

} // namespace

TEST_CASE("normalization maps the neck to the origin") {
  const Skeleton s = testutil::standing_skeleton(100, 100, 80.0);
  const NormalizedSkeleton ns = normalize_skeleton(s);
  CHECK(ns.keypoints[body25::kNeck].kx == 0.0);
  CHECK(ns.keypoints[body25::kNeck].ky == 0.0);
}

TEST_CASE("normalization divides by the neck-hip distance") {
  Skeleton s;
  s.keypoints[body25::kNeck] = Keypoint2D(100, 100, 1.0);
  s.keypoints[body25::kMidHip] = Keypoint2D(100, 180, 1.0); // scale 80
  s.keypoints[body25::kNose] = Keypoint2D(140, 100, 0.8);
  const NormalizedSkeleton ns = normalize_skeleton(s);
  CHECK(ns.keypoints[body25::kNose].kx == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ns.keypoints[body25::kNose].ky == doctest::Approx(0.0));
  CHECK(ns.keypoints[body25::kNose].confidence == 0.8);
  CHECK(ns.scale == 80.0);
}

TEST_CASE("undetected keypoints stay undetected") {
  Skeleton s;
  s.keypoints[body25::kNeck] = Keypoint2D(10, 10, 1.0);
  s.keypoints[body25::kMidHip] = Keypoint2D(10, 90, 1.0);
  const NormalizedSkeleton ns = normalize_skeleton(s);
  CHECK(!ns.keypoints[body25::kRWrist].defined());
  CHECK(ns.keypoints[body25::kRWrist].kx == 0.0);
}

TEST_CASE("normalization error cases") {
  Skeleton no_neck;
  no_neck.keypoints[body25::kMidHip] = Keypoint2D(0, 50, 1.0);
  CHECK_THROWS_AS(normalize_skeleton(no_neck), NormalizationError);

  Skeleton degenerate;
  degenerate.keypoints[body25::kNeck] = Keypoint2D(5, 5, 1.0);
  degenerate.keypoints[body25::kMidHip] = Keypoint2D(5, 5, 1.0);
  CHECK_THROWS_AS(normalize_skeleton(degenerate), DegenerateSkeletonError);
}

TEST_CASE("translation and scale invariance; mid-hip unit norm") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> coord(0.0, 1000.0);
  std::uniform_real_distribution<double> shift(-300.0, 300.0);
  std::uniform_real_distribution<double> factor(0.25, 4.0);
  for (int i = 0; i < 500; ++i) {
    const Skeleton s =
        testutil::standing_skeleton(coord(rng), coord(rng), 40 + coord(rng) / 10);
    const NormalizedSkeleton base = normalize_skeleton(s);

    const auto &hip = base.keypoints[body25::kMidHip];
    CHECK(std::abs(std::hypot(hip.kx, hip.ky) - 1.0) < 1e-9);

    const double dx = shift(rng), dy = shift(rng), t = factor(rng);
    Skeleton moved = s, scaled = s;
    for (int k = 0; k < body25::kKeypointCount; ++k) {
      if (!s.keypoints[k].defined()) {
        continue;
      }
      moved.keypoints[k].x += dx;
      moved.keypoints[k].y += dy;
      scaled.keypoints[k].x *= t;
      scaled.keypoints[k].y *= t;
    }
    const NormalizedSkeleton m = normalize_skeleton(moved);
    const NormalizedSkeleton sc = normalize_skeleton(scaled);
    for (int k = 0; k < body25::kKeypointCount; ++k) {
      REQUIRE(std::abs(m.keypoints[k].kx - base.keypoints[k].kx) < 1e-9);
      REQUIRE(std::abs(m.keypoints[k].ky - base.keypoints[k].ky) < 1e-9);
      REQUIRE(std::abs(sc.keypoints[k].kx - base.keypoints[k].kx) < 1e-9);
      REQUIRE(std::abs(sc.keypoints[k].ky - base.keypoints[k].ky) < 1e-9);
    }
  }
}

TEST_CASE("render: neck-only skeleton draws one disc at the center") {
  Skeleton s;
  s.keypoints[body25::kNeck] = Keypoint2D(50, 50, 1.0);
  s.keypoints[body25::kMidHip] = Keypoint2D(50, 130, 1.0);
  NormalizedSkeleton ns = normalize_skeleton(s);
  // keep only the neck for the draw
  ns.keypoints[body25::kMidHip] = NormalizedKeypoint{};
  const RenderParams params;
  const PoseCanvas canvas = render_canvas(ns, params);
  CHECK(canvas.at(256, 256) == 1);
  // disc of radius 4 sampled on the integer grid: 49 pixels
  CHECK(popcount(canvas) == 49);
  for (int y = 0; y < PoseCanvas::kSize; ++y) {
    for (int x = 0; x < PoseCanvas::kSize; ++x) {
      if (canvas.at(x, y)) {
        const double d2 = (x - 256.0) * (x - 256.0) + (y - 256.0) * (y - 256.0);
        REQUIRE(d2 <= params.point_radius * params.point_radius);
      }
    }
  }
}

TEST_CASE("render: no defined keypoints gives an all-zero canvas") {
  const NormalizedSkeleton ns;
  CHECK(popcount(render_canvas(ns, RenderParams{})) == 0);
}

TEST_CASE("render matches the whole-canvas oracle and is deterministic") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> coord(0.0, 600.0);
  for (int i = 0; i < 5; ++i) {
    const Skeleton s = testutil::standing_skeleton(coord(rng), coord(rng),
                                                   60.0 + 20.0 * i);
    const NormalizedSkeleton ns = normalize_skeleton(s);
    const RenderParams params;
    const PoseCanvas a = render_canvas(ns, params);
    const PoseCanvas b = render_canvas(ns, params);
    CHECK(a.pixels == b.pixels); // bit-identical rerun
    const PoseCanvas oracle = oracle_render(ns, params);
    REQUIRE(a.pixels == oracle.pixels);
    for (const auto v : a.pixels) {
      REQUIRE((v == 0 || v == 1));
    }
  }
}

TEST_CASE("render: neck and hip make two discs and a limb") {
  Skeleton s;
  s.keypoints[body25::kNeck] = Keypoint2D(100, 100, 1.0);
  s.keypoints[body25::kMidHip] = Keypoint2D(100, 180, 1.0);
  const NormalizedSkeleton ns = normalize_skeleton(s);
  const RenderParams params; // px_per_unit 80: hip lands at (256, 336)
  const PoseCanvas canvas = render_canvas(ns, params);
  CHECK(canvas.at(256, 256) == 1);
  CHECK(canvas.at(256, 336) == 1);
  CHECK(canvas.at(256, 296) == 1); // on the connecting limb
  // more than two bare discs' worth of pixels
  CHECK(popcount(canvas) > 2 * 49);
  CHECK(canvas.pixels == oracle_render(ns, params).pixels);
}

TEST_CASE("split halves partition the canvas") {
  PoseCanvas canvas;
  std::mt19937_64 rng(33);
  for (auto &v : canvas.pixels) {
    v = rng() % 2;
  }
  const auto [left, right] = split_canvas(canvas);
  CHECK(left.side == HandSide::left);
  CHECK(right.side == HandSide::right);
  for (int y = 0; y < PoseCanvas::kSize; ++y) {
    for (int x = 0; x < PoseCanvas::kSize; ++x) {
      const auto expected = canvas.at(x, y);
      if (x < PoseHalf::kWidth) {
        REQUIRE(left.at(x, y) == expected);
      } else {
        REQUIRE(right.at(x - PoseHalf::kWidth, y) == expected);
      }
    }
  }
}

TEST_CASE("split boundary columns") {
  PoseCanvas canvas;
  canvas.at(255, 17) = 1;
  auto [left, right] = split_canvas(canvas);
  CHECK(left.at(255, 17) == 1);
  int right_count = 0;
  for (const auto v : right.pixels) {
    right_count += v;
  }
  CHECK(right_count == 0);

  PoseCanvas canvas2;
  canvas2.at(256, 17) = 1;
  auto [left2, right2] = split_canvas(canvas2);
  CHECK(right2.at(0, 17) == 1);
  int left_count = 0;
  for (const auto v : left2.pixels) {
    left_count += v;
  }
  CHECK(left_count == 0);
}

TEST_CASE("half selection follows the anchor wrist") {
  Skeleton s;
  s.keypoints[body25::kNeck] = Keypoint2D(0, 0, 1.0);
  s.keypoints[body25::kMidHip] = Keypoint2D(0, 100, 1.0); // scale 100
  const NormalizedSkeleton ns = normalize_skeleton(s);
  const PoseCanvas canvas = render_canvas(ns, RenderParams{});

  HandRegion region;
  region.box = BBox(0, 0, 1, 1);

  // kx = -1 -> canvas x = 176 -> left half
  region.anchor_wrist = Keypoint2D(-100, 0, 1.0);
  CHECK(canvas_x_of(ns, -100.0, 80.0) == 176.0);
  CHECK(select_half(region, ns, canvas, 80.0).side == HandSide::left);

  // kx = +1 -> canvas x = 336 -> right half
  region.anchor_wrist = Keypoint2D(100, 0, 1.0);
  CHECK(select_half(region, ns, canvas, 80.0).side == HandSide::right);

  // tie at canvas x = 256 goes right
  region.anchor_wrist = Keypoint2D(0, 0, 1.0);
  CHECK(canvas_x_of(ns, 0.0, 80.0) == 256.0);
  CHECK(select_half(region, ns, canvas, 80.0).side == HandSide::right);

  // undefined wrist cannot select
  region.anchor_wrist = Keypoint2D(0, 0, 0.0);
  CHECK_THROWS_AS(select_half(region, ns, canvas, 80.0), DataError);
}

TEST_CASE("1-bit canvas export round trip") {
  testutil::TempDir tmp("canvas");
  const Skeleton s = testutil::standing_skeleton(320, 200);
  const PoseCanvas canvas =
      render_canvas(normalize_skeleton(s), RenderParams{});
  write_pbm(to_image(canvas), tmp / "c.pbm");
  const ImageU8 back = read_pbm(tmp / "c.pbm");
  CHECK(back.width == PoseCanvas::kSize);
  CHECK(back.height == PoseCanvas::kSize);
  CHECK(std::equal(canvas.pixels.begin(), canvas.pixels.end(),
                   back.data.begin()));
}
