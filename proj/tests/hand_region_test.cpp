#include <doctest.h>

#include <random>

#include "posegun/hand_region.hpp"
#include "testutil.hpp"

using namespace posegun;

namespace {

RegionParams default_params() { return RegionParams{}; }

Skeleton arms_only(const Keypoint2D &relbow, const Keypoint2D &rwrist,
                   const Keypoint2D &lelbow, const Keypoint2D &lwrist) {
  Skeleton s;
  s.keypoints[body25::kRElbow] = relbow;
  s.keypoints[body25::kRWrist] = rwrist;
  s.keypoints[body25::kLElbow] = lelbow;
  s.keypoints[body25::kLWrist] = lwrist;
  return s;
}

} // namespace

TEST_CASE("confidence gate filters low keypoints") {
  const auto region =
      hand_box_from_forearm(Keypoint2D(0, 0, 0.1), Keypoint2D(10, 0, 1.0),
                            default_params(), HandSide::right);
  CHECK(!region.has_value());
}

TEST_CASE("hand box follows the forearm formula") {
  // e=(0,0), w=(10,0), k=0.5, s=1.5 -> center (15,0), side 15
  const auto region =
      hand_box_from_forearm(Keypoint2D(0, 0, 1.0), Keypoint2D(10, 0, 1.0),
                            default_params(), HandSide::right, 3);
  REQUIRE(region.has_value());
  CHECK(region->box == BBox(7.5, -7.5, 22.5, 7.5));
  CHECK(region->person_id == 3);
  CHECK(region->side == HandSide::right);
  CHECK(region->anchor_wrist.x == 10.0);
}

TEST_CASE("zero forearm length has no direction") {
  const auto region =
      hand_box_from_forearm(Keypoint2D(5, 5, 1.0), Keypoint2D(5, 5, 1.0),
                            default_params(), HandSide::left);
  CHECK(!region.has_value());
}

TEST_CASE("boxes are square before clipping") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> coord(-200.0, 200.0);
  for (int i = 0; i < 500; ++i) {
    const Keypoint2D e(coord(rng), coord(rng), 1.0);
    const Keypoint2D w(coord(rng), coord(rng), 1.0);
    const auto region =
        hand_box_from_forearm(e, w, default_params(), HandSide::right);
    if (region) {
      CHECK(region->box.width() == doctest::Approx(region->box.height()));
    }
  }
}

TEST_CASE("extract: nothing detected") {
  const Skeleton s; // all confidences zero
  CHECK(extract_hand_regions(s, default_params()).empty());
}

TEST_CASE("extract: two disjoint hands stay separate") {
  const Skeleton s =
      arms_only(Keypoint2D(0, 0, 1.0), Keypoint2D(10, 0, 1.0),
                Keypoint2D(200, 0, 1.0), Keypoint2D(190, 0, 1.0));
  const auto regions = extract_hand_regions(s, default_params());
  REQUIRE(regions.size() == 2);
  CHECK(regions[0].side == HandSide::right);
  CHECK(regions[1].side == HandSide::left);
  CHECK(iou(regions[0].box, regions[1].box) < default_params().merge_iou);
}

TEST_CASE("extract: two-hand grip merges to the union box") {
  // Geometry chosen so the two hand boxes are (0,0,10,10) and (2,0,12,10):
  // iou = 80/120 = 0.666... >= 0.4 -> one merged region (0,0,12,10).
  RegionParams params;
  params.merge_iou = 0.4;
  params.extension_k = 0.0; // center on the wrist directly
  params.scale_s = 1.0;
  // right: wrist (5,5), forearm length 10 -> box (0,0,10,10)
  // left: wrist (7,5), forearm length 10 -> box (2,0,12,10)
  const Skeleton s =
      arms_only(Keypoint2D(5, -5, 1.0), Keypoint2D(5, 5, 0.8),
                Keypoint2D(7, -5, 1.0), Keypoint2D(7, 5, 0.9));
  CHECK(iou(BBox(0, 0, 10, 10), BBox(2, 0, 12, 10)) ==
        doctest::Approx(80.0 / 120.0));
  const auto regions = extract_hand_regions(s, params);
  REQUIRE(regions.size() == 1);
  CHECK(regions[0].side == HandSide::merged);
  CHECK(regions[0].box == BBox(0, 0, 12, 10));
  // higher-confidence wrist anchors the merged region
  CHECK(regions[0].anchor_wrist.x == 7.0);
}

TEST_CASE("at most two regions; merge yields exactly one") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> coord(0.0, 300.0);
  const RegionParams params = default_params();
  for (int i = 0; i < 2000; ++i) {
    const Skeleton s = arms_only(
        Keypoint2D(coord(rng), coord(rng), 1.0),
        Keypoint2D(coord(rng), coord(rng), 1.0),
        Keypoint2D(coord(rng), coord(rng), 1.0),
        Keypoint2D(coord(rng), coord(rng), 1.0));
    const auto right = hand_box_from_forearm(s.keypoints[body25::kRElbow],
                                             s.keypoints[body25::kRWrist],
                                             params, HandSide::right);
    const auto left = hand_box_from_forearm(s.keypoints[body25::kLElbow],
                                            s.keypoints[body25::kLWrist],
                                            params, HandSide::left);
    const auto regions = extract_hand_regions(s, params);
    REQUIRE(regions.size() <= 2);
    if (right && left && iou(right->box, left->box) >= params.merge_iou) {
      REQUIRE(regions.size() == 1);
      CHECK(regions[0].side == HandSide::merged);
    } else if (regions.size() == 2) {
      // survivors never pairwise overlap at or above the merge threshold
      CHECK(iou(regions[0].box, regions[1].box) < params.merge_iou);
    }
  }
}

TEST_CASE("translation and scale equivariance, exact on grid inputs") {
  // Integer keypoints, dyadic parameters, integer translations and
  // power-of-two scalings keep every float operation exact. Forearm
  // displacements come from axis-aligned and Pythagorean families so the
  // forearm length itself is exactly representable.
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> coord(-100, 100);
  std::uniform_int_distribution<int> shift(-50, 50);
  std::uniform_int_distribution<int> stretch(1, 6);
  const RegionParams params = default_params(); // k=0.5, s=1.5 are dyadic
  for (int i = 0; i < 1000; ++i) {
    const double ex = coord(rng), ey = coord(rng);
    static const int dirs[6][2] = {{1, 0}, {0, 1}, {3, 4},
                                   {4, 3}, {5, 12}, {8, 15}};
    const auto &dir = dirs[rng() % 6];
    const int sx = (rng() % 2) ? 1 : -1;
    const int sy = (rng() % 2) ? 1 : -1;
    const int k = stretch(rng);
    const double wx = ex + sx * k * dir[0];
    const double wy = ey + sy * k * dir[1];
    const double dx = shift(rng), dy = shift(rng);
    const auto base = hand_box_from_forearm(Keypoint2D(ex, ey, 1.0),
                                            Keypoint2D(wx, wy, 1.0), params,
                                            HandSide::right);
    REQUIRE(base.has_value());

    const auto moved = hand_box_from_forearm(
        Keypoint2D(ex + dx, ey + dy, 1.0), Keypoint2D(wx + dx, wy + dy, 1.0),
        params, HandSide::right);
    REQUIRE(moved.has_value());
    CHECK(moved->box.x_min == base->box.x_min + dx);
    CHECK(moved->box.y_min == base->box.y_min + dy);
    CHECK(moved->box.x_max == base->box.x_max + dx);
    CHECK(moved->box.y_max == base->box.y_max + dy);

    const double t = (i % 2) ? 2.0 : 0.5;
    const auto scaled = hand_box_from_forearm(
        Keypoint2D(t * ex, t * ey, 1.0), Keypoint2D(t * wx, t * wy, 1.0),
        params, HandSide::right);
    REQUIRE(scaled.has_value());
    CHECK(scaled->box.width() == t * base->box.width());
    CHECK(scaled->box.x_min == t * base->box.x_min);
    CHECK(scaled->box.y_max == t * base->box.y_max);
  }
}

TEST_CASE("clip to image") {
  HandRegion region;
  region.box = BBox(10, 10, 20, 20);
  SUBCASE("inside stays unchanged") {
    const auto clipped = clip_to_image(region, 100, 100);
    REQUIRE(clipped.has_value());
    CHECK(clipped->box == region.box);
  }
  SUBCASE("corner overlap is clamped") {
    region.box = BBox(-5, -5, 5, 5);
    const auto clipped = clip_to_image(region, 100, 100);
    REQUIRE(clipped.has_value());
    CHECK(clipped->box == BBox(0, 0, 5, 5));
  }
  SUBCASE("fully outside clips away") {
    region.box = BBox(-30, 10, -10, 20);
    CHECK(!clip_to_image(region, 100, 100).has_value());
  }
}
