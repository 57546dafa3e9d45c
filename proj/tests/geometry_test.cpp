#include <doctest.h>

#include <random>

#include "posegun/geometry.hpp"
#include "testutil.hpp"

using namespace posegun;

namespace {

// Pixel-set overlap oracle for integer-aligned boxes: counts the unit cells
// of each box and of the intersection directly.
long pixel_count(const BBox &b) {
  return static_cast<long>(b.x_max - b.x_min) *
         static_cast<long>(b.y_max - b.y_min);
}

long pixel_intersection(const BBox &a, const BBox &b) {
  const long x0 = std::max<long>(static_cast<long>(a.x_min),
                                 static_cast<long>(b.x_min));
  const long y0 = std::max<long>(static_cast<long>(a.y_min),
                                 static_cast<long>(b.y_min));
  const long x1 = std::min<long>(static_cast<long>(a.x_max),
                                 static_cast<long>(b.x_max));
  const long y1 = std::min<long>(static_cast<long>(a.y_max),
                                 static_cast<long>(b.y_max));
  if (x0 >= x1 || y0 >= y1) {
    return 0;
  }
  return (x1 - x0) * (y1 - y0);
}

} // namespace

TEST_CASE("area of valid boxes") {
  CHECK(area(BBox(0, 0, 10, 10)) == 100.0);
  CHECK(area(BBox(0, 0, 1, 1)) == 1.0);
  CHECK(area(BBox(2, 3, 7, 11)) == 40.0); // (7-2)*(11-3)
}

TEST_CASE("degenerate boxes are rejected at construction") {
  CHECK_THROWS_AS(BBox(0, 0, 0, 10), GeometryError);
  CHECK_THROWS_AS(BBox(0, 0, 10, 0), GeometryError);
  CHECK_THROWS_AS(BBox(5, 5, 5, 5), GeometryError);
  CHECK_THROWS_AS(BBox(10, 0, 0, 10), GeometryError);
}

TEST_CASE("intersect") {
  const BBox a(0, 0, 10, 10);
  CHECK(intersect(a, a) == a);
  CHECK(!intersect(a, BBox(20, 20, 30, 30)).has_value());
  CHECK(intersect(a, BBox(5, 5, 15, 15)) == BBox(5, 5, 10, 10));
  // touching edges have no interior overlap
  CHECK(!intersect(a, BBox(10, 0, 20, 10)).has_value());
}

TEST_CASE("iou") {
  const BBox a(0, 0, 10, 10);
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(a, BBox(20, 20, 30, 30)) == 0.0);
  CHECK(iou(a, BBox(5, 0, 15, 10)) == doctest::Approx(50.0 / 150.0));
}

TEST_CASE("iomin") {
  const BBox big(0, 0, 10, 10);
  CHECK(iomin(big, big) == 1.0);
  CHECK(iomin(BBox(2, 2, 4, 4), big) == 1.0); // nested
  CHECK(iomin(big, BBox(5, 0, 15, 10)) == 0.5);
}

TEST_CASE("detection score range is validated") {
  CHECK_THROWS_AS(Detection(BBox(0, 0, 1, 1), 1.5), GeometryError);
  CHECK_THROWS_AS(Detection(BBox(0, 0, 1, 1), -0.1), GeometryError);
  CHECK(Detection(BBox(0, 0, 1, 1), 0.7).score == 0.7);
}

TEST_CASE("overlap properties on random boxes") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 2000; ++i) {
    const BBox a = testutil::random_box(rng);
    const BBox b = testutil::random_box(rng);
    const double ab_iou = iou(a, b);
    const double ab_iomin = iomin(a, b);
    CHECK(ab_iou == iou(b, a));
    CHECK(ab_iomin == iomin(b, a));
    CHECK(ab_iou >= 0.0);
    CHECK(ab_iou <= ab_iomin);
    CHECK(ab_iomin <= 1.0);
    CHECK(intersect(a, b) == intersect(b, a));
    if (const auto inter = intersect(a, b)) {
      CHECK(area(*inter) <= std::min(area(a), area(b)) + 1e-12);
    }
  }
}

TEST_CASE("nesting forces iomin of one") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const BBox outer = testutil::random_box(rng);
    std::uniform_real_distribution<double> fx(0.1, 0.4);
    const double mx = fx(rng) * outer.width();
    const double my = fx(rng) * outer.height();
    const BBox inner(outer.x_min + mx, outer.y_min + my, outer.x_max - mx,
                     outer.y_max - my);
    CHECK(iomin(inner, outer) == 1.0);
    CHECK(iomin(outer, inner) == 1.0);
  }
}

TEST_CASE("integer boxes agree with the pixel-set oracle") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 2000; ++i) {
    const BBox a = testutil::random_int_box(rng);
    const BBox b = testutil::random_int_box(rng);
    const long ia = pixel_intersection(a, b);
    const long pa = pixel_count(a);
    const long pb = pixel_count(b);
    const double oracle_iomin =
        ia == 0 ? 0.0
                : static_cast<double>(ia) / static_cast<double>(std::min(pa, pb));
    const double oracle_iou =
        ia == 0 ? 0.0 : static_cast<double>(ia) / static_cast<double>(pa + pb - ia);
    CHECK(iomin(a, b) == oracle_iomin);
    CHECK(iou(a, b) == oracle_iou);
  }
}
