#include <doctest.h>

#include <random>

#include "respicam/error.hpp"
#include "respicam/roi.hpp"

using namespace respicam;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::NoData;
}

}  // namespace

TEST_CASE("chest box arithmetic for the three size classes") {
  const BoundingBox face{100, 50, 100, 100};
  CHECK(chest_roi_from_face(face, SizeClass::Medium, 1280, 720) == BoundingBox{70, 170, 160, 100});
  CHECK(chest_roi_from_face(face, SizeClass::Small, 1280, 720) == BoundingBox{90, 170, 120, 80});
  CHECK(chest_roi_from_face(face, SizeClass::Large, 1280, 720) == BoundingBox{50, 170, 200, 120});
}

TEST_CASE("chest box near the frame corner is clamped on the right and bottom") {
  const BoundingBox roi = chest_roi_from_face({1200, 400, 100, 100}, SizeClass::Large, 1280, 720);
  CHECK(roi == BoundingBox{1150, 520, 130, 120});
  const BoundingBox low = chest_roi_from_face({1200, 500, 100, 100}, SizeClass::Large, 1280, 720);
  CHECK(low == BoundingBox{1150, 620, 130, 100});
  CHECK(low.x + low.w == 1280);
  CHECK(low.y + low.h == 720);
}

TEST_CASE("chest box starting at the bottom edge is degenerate") {
  // The chest top lands on y = 600 + 1.2 * 100 = 720, the first row outside the frame.
  CHECK(code_of([] { chest_roi_from_face({1200, 600, 100, 100}, SizeClass::Large, 1280, 720); }) ==
        ErrorCode::RoiTooSmall);
}

TEST_CASE("clamped sides of 8 px or less are rejected") {
  // Medium box of a 10x10 face is 16x10, 8 rows remain inside a frame of height 40.
  CHECK(code_of([] { chest_roi_from_face({20, 20, 10, 10}, SizeClass::Medium, 100, 40); }) ==
        ErrorCode::RoiTooSmall);
  CHECK(chest_roi_from_face({20, 20, 10, 10}, SizeClass::Medium, 100, 41).h == 9);
}

TEST_CASE("clamp_box intersection") {
  CHECK(clamp_box({-10, -10, 50, 50}, 100, 100) == BoundingBox{0, 0, 40, 40});
  CHECK(clamp_box({5, 6, 7, 8}, 100, 100) == BoundingBox{5, 6, 7, 8});
  CHECK(code_of([] { clamp_box({200, 200, 10, 10}, 100, 100); }) == ErrorCode::OutOfBounds);
  CHECK(code_of([] { clamp_box({-20, 0, 20, 10}, 100, 100); }) == ErrorCode::OutOfBounds);
}

TEST_CASE("expand_box grows each side and clamps") {
  CHECK(expand_box({40, 40, 10, 20}, 0.5, 100, 100) == BoundingBox{35, 30, 20, 40});
  CHECK(expand_box({40, 40, 10, 20}, 10.0, 100, 100) == BoundingBox{0, 0, 100, 100});
  CHECK(expand_box({40, 40, 10, 20}, 0.0, 100, 100) == BoundingBox{40, 40, 10, 20});
}

TEST_CASE("size classes are ordered by area and centred on the face") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> pos(-50, 500);
  std::uniform_int_distribution<int> side(10, 300);
  for (int trial = 0; trial < 500; ++trial) {
    const BoundingBox face{pos(rng), pos(rng), side(rng), side(rng)};
    const BoundingBox s = chest_box_unclamped(face, SizeClass::Small);
    const BoundingBox m = chest_box_unclamped(face, SizeClass::Medium);
    const BoundingBox l = chest_box_unclamped(face, SizeClass::Large);
    REQUIRE(s.area() < m.area());
    REQUIRE(m.area() < l.area());
    const double face_cx = face.x + 0.5 * face.w;
    for (const BoundingBox& b : {s, m, l}) {
      // Integer rounding of x and w moves the centre by at most 0.5 + 0.25 px.
      REQUIRE(std::abs(b.x + 0.5 * b.w - face_cx) <= 0.75);
    }
  }
}

TEST_CASE("clamped chest boxes always lie inside the frame") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> pos(0, 600);
  std::uniform_int_distribution<int> side(12, 200);
  int produced = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const BoundingBox face{pos(rng), pos(rng), side(rng), side(rng)};
    for (SizeClass size : kAllSizeClasses) {
      try {
        const BoundingBox b = chest_roi_from_face(face, size, 640, 480);
        ++produced;
        REQUIRE(b.x >= 0);
        REQUIRE(b.y >= 0);
        REQUIRE(b.x + b.w <= 640);
        REQUIRE(b.y + b.h <= 480);
        REQUIRE(b.w > 8);
        REQUIRE(b.h > 8);
      } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::RoiTooSmall);
      }
    }
  }
  CHECK(produced > 100);
}

TEST_CASE("geometry overrides change the multipliers") {
  RoiGeometry g;
  g[SizeClass::Medium] = {1.0, 0.5, 2.0};
  CHECK(chest_box_unclamped({100, 50, 100, 100}, SizeClass::Medium, g) == BoundingBox{100, 250, 100, 50});
}

TEST_CASE("size class names") {
  for (SizeClass s : kAllSizeClasses) CHECK(parse_size_class(to_string(s)) == s);
  CHECK_FALSE(parse_size_class("huge").has_value());
}
