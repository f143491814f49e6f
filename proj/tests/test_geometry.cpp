#include "support.hpp"
#include "walshreg/errors.hpp"
#include "walshreg/geometry.hpp"

#include <doctest.h>

#include <cmath>

using namespace walshreg;

TEST_SUITE("geometry") {

TEST_CASE("identity warp") {
  std::mt19937_64 rng(1);
  const GrayImage img = testing::random_image(rng, 17, 11);
  for (auto interp : {Interpolation::nearest, Interpolation::bilinear}) {
    const WarpResult r = warp(img, {}, interp);
    CHECK(r.image.pixels == img.pixels);
    CHECK(r.mask.count() == img.size());
  }
}

TEST_CASE("one pixel shift on a 3x3 grid") {
  GrayImage img(3, 3);
  img.pixels = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  // output(x, y) = input(x - 1, y): content moves right by one column and the
  // column with no source is masked out.
  for (auto interp : {Interpolation::nearest, Interpolation::bilinear}) {
    const WarpResult r = warp(img, {1, 0, 0}, interp);
    CHECK(r.image.pixels == std::vector<std::uint8_t>{0, 1, 2, 0, 4, 5, 0, 7, 8});
    CHECK(r.mask.inside == std::vector<std::uint8_t>{0, 1, 1, 0, 1, 1, 0, 1, 1});
  }
}

TEST_CASE("quarter turn is an index permutation") {
  std::mt19937_64 rng(2);
  for (int n : {5, 8}) {
    const GrayImage img = testing::random_image(rng, n, n);
    const WarpResult r = warp(img, {0, 0, 90}, Interpolation::nearest);
    CHECK(r.mask.count() == img.size());
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) CHECK(r.image.at(x, y) == img.at(n - 1 - y, x));
    // Bilinear hits grid points exactly as well.
    CHECK(warp(img, {0, 0, 90}).image.pixels == r.image.pixels);
  }
}

TEST_CASE("angles") {
  CHECK(normalize_angle(190.0) == doctest::Approx(-170.0));
  CHECK(normalize_angle(-180.0) == doctest::Approx(180.0));
  CHECK(normalize_angle(540.0) == doctest::Approx(180.0));
  const auto [c90, s90] = cos_sin_degrees(90.0);
  CHECK(c90 == 0.0);
  CHECK(s90 == 1.0);
  const auto [c180, s180] = cos_sin_degrees(-180.0);
  CHECK(c180 == -1.0);
  CHECK(s180 == 0.0);
  const auto [c, s] = cos_sin_degrees(30.0);
  CHECK(c == doctest::Approx(std::sqrt(3.0) / 2));
  CHECK(s == doctest::Approx(0.5));
}

TEST_CASE("rotated_nearest matches nearest warp sampling") {
  const int w = 21, h = 15;
  for (double theta : {-25.0, -7.0, 3.0, 13.0}) {
    const auto [c, s] = cos_sin_degrees(theta);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const SourcePoint p = source_point(x, y, {0, 0, theta}, w, h);
        const GridIndex g = rotated_nearest(x, y, c, s, w, h);
        CHECK(g.x == static_cast<int>(std::floor(p.x + 0.5)));
        CHECK(g.y == static_cast<int>(std::floor(p.y + 0.5)));
      }
  }
}

TEST_CASE("mm_to_px") {
  CHECK(mm_to_px(4, 1.0) == 4);
  CHECK(mm_to_px(4, 2.0) == 2);
  CHECK(mm_to_px(-10, 1.0) == -10);
  CHECK_THROWS_AS(mm_to_px(1, 0.0), ParameterError);
}

TEST_CASE("difference_image") {
  std::mt19937_64 rng(3);
  const GrayImage a = testing::random_image(rng, 9, 7);
  const OverlapMask all(9, 7, true);
  for (auto v : difference_image(a, a, all).pixels) CHECK(v == 0);
  for (auto v : difference_image(GrayImage(5, 5, 200), GrayImage(5, 5, 50), OverlapMask(5, 5, true)).pixels)
    CHECK(v == 150);
  for (auto v : difference_image(GrayImage(5, 5, 50), GrayImage(5, 5, 200), OverlapMask(5, 5, false)).pixels)
    CHECK(v == 0);
  CHECK_THROWS_AS(difference_image(a, GrayImage(9, 6), all), InputError);
}

TEST_CASE("downsample_half") {
  GrayImage img(5, 3, 0, 0.5);
  img.pixels = {0, 2, 4, 6, 9, 1, 3, 5, 7, 9, 8, 8, 8, 8, 8};
  const GrayImage d = downsample_half(img);
  CHECK(d.width == 2);
  CHECK(d.height == 1);
  CHECK(d.spacing == 1.0);
  CHECK(d.pixels == std::vector<std::uint8_t>{2, 6});
}

TEST_CASE("image construction") {
  CHECK_THROWS_AS(GrayImage(-1, 3), InputError);
  CHECK_THROWS_AS(GrayImage(3, 3, 0, 0.0), ParameterError);
}

}  // TEST_SUITE
