#include "walshreg/errors.hpp"
#include "walshreg/synthetic.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace walshreg;

TEST_SUITE("synthetic") {

TEST_CASE("protocol triples") {
  const auto p = protocol_perturbations();
  REQUIRE(p.size() == 21);
  CHECK(p[0].x_mm == 4);
  CHECK(p[0].y_mm == -10);
  CHECK(p[0].angle_deg == 9);
  CHECK(p[16].angle_deg == -25);
  CHECK(p[17].angle_deg == 25);
  CHECK(p[20].x_mm == 0);
  CHECK(p[20].y_mm == 0);
  CHECK(p[20].angle_deg == 0);
}

TEST_CASE("phantom") {
  const GrayImage a = make_phantom(64, 3);
  CHECK(a.width == 64);
  CHECK(make_phantom(64, 3).pixels == a.pixels);
  CHECK(make_phantom(64, 4).pixels != a.pixels);
  CHECK(*std::max_element(a.pixels.begin(), a.pixels.end()) <= 85);
  CHECK(a.at(0, 0) == 0);
  CHECK_THROWS_AS(make_phantom(4), ParameterError);
}

TEST_CASE("perturbation files") {
  const auto p = parse_perturbations("x_mm,y_mm,angle\n# comment\n4,-10,9\n\n 1.5 , 2 ,-3 # trailing\n");
  REQUIRE(p.size() == 2);
  CHECK(p[1].x_mm == 1.5);
  CHECK(p[1].angle_deg == -3);
  CHECK_THROWS_AS(parse_perturbations("1,2\n"), InputError);
  CHECK_THROWS_AS(parse_perturbations("1,2,x3\n"), InputError);
  CHECK_THROWS_AS(load_perturbations("/nonexistent/perturbations.csv"), IoError);
}

TEST_CASE("random perturbations") {
  const auto a = random_perturbations(50, 7, 20, 15);
  CHECK(a.size() == 50);
  for (const auto& p : a) {
    CHECK(std::abs(p.x_mm) <= 20);
    CHECK(std::abs(p.angle_deg) <= 15);
  }
  const auto b = random_perturbations(50, 7, 20, 15);
  CHECK(std::equal(a.begin(), a.end(), b.begin(), [](const Perturbation& u, const Perturbation& v) {
    return u.x_mm == v.x_mm && u.y_mm == v.y_mm && u.angle_deg == v.angle_deg;
  }));
}

TEST_CASE("alignment residual") {
  const RigidParams applied{4, -10, 9};
  const auto [c, s] = cos_sin_degrees(-9.0);
  // Exact inverse of the applied motion.
  const RigidParams inverse{-(c * 4 - s * -10), -(s * 4 + c * -10), -9};
  const AlignmentResidual e = alignment_residual(applied, inverse);
  CHECK(e.translation_px == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(e.rotation_deg == 0.0);
  CHECK(alignment_residual({3, 0, 0}, {-2, 0, 1}).translation_px == doctest::Approx(1.0));
  CHECK(alignment_residual({3, 0, 0}, {-2, 0, 1}).rotation_deg == doctest::Approx(1.0));
  CHECK(to_params({4, -10, 9}, 2.0) == RigidParams{2, -5, 9});
}

}  // TEST_SUITE
