#include "support.hpp"
#include "walshreg/errors.hpp"
#include "walshreg/registration.hpp"
#include "walshreg/synthetic.hpp"

#include <doctest.h>

#include <cmath>

using namespace walshreg;

namespace {

SearchSpec narrow_spec(int t, double theta, Backend backend = Backend::fwht4) {
  SearchSpec spec;
  spec.t_range = {-t, t, 1};
  spec.s_range = {-t, t, 1};
  spec.theta_range = {-theta, theta, 1.0};
  spec.backend = backend;
  spec.ordering = default_ordering(backend);
  return spec;
}

double energy(const GrayImage& a, const GrayImage& b, const OverlapMask& mask) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!mask.inside[i]) continue;
    const double d = static_cast<double>(a.pixels[i]) - b.pixels[i];
    e += d * d;
  }
  return e;
}

}  // namespace

TEST_SUITE("registration") {

TEST_CASE("ranges") {
  CHECK(IntRange{-2, 2, 2}.values() == std::vector<int>{-2, 0, 2});
  CHECK(IntRange{-3, 3, 2}.values() == std::vector<int>{-3, -1, 1, 3});
  CHECK(AngleRange{-1, 1, 0.5}.values().size() == 5);
  CHECK(make_window(SearchSpec{}).cell_count() == 51u * 51u * 51u);
  SearchSpec bad;
  bad.t_range.step = 0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = SearchSpec{};
  bad.theta_range = {5, -5, 1};
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = SearchSpec{};
  bad.ordering = make_ordering(OrderingTag::IA, 3);
  CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("tie-break") {
  auto cell = [](double v, double t, double s, double th) {
    return CellScore{{t, s, th}, CorrelationStatus::ok, v};
  };
  CHECK(better_candidate(cell(0.9, 5, 5, 5), cell(0.8, 0, 0, 0)));
  CHECK(better_candidate(cell(0.8, 5, 5, 1), cell(0.8, 0, 0, -2)));
  CHECK(better_candidate(cell(0.8, 1, -1, 2), cell(0.8, 0, 3, -2)));
  CHECK(better_candidate(cell(0.8, -1, 1, 2), cell(0.8, 1, -1, 2)));
  CHECK(better_candidate(cell(0.8, 1, -1, 2), cell(0.8, 1, 1, 2)));
  CHECK(better_candidate(cell(0.8, 1, 1, -2), cell(0.8, 1, 1, 2)));
  CHECK_FALSE(better_candidate(cell(0.8, 1, 1, 2), cell(0.8, 1, 1, 2)));
}

TEST_CASE("grid scores equal the direct correlation") {
  const GrayImage ref = make_phantom(48, 3);
  const GrayImage mov = warp(ref, {3, -2, 6}).image;
  for (auto backend : {Backend::walsh3, Backend::fwht4}) {
    const DigitOrdering o = default_ordering(backend);
    const StructureCodeImage a = encode_image(ref, backend, 10, o);
    const StructureCodeImage b = encode_image(mov, backend, 10, o);
    SearchWindow window{IntRange{-40, 40, 7}.values(), IntRange{-40, 40, 9}.values(), {-13, -6, 0, 2.5, 7, 90}};
    const GridOutcome g = search_grid(a, b, window, 1e-9, 2, true);
    REQUIRE(g.cells.size() == window.cell_count());
    std::size_t ok = 0;
    for (const CellScore& c : g.cells) {
      const CorrelationValue direct = try_correlation_coefficient(a, b, c.params);
      CHECK(c.status == direct.status);
      if (c.status == CorrelationStatus::ok) {
        ++ok;
        CHECK(std::abs(c.value - direct.value) <= 1e-9);
      }
    }
    CHECK(ok == g.ok_cells);
    CHECK(ok > 100);
  }
}

TEST_CASE("self registration") {
  const GrayImage img = make_phantom(96, 5);
  for (auto backend : {Backend::walsh3, Backend::fwht4}) {
    const RegistrationResult r = register_images(img, img, narrow_spec(6, 6, backend));
    REQUIRE(r.ok());
    CHECK(r.params == RigidParams{0, 0, 0});
    CHECK(r.cc_after >= 0.99);
    CHECK(std::abs(r.mi_after - entropy(img, OverlapMask(96, 96, true))) <= 1e-9);
    CHECK(r.elapsed_seconds > 0.0);
  }
}

TEST_CASE("pure shift is undone exactly") {
  const GrayImage ref = make_phantom(96, 6);
  const RigidParams applied{5, -3, 0};
  const WarpResult moved = warp(ref, applied);
  SearchSpec spec = narrow_spec(10, 0);
  const RegistrationResult r = register_images(ref, moved.image, spec);
  REQUIRE(r.ok());
  CHECK(r.params == RigidParams{-5, 3, 0});
  const AlignmentResidual e = alignment_residual(applied, r.params);
  CHECK(e.translation_px == 0.0);
  CHECK(e.rotation_deg == 0.0);

  // Difference energy over the region both the shifted and registered images cover.
  const WarpResult back = warp(moved.image, r.params);
  OverlapMask both(96, 96, false);
  for (std::size_t i = 0; i < both.inside.size(); ++i) both.inside[i] = back.mask.inside[i] && moved.mask.inside[i];
  CHECK(energy(ref, back.image, both) < 0.01 * energy(ref, moved.image, both));
}

TEST_CASE("first protocol triple") {
  const GrayImage ref = make_phantom(128, 1);
  const RigidParams applied = to_params(protocol_perturbations()[0], 1.0);
  const GrayImage mov = warp(ref, applied).image;
  const RegistrationResult r = register_images(ref, mov, narrow_spec(15, 15));
  REQUIRE(r.ok());
  const AlignmentResidual e = alignment_residual(applied, r.params);
  CHECK(e.translation_px <= 1.0);
  CHECK(e.rotation_deg <= 1.0);
}

TEST_CASE("worker count does not change the answer") {
  const GrayImage ref = make_phantom(64, 2);
  const GrayImage mov = warp(ref, {-4, 6, 7}).image;
  SearchSpec spec = narrow_spec(10, 10);
  const RegistrationResult one = register_images(ref, mov, spec);
  for (int workers : {3, 4, 8}) {
    spec.workers = workers;
    const RegistrationResult r = register_images(ref, mov, spec);
    CHECK(r.params == one.params);
    CHECK(r.score == one.score);
  }
}

TEST_CASE("pyramid") {
  const GrayImage ref = make_phantom(128, 4);
  const GrayImage mov = warp(ref, {6, -4, 0}).image;
  SearchSpec spec = narrow_spec(12, 4);
  const RegistrationResult full = exhaustive_search(ref, mov, spec);
  spec.pyramid_levels = 1;
  CHECK(pyramid_search(ref, mov, spec).params == full.params);
  spec.pyramid_levels = 2;
  const RegistrationResult coarse = pyramid_search(ref, mov, spec);
  REQUIRE(coarse.ok());
  CHECK(coarse.params == full.params);
  CHECK(full.params == RigidParams{-6, 4, 0});

  spec.pyramid_levels = 6;
  CHECK_THROWS_AS(pyramid_search(ref, mov, spec), InputError);
}

TEST_CASE("error outcomes") {
  const GrayImage ref = make_phantom(48, 1);
  SUBCASE("no grid cell overlaps") {
    SearchSpec spec = narrow_spec(0, 0);
    spec.t_range = {500, 510, 1};
    const RegistrationResult r = register_images(ref, ref, spec);
    CHECK_FALSE(r.ok());
    REQUIRE(r.error_kind.has_value());
    CHECK(*r.error_kind == RegistrationErrorKind::empty_overlap);
    CHECK(std::isnan(r.mi_after));
  }
  SUBCASE("constant images") {
    const RegistrationResult r = register_images(GrayImage(48, 48, 9), ref, narrow_spec(2, 2));
    CHECK_FALSE(r.ok());
    CHECK(*r.error_kind == RegistrationErrorKind::degenerate_input);
  }
  SUBCASE("input problems") {
    CHECK_THROWS_AS(register_images(ref, GrayImage(47, 48, 1), narrow_spec(2, 2)), InputError);
    CHECK_THROWS_AS(register_images(GrayImage(5, 5, 1), GrayImage(5, 5, 1), narrow_spec(2, 2)), InputError);
  }
}

TEST_CASE("evaluate_pair") {
  const GrayImage img = make_phantom(64, 9);
  const OverlapMask all(64, 64, true);
  const PairMetrics m = evaluate_pair(img, img, all);
  CHECK(m.cc == doctest::Approx(1.0));
  CHECK(m.mi == doctest::Approx(entropy(img, all)).epsilon(1e-12));
}

}  // TEST_SUITE
