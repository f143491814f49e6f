// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "support.hpp"
#include "walshreg/benchmark.hpp"
#include "walshreg/metrics.hpp"
#include "walshreg/registration.hpp"
#include "walshreg/structure_codes.hpp"
#include "walshreg/synthetic.hpp"
#include "walshreg/transforms.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace walshreg;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(const char* id, bool pass, const std::string& what) {
  std::printf("%s %s %s\n", id, pass ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// H f H^T by plain loops.
std::vector<double> hadamard_product_2d(const Matrix& h, const Patch& f) {
  const int n = h.rows;
  std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc += h(i, k) * f.at(k, l) * h(j, l);
      out[i * n + j] = acc;
    }
  return out;
}

void transform_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  double real_err = 0.0;
  double int_err = 0.0;
  int inputs = 0;
  for (int size : {2, 4, 8}) {
    for (auto ordering : {HadamardOrdering::natural, HadamardOrdering::sequency}) {
      const HadamardPlan plan(size, ordering);
      const Matrix h = plan.matrix();
      for (int n = 0; n < 100; ++n) {
        for (bool integer : {false, true}) {
          const Patch f = testing::random_patch(rng, size, integer);
          std::vector<double> row(f.samples.begin(), f.samples.begin() + size);
          std::vector<double> expect(static_cast<std::size_t>(size), 0.0);
          for (int r = 0; r < size; ++r)
            for (int c = 0; c < size; ++c) expect[r] += h(r, c) * row[c];
          double& err = integer ? int_err : real_err;
          err = std::max(err, max_abs_diff(fwht_1d(row, plan), expect));
          err = std::max(err, max_abs_diff(fwht_2d(f, plan).coeffs, hadamard_product_2d(h, f)));
          ++inputs;
        }
      }
    }
  }
  const double secs = since(t0);
  report("AC1", real_err <= 1e-9 && int_err == 0.0 && secs < 5.0,
         "transform equivalence: " + std::to_string(inputs) + " inputs over sizes 2/4/8, max err " +
             fmt("%.3g", real_err) + " (real) / " + fmt("%.3g", int_err) + " (integer), " + fmt("%.3f s", secs));
}

void round_trip() {
  std::mt19937_64 rng(102);
  const WalshBasis3 basis = walsh3_basis();
  double walsh_err = 0.0;
  double hadamard_err = 0.0;
  for (int n = 0; n < 100; ++n) {
    const Patch f3 = testing::random_patch(rng, 3);
    walsh_err = std::max(walsh_err, max_abs_diff(walsh3_inverse(walsh3_forward(f3, basis), basis).samples, f3.samples));
    for (int size : {2, 4, 8}) {
      const HadamardPlan plan(size, HadamardOrdering::sequency);
      const Patch f = testing::random_patch(rng, size);
      hadamard_err = std::max(hadamard_err, max_abs_diff(inverse_fwht_2d(fwht_2d(f, plan), plan).samples, f.samples));
    }
  }
  report("AC2", walsh_err <= 1e-9 && hadamard_err <= 1e-9,
         "round trip: walsh3 max err " + fmt("%.3g", walsh_err) + ", hadamard max err " + fmt("%.3g", hadamard_err));
}

void illumination_invariance(const GrayImage& img) {
  int mismatched = 0;
  int runs = 0;
  for (auto backend : {Backend::walsh3, Backend::fwht4}) {
    for (int base : {2, 5, 10}) {
      const DigitOrdering o = default_ordering(backend);
      const auto ref = encode_image(img, backend, base, o).codes;
      for (int c : {2, 3}) {
        ++runs;
        if (encode_image(testing::scaled(img, c), backend, base, o).codes != ref) ++mismatched;
      }
    }
  }
  report("AC3", mismatched == 0,
         "illumination invariance: " + std::to_string(runs - mismatched) + "/" + std::to_string(runs) +
             " (backend, base, c) runs bit-identical");
}

void self_registration(const GrayImage& img) {
  bool pass = true;
  std::string detail;
  for (auto backend : {Backend::walsh3, Backend::fwht4}) {
    SearchSpec spec;
    spec.backend = backend;
    spec.ordering = default_ordering(backend);
    const RegistrationResult r = register_images(img, img, spec);
    const double h = entropy(img, OverlapMask(img.width, img.height, true));
    const bool ok = r.ok() && r.params == RigidParams{0, 0, 0} && r.cc_after >= 0.99 &&
                    std::abs(r.mi_after - h) <= 1e-9;
    pass = pass && ok;
    char buf[200];
    std::snprintf(buf, sizeof buf, " %s: (%g,%g,%g) cc=%.4f mi=%.6f H=%.6f;", std::string(to_string(backend)).c_str(),
                  r.params.t, r.params.s, r.params.theta, r.cc_after, r.mi_after, h);
    detail += buf;
  }
  report("AC4", pass, "self registration:" + detail);
}

std::vector<RigidParams> protocol_recovery(const GrayImage& img) {
  const auto t0 = Clock::now();
  std::vector<RigidParams> found;
  int recovered = 0;
  std::string misses;
  int index = 0;
  for (const Perturbation& p : protocol_perturbations()) {
    ++index;
    const RigidParams applied = to_params(p, img.spacing);
    const RegistrationResult r = register_images(img, warp(img, applied).image, SearchSpec{});
    found.push_back(r.params);
    const AlignmentResidual e = alignment_residual(applied, r.params);
    if (r.ok() && e.translation_px <= 1.0 && e.rotation_deg <= 1.0) {
      ++recovered;
    } else {
      misses += " #" + std::to_string(index);
    }
  }
  const double secs = since(t0);
  report("AC5", recovered >= 19 && secs < 600.0,
         "protocol recovery: " + std::to_string(recovered) + "/21 within 1 px and 1 deg, " + fmt("%.1f s", secs) +
             (misses.empty() ? "" : ", missed" + misses));
  return found;
}

void encoding_speed(const GrayImage& img) {
  const EncodingTiming t = time_encoders(img, 10, 3, 1);
  const double ratio = t.direct_over_fast();
  report("AC6", ratio >= 5.0,
         "encoding speed 256x256: direct4 " + fmt("%.4f s", t.direct4_seconds) + ", fwht4 " +
             fmt("%.4f s", t.fwht4_seconds) + ", ratio " + fmt("%.1f", ratio));
}

void metric_properties() {
  std::mt19937_64 rng(107);
  double worst_symmetry = 0.0;
  double worst_self = 0.0;
  double min_mi = 1.0;
  bool cc_in_range = true;
  double worst_cc_self = 0.0;
  for (int n = 0; n < 30; ++n) {
    const GrayImage a = testing::random_image(rng, 64, 64);
    GrayImage b = a;
    for (auto& v : b.pixels) v = static_cast<std::uint8_t>((v + rng() % 40) % 256);
    const OverlapMask all(64, 64, true);
    for (int bins : {16, 256}) {
      const double ab = mutual_information(a, b, all, bins);
      worst_symmetry = std::max(worst_symmetry, std::abs(ab - mutual_information(b, a, all, bins)));
      worst_self = std::max(worst_self, std::abs(mutual_information(a, a, all, bins) - entropy(a, all, bins)));
      min_mi = std::min(min_mi, ab);
    }
    const double cc = intensity_correlation(a, b, all);
    cc_in_range = cc_in_range && cc >= -1.0 && cc <= 1.0;
    const StructureCodeImage sa = encode_image(a, Backend::fwht4, 10, default_ordering(Backend::fwht4));
    const StructureCodeImage sb = encode_image(b, Backend::fwht4, 10, default_ordering(Backend::fwht4));
    const double scc = correlation_coefficient(sa, sb, {0, 0, static_cast<double>(n % 11) - 5});
    cc_in_range = cc_in_range && scc >= -1.0 && scc <= 1.0;
    worst_cc_self = std::max(worst_cc_self, std::abs(correlation_coefficient(sa, sa, {}) - 1.0));
    worst_cc_self = std::max(worst_cc_self, std::abs(intensity_correlation(a, a, all) - 1.0));
  }
  const GrayImage x = testing::random_image(rng, 400, 250);
  const GrayImage y = testing::random_image(rng, 400, 250);
  const double noise_mi = mutual_information(x, y, OverlapMask(400, 250, true), 16);
  const bool pass = worst_symmetry <= 1e-12 && min_mi >= 0.0 && worst_self <= 1e-12 && cc_in_range &&
                    worst_cc_self <= 1e-12 && noise_mi <= 0.05;
  report("AC7", pass,
         "metric properties: symmetry " + fmt("%.2g", worst_symmetry) + ", min MI " + fmt("%.3g", min_mi) +
             ", |MI(a,a)-H| " + fmt("%.2g", worst_self) + ", CC range " + (cc_in_range ? "ok" : "violated") +
             ", |CC(a,a)-1| " + fmt("%.2g", worst_cc_self) + ", noise MI " + fmt("%.4f bits", noise_mi));
}

void determinism(const GrayImage& img, const std::vector<RigidParams>& single_worker) {
  int differing = 0;
  for (int workers : {4, 8}) {
    SearchSpec spec;
    spec.workers = workers;
    std::size_t i = 0;
    for (const Perturbation& p : protocol_perturbations()) {
      const RegistrationResult r = register_images(img, warp(img, to_params(p, img.spacing)).image, spec);
      if (!(r.params == single_worker[i++])) ++differing;
    }
  }
  report("AC8", differing == 0,
         "determinism: workers 1/4/8 on the 21-triple suite, " + std::to_string(differing) + " differing results");
}

void pyramid_consistency() {
  const auto cases = random_perturbations(50, 2024, 20, 20);
  int matched = 0;
  double full_secs = 0.0;
  double pyramid_secs = 0.0;
  int index = 0;
  for (const Perturbation& p : cases) {
    const GrayImage ref = make_phantom(128, static_cast<std::uint64_t>(++index));
    const GrayImage mov = warp(ref, to_params(p, 1.0)).image;
    SearchSpec spec;
    const RegistrationResult full = register_images(ref, mov, spec);
    spec.pyramid_levels = 2;
    const RegistrationResult fast = register_images(ref, mov, spec);
    full_secs += full.elapsed_seconds;
    pyramid_secs += fast.elapsed_seconds;
    if (full.ok() && fast.ok() && full.params == fast.params) ++matched;
  }
  const double speedup = full_secs / pyramid_secs;
  report("AC9", matched >= 45 && speedup >= 3.0,
         "pyramid consistency: " + std::to_string(matched) + "/50 match exhaustive, speedup " + fmt("%.1fx", speedup) +
             " (" + fmt("%.1f s", full_secs) + " vs " + fmt("%.1f s", pyramid_secs) + ")");
}

}  // namespace

int main() {
  const GrayImage phantom = make_phantom(256, 1);
  transform_equivalence();
  round_trip();
  illumination_invariance(phantom);
  self_registration(phantom);
  const std::vector<RigidParams> found = protocol_recovery(phantom);
  encoding_speed(phantom);
  metric_properties();
  determinism(phantom, found);
  pyramid_consistency();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
