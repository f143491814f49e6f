#include "walshreg/benchmark.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <limits>
#include <map>

namespace walshreg {

std::string format_number(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

std::vector<BenchmarkRow> run_registration_benchmark(const GrayImage& reference,
                                                     std::span<const Perturbation> perturbations,
                                                     std::span<const Backend> backends,
                                                     const SearchSpec& spec, Interpolation interp) {
  std::vector<BenchmarkRow> rows;
  int index = 0;
  for (const Perturbation& p : perturbations) {
    ++index;
    const RigidParams applied = to_params(p, reference.spacing);
    GrayImage moving = warp(reference, applied, interp).image;
    moving.spacing = reference.spacing;
    for (const Backend backend : backends) {
      SearchSpec s = spec;
      if (s.backend != backend) {
        s.backend = backend;
        s.ordering = default_ordering(backend);
      }
      BenchmarkRow row;
      row.index = index;
      row.perturbation = p;
      row.backend = backend;
      const RegistrationResult r = register_images(reference, moving, s);
      row.elapsed_seconds = r.elapsed_seconds;
      row.status = r.status;
      row.error_kind = r.error_kind;
      if (r.ok()) {
        row.recovered = r.params;
        row.residual = alignment_residual(applied, r.params);
        row.mi_after = r.mi_after;
        row.cc_after = r.cc_after;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

double time_encoding(const GrayImage& img, Backend backend, int base, int repeats, int workers) {
  const DigitOrdering ordering = default_ordering(backend);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < std::max(1, repeats); ++i) {
    const auto start = std::chrono::steady_clock::now();
    [[maybe_unused]] const StructureCodeImage codes = encode_image(img, backend, base, ordering, workers);
    const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
    best = std::min(best, d.count());
  }
  return best;
}

EncodingTiming time_encoders(const GrayImage& img, int base, int repeats, int workers) {
  return {time_encoding(img, Backend::walsh3, base, repeats, workers),
          time_encoding(img, Backend::fwht4, base, repeats, workers),
          time_encoding(img, Backend::direct4, base, repeats, workers)};
}

CsvTable benchmark_table(std::span<const BenchmarkRow> rows) {
  CsvTable table;
  table.header = {"index", "x_mm", "y_mm", "angle_deg", "backend", "t", "s", "theta",
                  "residual_px", "residual_deg", "mi_after", "cc_after", "elapsed_seconds",
                  "status", "error"};
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (const BenchmarkRow& r : rows) {
    const auto& q = r.recovered;
    const auto& e = r.residual;
    table.rows.push_back({std::to_string(r.index), format_number(r.perturbation.x_mm),
                          format_number(r.perturbation.y_mm), format_number(r.perturbation.angle_deg),
                          std::string(to_string(r.backend)),
                          q ? format_number(q->t) : "", q ? format_number(q->s) : "",
                          q ? format_number(q->theta) : "",
                          e ? format_number(e->translation_px) : "",
                          e ? format_number(e->rotation_deg) : "", opt(r.mi_after), opt(r.cc_after),
                          format_number(r.elapsed_seconds), std::string(to_string(r.status)),
                          r.error_kind ? std::string(to_string(*r.error_kind)) : ""});
  }
  return table;
}

CsvTable summary_table(std::span<const BenchmarkRow> rows, const EncodingTiming& timing) {
  std::map<Backend, std::pair<double, int>> elapsed;
  for (const BenchmarkRow& r : rows) {
    auto& [sum, n] = elapsed[r.backend];
    sum += r.elapsed_seconds;
    ++n;
  }
  CsvTable table;
  table.header = {"quantity", "value"};
  for (const auto& [backend, acc] : elapsed) {
    table.rows.push_back({"mean_registration_seconds_" + std::string(to_string(backend)),
                          format_number(acc.first / acc.second)});
  }
  const auto w = elapsed.find(Backend::walsh3);
  const auto f = elapsed.find(Backend::fwht4);
  if (w != elapsed.end() && f != elapsed.end()) {
    table.rows.push_back({"registration_ratio_walsh3_over_fwht4",
                          format_number((w->second.first / w->second.second) /
                                        (f->second.first / f->second.second))});
  }
  table.rows.push_back({"encode_seconds_walsh3", format_number(timing.walsh3_seconds)});
  table.rows.push_back({"encode_seconds_fwht4", format_number(timing.fwht4_seconds)});
  table.rows.push_back({"encode_seconds_direct4", format_number(timing.direct4_seconds)});
  table.rows.push_back({"encode_ratio_direct4_over_fwht4", format_number(timing.direct_over_fast())});
  return table;
}

}  // namespace walshreg
