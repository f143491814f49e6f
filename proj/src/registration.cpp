#include "walshreg/registration.hpp"

#include "parallel.hpp"
#include "walshreg/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace walshreg {

std::vector<int> IntRange::values() const {
  std::vector<int> out;
  if (step <= 0 || lo > hi) return out;
  for (long long v = lo; v <= hi; v += step) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<double> AngleRange::values() const {
  std::vector<double> out;
  if (!(step > 0.0) || lo > hi) return out;
  const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (long long k = 0; k < count; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

void SearchSpec::validate() const {
  auto check_int = [](const IntRange& r, const char* name) {
    if (r.step <= 0) throw ParameterError(std::string(name) + " step must be positive");
    if (r.lo > r.hi) throw ParameterError(std::string(name) + " range is empty");
  };
  check_int(t_range, "t");
  check_int(s_range, "s");
  if (!(theta_range.step > 0.0)) throw ParameterError("theta step must be positive");
  if (theta_range.lo > theta_range.hi) throw ParameterError("theta range is empty");
  if (pyramid_levels < 1 || pyramid_levels > 8) throw ParameterError("pyramid levels must be in [1, 8]");
  if (base < 1) throw ParameterError("base must be >= 1");
  if (workers < 1) throw ParameterError("workers must be >= 1");
  if (bins < 2) throw ParameterError("bins must be >= 2");
  if (!(min_overlap_fraction > 0.0) || min_overlap_fraction > 1.0) {
    throw ParameterError("minimum overlap fraction must be in (0, 1]");
  }
  const int side = neighborhood_side(backend);
  if (static_cast<int>(ordering.permutation.size()) != side * side - 1) {
    throw ParameterError("ordering " + std::string(to_string(ordering.tag)) + " does not fit backend " +
                         std::string(to_string(backend)));
  }
}

std::string_view to_string(RegistrationStatus status) {
  return status == RegistrationStatus::ok ? "ok" : "error";
}

std::string_view to_string(RegistrationErrorKind kind) {
  switch (kind) {
    case RegistrationErrorKind::empty_overlap: return "empty_overlap";
    case RegistrationErrorKind::zero_variance: return "zero_variance";
    case RegistrationErrorKind::degenerate_input: return "degenerate_input";
  }
  return "?";
}

SearchWindow make_window(const SearchSpec& spec) {
  return {spec.t_range.values(), spec.s_range.values(), spec.theta_range.values()};
}

bool better_candidate(const CellScore& a, const CellScore& b) {
  if (a.value != b.value) return a.value > b.value;
  const double ta = std::abs(a.params.theta);
  const double tb = std::abs(b.params.theta);
  if (ta != tb) return ta < tb;
  const double da = std::abs(a.params.t) + std::abs(a.params.s);
  const double db = std::abs(b.params.t) + std::abs(b.params.s);
  if (da != db) return da < db;
  if (a.params.t != b.params.t) return a.params.t < b.params.t;
  if (a.params.s != b.params.s) return a.params.s < b.params.s;
  return a.params.theta < b.params.theta;
}

namespace {

struct Rect {
  int x0, y0, x1, y1;  // inclusive
};

Rect valid_rect(const StructureCodeImage& codes) {
  Rect r{codes.width, codes.height, -1, -1};
  std::size_t count = 0;
  for (int y = 0; y < codes.height; ++y) {
    for (int x = 0; x < codes.width; ++x) {
      if (!codes.is_valid(x, y)) continue;
      r.x0 = std::min(r.x0, x);
      r.y0 = std::min(r.y0, y);
      r.x1 = std::max(r.x1, x);
      r.y1 = std::max(r.y1, y);
      ++count;
    }
  }
  if (count == 0) return r;
  const auto area = static_cast<std::size_t>(r.x1 - r.x0 + 1) * static_cast<std::size_t>(r.y1 - r.y0 + 1);
  if (area != count) throw InputError("structure code mask is not a rectangle");
  return r;
}

// Summed-area table with a zero guard row/column.
template <class T>
class AreaSums {
 public:
  AreaSums(const std::vector<T>& values, int w, int h) : w_(w + 1), sums_(static_cast<std::size_t>(w + 1) * (h + 1), T{}) {
    for (int y = 0; y < h; ++y) {
      T row = T{};
      for (int x = 0; x < w; ++x) {
        row += values[static_cast<std::size_t>(y) * w + x];
        sums_[idx(x + 1, y + 1)] = sums_[idx(x + 1, y)] + row;
      }
    }
  }

  // Inclusive rectangle in table coordinates.
  T sum(int x0, int y0, int x1, int y1) const {
    return sums_[idx(x1 + 1, y1 + 1)] - sums_[idx(x0, y1 + 1)] - sums_[idx(x1 + 1, y0)] + sums_[idx(x0, y0)];
  }

 private:
  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * w_ + x; }
  int w_;
  std::vector<T> sums_;
};

struct RefPixel {
  int x;
  int y;
  double a;
};

// Moving-image structure values with per-row prefix sums of b and b^2.
struct MovingTables {
  int width = 0;
  std::vector<double> b;
  std::vector<double> prefix_b;   // (width + 1) per row
  std::vector<double> prefix_bb;  // (width + 1) per row

  double row_sum(const std::vector<double>& prefix, int row, int x0, int x1) const {
    const std::size_t base = static_cast<std::size_t>(row) * (width + 1);
    return prefix[base + x1 + 1] - prefix[base + x0];
  }
};

struct Correction {
  int x;
  double delta;  // splat count - 1
};

// Scores all (t, s) cells for one angle.
//
// Reference pixels are splatted onto the moving grid at their rotated nearest
// position u. For a translation (t, s) the sample of pixel x is u(x) - (t, s),
// so the overlap is the set of u inside the moving valid rectangle shifted by
// (t, s). Reference-only sums come from area tables. Along a box row the splat
// count is 1 on an occupied span except at sparse holes and doubles, so the
// sums of b and b^2 are moving-row prefix differences plus corrections; only
// the a*b sum needs a full dot product.
void score_angle(const std::vector<RefPixel>& ref, int width, int height, const Rect& moving_rect,
                 const MovingTables& moving, double theta, const std::vector<int>& t_values,
                 const std::vector<int>& s_values, std::int64_t min_count, CellScore* out) {
  const auto [c, s] = cos_sin_degrees(theta);

  std::vector<GridIndex> u(ref.size());
  int ux0 = std::numeric_limits<int>::max(), uy0 = ux0;
  int ux1 = std::numeric_limits<int>::min(), uy1 = ux1;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    u[k] = rotated_nearest(ref[k].x, ref[k].y, c, s, width, height);
    ux0 = std::min(ux0, u[k].x);
    ux1 = std::max(ux1, u[k].x);
    uy0 = std::min(uy0, u[k].y);
    uy1 = std::max(uy1, u[k].y);
  }
  const int bw = ux1 - ux0 + 1;
  const int bh = uy1 - uy0 + 1;
  const std::size_t box = static_cast<std::size_t>(bw) * bh;

  std::vector<std::int64_t> count(box, 0);
  std::vector<double> sum_a(box, 0.0);
  std::vector<double> sum_aa(box, 0.0);
  for (std::size_t k = 0; k < ref.size(); ++k) {
    const std::size_t i = static_cast<std::size_t>(u[k].y - uy0) * bw + (u[k].x - ux0);
    count[i] += 1;
    sum_a[i] += ref[k].a;
    sum_aa[i] += ref[k].a * ref[k].a;
  }

  // Occupied span of each box row and the cells inside it whose count is not 1.
  std::vector<int> first(static_cast<std::size_t>(bh), bw);
  std::vector<int> last(static_cast<std::size_t>(bh), -1);
  std::vector<std::vector<Correction>> corrections(static_cast<std::size_t>(bh));
  for (int r = 0; r < bh; ++r) {
    const std::int64_t* row = count.data() + static_cast<std::size_t>(r) * bw;
    for (int x = 0; x < bw; ++x) {
      if (row[x] == 0) continue;
      first[r] = std::min(first[r], x);
      last[r] = x;
    }
    for (int x = first[r]; x <= last[r]; ++x)
      if (row[x] != 1) corrections[r].push_back({x, static_cast<double>(row[x] - 1)});
  }

  const AreaSums<std::int64_t> n_table(count, bw, bh);
  const AreaSums<double> a_table(sum_a, bw, bh);
  const AreaSums<double> aa_table(sum_aa, bw, bh);

  const std::size_t nt = t_values.size();
  for (std::size_t si = 0; si < s_values.size(); ++si) {
    const int sy = s_values[si];
    for (std::size_t ti = 0; ti < nt; ++ti) {
      const int tx = t_values[ti];
      CellScore& cell = out[si * nt + ti];
      cell.params = RigidParams{static_cast<double>(tx), static_cast<double>(sy), theta};
      cell.status = CorrelationStatus::empty_overlap;
      cell.value = 0.0;

      // Overlap rectangle in box coordinates.
      const int x0 = std::max(moving_rect.x0 + tx, ux0) - ux0;
      const int x1 = std::min(moving_rect.x1 + tx, ux1) - ux0;
      const int y0 = std::max(moving_rect.y0 + sy, uy0) - uy0;
      const int y1 = std::min(moving_rect.y1 + sy, uy1) - uy0;
      if (x0 > x1 || y0 > y1) continue;
      const std::int64_t n = n_table.sum(x0, y0, x1, y1);
      if (n <= 0 || n < min_count) continue;

      CorrelationSums sums;
      sums.n = static_cast<double>(n);
      sums.sa = a_table.sum(x0, y0, x1, y1);
      sums.saa = aa_table.sum(x0, y0, x1, y1);

      // Box column x on box row r maps to moving (x + ux0 - tx, r + uy0 - sy).
      const int dx = ux0 - tx;
      double sb = 0.0, sbb = 0.0;
      double sab0 = 0.0, sab1 = 0.0, sab2 = 0.0, sab3 = 0.0;
      for (int r = y0; r <= y1; ++r) {
        const int xa = std::max(x0, first[r]);
        const int xb = std::min(x1, last[r]);
        if (xa > xb) continue;
        const int mrow = r + uy0 - sy;
        sb += moving.row_sum(moving.prefix_b, mrow, xa + dx, xb + dx);
        sbb += moving.row_sum(moving.prefix_bb, mrow, xa + dx, xb + dx);
        const double* brow = moving.b.data() + static_cast<std::size_t>(mrow) * width;
        for (const Correction& k : corrections[r]) {
          if (k.x < xa || k.x > xb) continue;
          const double bv = brow[k.x + dx];
          sb += k.delta * bv;
          sbb += k.delta * bv * bv;
        }
        const double* ap = sum_a.data() + static_cast<std::size_t>(r) * bw + xa;
        const double* bp = brow + xa + dx;
        const int len = xb - xa + 1;
        int k = 0;
        for (; k + 3 < len; k += 4) {
          sab0 += ap[k] * bp[k];
          sab1 += ap[k + 1] * bp[k + 1];
          sab2 += ap[k + 2] * bp[k + 2];
          sab3 += ap[k + 3] * bp[k + 3];
        }
        for (; k < len; ++k) sab0 += ap[k] * bp[k];
      }
      sums.sb = sb;
      sums.sbb = sbb;
      sums.sab = (sab0 + sab1) + (sab2 + sab3);
      const CorrelationValue result = finish_correlation(sums);
      cell.status = result.status;
      cell.value = result.value;
    }
  }
}

bool codes_degenerate(const StructureCodeImage& codes) {
  bool seen = false;
  std::uint64_t first = 0;
  for (std::size_t i = 0; i < codes.codes.size(); ++i) {
    if (!codes.valid[i]) continue;
    if (!seen) {
      first = codes.codes[i];
      seen = true;
    } else if (codes.codes[i] != first) {
      return false;
    }
  }
  return true;
}

void check_inputs(const GrayImage& reference, const GrayImage& moving, const SearchSpec& spec) {
  if (reference.width != moving.width || reference.height != moving.height) {
    throw InputError("reference and moving images differ in size");
  }
  const int side = neighborhood_side(spec.backend);
  if (reference.width < side + 2 || reference.height < side + 2) {
    throw InputError("images are too small for the " + std::string(to_string(spec.backend)) +
                     " neighborhood");
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

RegistrationErrorKind kind_of(const GridOutcome& g) {
  return g.zero_variance_cells > 0 ? RegistrationErrorKind::zero_variance
                                   : RegistrationErrorKind::empty_overlap;
}

RegistrationResult error_result(RegistrationErrorKind kind) {
  RegistrationResult r;
  r.status = RegistrationStatus::error;
  r.error_kind = kind;
  r.score = r.mi_after = r.cc_after = std::numeric_limits<double>::quiet_NaN();
  return r;
}

// Fills score and the after-registration metrics from a successful grid.
RegistrationResult finish(const GridOutcome& g, const GrayImage& reference, const GrayImage& moving,
                          const StructureCodeImage& ref_codes, const StructureCodeImage& mov_codes,
                          const SearchSpec& spec) {
  if (!g.best) return error_result(kind_of(g));
  RegistrationResult result;
  result.params = g.best->params;
  const CorrelationValue exact = try_correlation_coefficient(ref_codes, mov_codes, result.params);
  result.score = exact.status == CorrelationStatus::ok ? exact.value : g.best->value;
  const WarpResult registered = warp(moving, result.params, Interpolation::bilinear);
  try {
    const PairMetrics m = evaluate_pair(reference, registered.image, registered.mask, spec.bins);
    result.mi_after = m.mi;
    result.cc_after = m.cc;
  } catch (const MetricError& e) {
    RegistrationResult failed = error_result(e.kind() == MetricErrorKind::zero_variance
                                                 ? RegistrationErrorKind::zero_variance
                                                 : RegistrationErrorKind::empty_overlap);
    failed.params = result.params;
    failed.score = result.score;
    return failed;
  }
  result.status = RegistrationStatus::ok;
  return result;
}

}  // namespace

GridOutcome search_grid(const StructureCodeImage& reference, const StructureCodeImage& moving,
                        const SearchWindow& window, double min_overlap_fraction, int workers,
                        bool keep_cells) {
  if (reference.width != moving.width || reference.height != moving.height) {
    throw DimensionError("search_grid: structure images differ in shape");
  }
  GridOutcome outcome;
  const int w = reference.width;
  const int h = reference.height;

  // Pearson correlation ignores constant offsets; centering on the global
  // means keeps the running sums well conditioned.
  double mean_a = 0.0;
  std::size_t count_a = 0;
  for (std::size_t i = 0; i < reference.codes.size(); ++i) {
    if (!reference.valid[i]) continue;
    mean_a += static_cast<double>(reference.codes[i]);
    ++count_a;
  }
  if (count_a > 0) mean_a /= static_cast<double>(count_a);

  std::vector<RefPixel> ref;
  ref.reserve(count_a);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (reference.is_valid(x, y))
        ref.push_back({x, y, static_cast<double>(reference.code(x, y)) - mean_a});

  const Rect rect = valid_rect(moving);
  if (ref.empty() || rect.x1 < rect.x0 || window.cell_count() == 0) {
    outcome.empty_cells = window.cell_count();
    return outcome;
  }
  const auto min_count = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(min_overlap_fraction * static_cast<double>(ref.size()))));

  double mean_b = 0.0;
  std::size_t count_b = 0;
  for (std::size_t i = 0; i < moving.codes.size(); ++i) {
    if (!moving.valid[i]) continue;
    mean_b += static_cast<double>(moving.codes[i]);
    ++count_b;
  }
  mean_b /= static_cast<double>(count_b);

  MovingTables tables;
  tables.width = w;
  tables.b.assign(moving.codes.size(), 0.0);
  tables.prefix_b.assign(static_cast<std::size_t>(w + 1) * h, 0.0);
  tables.prefix_bb.assign(static_cast<std::size_t>(w + 1) * h, 0.0);
  for (int y = 0; y < h; ++y) {
    double run_b = 0.0;
    double run_bb = 0.0;
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      // Only the valid rectangle is ever summed; outside it b stays 0.
      const double v = moving.valid[i] ? static_cast<double>(moving.codes[i]) - mean_b : 0.0;
      tables.b[i] = v;
      run_b += v;
      run_bb += v * v;
      tables.prefix_b[static_cast<std::size_t>(y) * (w + 1) + x + 1] = run_b;
      tables.prefix_bb[static_cast<std::size_t>(y) * (w + 1) + x + 1] = run_bb;
    }
  }

  const std::size_t per_angle = window.t_values.size() * window.s_values.size();
  std::vector<CellScore> cells(window.cell_count());
  detail::parallel_for(0, static_cast<int>(window.theta_values.size()), workers, [&](int ai) {
    score_angle(ref, w, h, rect, tables, window.theta_values[ai], window.t_values, window.s_values,
                min_count, cells.data() + static_cast<std::size_t>(ai) * per_angle);
  });

  for (const CellScore& cell : cells) {
    switch (cell.status) {
      case CorrelationStatus::ok:
        ++outcome.ok_cells;
        if (!outcome.best || better_candidate(cell, *outcome.best)) outcome.best = cell;
        break;
      case CorrelationStatus::empty_overlap:
        ++outcome.empty_cells;
        break;
      case CorrelationStatus::zero_variance:
        ++outcome.zero_variance_cells;
        break;
    }
  }
  if (keep_cells) outcome.cells = std::move(cells);
  return outcome;
}

PairMetrics evaluate_pair(const GrayImage& reference, const GrayImage& registered,
                          const OverlapMask& mask, int bins) {
  return {mutual_information(reference, registered, mask, bins),
          intensity_correlation(reference, registered, mask)};
}

RegistrationResult exhaustive_search(const GrayImage& reference, const GrayImage& moving,
                                     const SearchSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  spec.validate();
  check_inputs(reference, moving, spec);

  const StructureCodeImage ref_codes =
      encode_image(reference, spec.backend, spec.base, spec.ordering, spec.workers);
  const StructureCodeImage mov_codes =
      encode_image(moving, spec.backend, spec.base, spec.ordering, spec.workers);

  RegistrationResult result;
  if (codes_degenerate(ref_codes) || codes_degenerate(mov_codes)) {
    result = error_result(RegistrationErrorKind::degenerate_input);
  } else {
    const GridOutcome g = search_grid(ref_codes, mov_codes, make_window(spec),
                                      spec.min_overlap_fraction, spec.workers);
    result = finish(g, reference, moving, ref_codes, mov_codes, spec);
  }
  result.elapsed_seconds = seconds_since(start);
  return result;
}

namespace {

// Values of `range` coarsened by `scale`, covering the full range.
std::vector<int> coarse_values(const IntRange& range, int scale) {
  const int lo = static_cast<int>(std::floor(static_cast<double>(range.lo) / scale));
  const int hi = static_cast<int>(std::ceil(static_cast<double>(range.hi) / scale));
  return IntRange{lo, hi, std::max(1, range.step / scale)}.values();
}

// Candidates within +-2 steps of `center` at a pyramid level. At full
// resolution they are snapped to the full-resolution grid.
std::vector<int> refine_values(const IntRange& range, int center, int scale) {
  if (scale == 1) {
    const int c = std::clamp(center, range.lo, range.hi);
    std::vector<int> out;
    for (const int v : range.values())
      if (std::abs(v - c) <= 2 * range.step) out.push_back(v);
    return out;
  }
  const int step = std::max(1, range.step / scale);
  const int lo = static_cast<int>(std::floor(static_cast<double>(range.lo) / scale));
  const int hi = static_cast<int>(std::ceil(static_cast<double>(range.hi) / scale));
  const int c = std::clamp(center, lo, hi);
  std::vector<int> out;
  for (int v = c - 2 * step; v <= c + 2 * step; v += step)
    if (v >= lo && v <= hi) out.push_back(v);
  return out;
}

// Half resolution pins the angle down about half as well as the
// translation, so the angle window is +-4 steps.
std::vector<double> refine_angles(const AngleRange& range, double center) {
  const double c = std::clamp(center, range.lo, range.hi);
  std::vector<double> out;
  for (const double v : range.values())
    if (std::abs(v - c) <= 4.0 * range.step + 1e-9) out.push_back(v);
  return out;
}

}  // namespace

RegistrationResult pyramid_search(const GrayImage& reference, const GrayImage& moving,
                                  const SearchSpec& spec) {
  if (spec.pyramid_levels <= 1) return exhaustive_search(reference, moving, spec);
  const auto start = std::chrono::steady_clock::now();
  spec.validate();
  check_inputs(reference, moving, spec);

  const int levels = spec.pyramid_levels;
  std::vector<GrayImage> refs{reference};
  std::vector<GrayImage> movs{moving};
  const int side = neighborhood_side(spec.backend);
  for (int l = 1; l < levels; ++l) {
    if (refs.back().width / 2 < side + 2 || refs.back().height / 2 < side + 2) {
      throw InputError("image too small for " + std::to_string(levels) + " pyramid levels");
    }
    refs.push_back(downsample_half(refs.back()));
    movs.push_back(downsample_half(movs.back()));
  }

  std::optional<CellScore> best;
  RegistrationResult result;
  for (int level = levels - 1; level >= 0; --level) {
    const int scale = 1 << level;
    SearchWindow window;
    if (!best) {
      window = {coarse_values(spec.t_range, scale), coarse_values(spec.s_range, scale),
                spec.theta_range.values()};
    } else {
      window = {refine_values(spec.t_range, static_cast<int>(best->params.t) * 2, scale),
                refine_values(spec.s_range, static_cast<int>(best->params.s) * 2, scale),
                refine_angles(spec.theta_range, best->params.theta)};
    }
    const StructureCodeImage ref_codes =
        encode_image(refs[level], spec.backend, spec.base, spec.ordering, spec.workers);
    const StructureCodeImage mov_codes =
        encode_image(movs[level], spec.backend, spec.base, spec.ordering, spec.workers);
    if (codes_degenerate(ref_codes) || codes_degenerate(mov_codes)) {
      result = error_result(RegistrationErrorKind::degenerate_input);
      break;
    }
    const GridOutcome g =
        search_grid(ref_codes, mov_codes, window, spec.min_overlap_fraction, spec.workers);
    if (!g.best || level == 0) {
      result = finish(g, refs[level], movs[level], ref_codes, mov_codes, spec);
      break;
    }
    best = g.best;
  }
  result.elapsed_seconds = seconds_since(start);
  return result;
}

RegistrationResult register_images(const GrayImage& reference, const GrayImage& moving,
                                   const SearchSpec& spec) {
  return spec.pyramid_levels > 1 ? pyramid_search(reference, moving, spec)
                                 : exhaustive_search(reference, moving, spec);
}

}  // namespace walshreg
