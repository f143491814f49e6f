#include "walshreg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace walshreg {

std::string_view to_string(MetricErrorKind kind) {
  switch (kind) {
    case MetricErrorKind::empty_overlap: return "empty_overlap";
    case MetricErrorKind::zero_variance: return "zero_variance";
  }
  return "?";
}

namespace {

void check_shapes(const GrayImage& a, const GrayImage& b, const OverlapMask& mask) {
  if (a.width != b.width || a.height != b.height || mask.width != a.width ||
      mask.height != a.height) {
    throw DimensionError("metric inputs differ in shape");
  }
}

void check_bins(int bins) {
  if (bins < 2 || bins > 65536) {
    throw ParameterError("bin count must be in [2, 65536], got " + std::to_string(bins));
  }
}

inline int bin_of(std::uint8_t v, int bins) { return static_cast<int>(v) * bins / 256; }

std::vector<std::uint64_t> marginal_histogram(const GrayImage& a, const OverlapMask& mask,
                                              int bins, std::uint64_t& total) {
  std::vector<std::uint64_t> h(static_cast<std::size_t>(bins), 0);
  total = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    if (!mask.inside[i]) continue;
    ++h[bin_of(a.pixels[i], bins)];
    ++total;
  }
  return h;
}

}  // namespace

JointHistogram joint_histogram(const GrayImage& a, const GrayImage& b, const OverlapMask& mask,
                               int bins) {
  check_shapes(a, b, mask);
  check_bins(bins);
  JointHistogram h;
  h.bins = bins;
  h.counts.assign(static_cast<std::size_t>(bins) * bins, 0);
  h.marginal_a.assign(static_cast<std::size_t>(bins), 0);
  h.marginal_b.assign(static_cast<std::size_t>(bins), 0);
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    if (!mask.inside[i]) continue;
    const int ba = bin_of(a.pixels[i], bins);
    const int bb = bin_of(b.pixels[i], bins);
    ++h.counts[static_cast<std::size_t>(ba) * bins + bb];
    ++h.marginal_a[ba];
    ++h.marginal_b[bb];
    ++h.total;
  }
  return h;
}

double mutual_information(const GrayImage& a, const GrayImage& b, const OverlapMask& mask,
                          int bins) {
  const JointHistogram h = joint_histogram(a, b, mask, bins);
  if (h.total == 0) throw MetricError(MetricErrorKind::empty_overlap, "mutual information: empty overlap");
  const double n = static_cast<double>(h.total);
  double mi = 0.0;
  for (int i = 0; i < bins; ++i) {
    if (h.marginal_a[i] == 0) continue;
    for (int j = 0; j < bins; ++j) {
      const std::uint64_t c = h.at(i, j);
      if (c == 0) continue;
      const double pxy = static_cast<double>(c) / n;
      const double ratio = static_cast<double>(c) * n /
                           (static_cast<double>(h.marginal_a[i]) * static_cast<double>(h.marginal_b[j]));
      mi += pxy * std::log2(ratio);
    }
  }
  return std::max(mi, 0.0);
}

double entropy(const GrayImage& a, const OverlapMask& mask, int bins) {
  if (a.width != mask.width || a.height != mask.height) throw DimensionError("entropy: mask shape differs");
  check_bins(bins);
  std::uint64_t total = 0;
  const auto h = marginal_histogram(a, mask, bins, total);
  if (total == 0) throw MetricError(MetricErrorKind::empty_overlap, "entropy: empty mask");
  const double n = static_cast<double>(total);
  double e = 0.0;
  for (const std::uint64_t c : h) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    e -= p * std::log2(p);
  }
  return std::max(e, 0.0);
}

CorrelationValue finish_correlation(const CorrelationSums& sums) {
  if (sums.n <= 0.0) return {CorrelationStatus::empty_overlap, 0.0};
  const double va = sums.saa - sums.sa * sums.sa / sums.n;
  const double vb = sums.sbb - sums.sb * sums.sb / sums.n;
  if (va <= 1e-12 * sums.saa || vb <= 1e-12 * sums.sbb) return {CorrelationStatus::zero_variance, 0.0};
  const double cov = sums.sab - sums.sa * sums.sb / sums.n;
  return {CorrelationStatus::ok, std::clamp(cov / std::sqrt(va * vb), -1.0, 1.0)};
}

double intensity_correlation(const GrayImage& a, const GrayImage& b, const OverlapMask& mask) {
  check_shapes(a, b, mask);
  CorrelationSums sums;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    if (mask.inside[i]) sums.add(a.pixels[i], b.pixels[i]);
  }
  const CorrelationValue r = finish_correlation(sums);
  if (r.status == CorrelationStatus::empty_overlap)
    throw MetricError(MetricErrorKind::empty_overlap, "intensity correlation: empty overlap");
  if (r.status == CorrelationStatus::zero_variance)
    throw MetricError(MetricErrorKind::zero_variance, "intensity correlation: zero variance");
  return r.value;
}

CorrelationValue try_correlation_coefficient(const StructureCodeImage& s1,
                                             const StructureCodeImage& s2,
                                             const RigidParams& params, std::size_t* overlap) {
  if (s1.width != s2.width || s1.height != s2.height) {
    throw DimensionError("correlation_coefficient: structure images differ in shape");
  }
  const int w = s1.width;
  const int h = s1.height;
  const auto [c, s] = cos_sin_degrees(params.theta);
  const int ti = static_cast<int>(std::lround(params.t));
  const int si = static_cast<int>(std::lround(params.s));
  CorrelationSums sums;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!s1.is_valid(x, y)) continue;
      const GridIndex g = rotated_nearest(x, y, c, s, w, h);
      const int sx = g.x - ti;
      const int sy = g.y - si;
      if (sx < 0 || sy < 0 || sx >= w || sy >= h || !s2.is_valid(sx, sy)) continue;
      sums.add(static_cast<double>(s1.code(x, y)), static_cast<double>(s2.code(sx, sy)));
    }
  }
  if (overlap != nullptr) *overlap = static_cast<std::size_t>(sums.n);
  return finish_correlation(sums);
}

double correlation_coefficient(const StructureCodeImage& s1, const StructureCodeImage& s2,
                               const RigidParams& params) {
  const CorrelationValue r = try_correlation_coefficient(s1, s2, params);
  if (r.status == CorrelationStatus::empty_overlap)
    throw MetricError(MetricErrorKind::empty_overlap, "structure correlation: empty overlap");
  if (r.status == CorrelationStatus::zero_variance)
    throw MetricError(MetricErrorKind::zero_variance, "structure correlation: zero variance");
  return r.value;
}

}  // namespace walshreg
