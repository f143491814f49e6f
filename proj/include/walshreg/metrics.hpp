#pragma once

#include "walshreg/errors.hpp"
#include "walshreg/geometry.hpp"
#include "walshreg/structure_codes.hpp"

#include <cstdint>
#include <vector>

namespace walshreg {

/// Counts of (a, b) intensity bin pairs over a mask. Bin of an 8-bit value v
/// is v * bins / 256.
struct JointHistogram {
  int bins = 0;
  std::vector<std::uint64_t> counts;  // bins x bins, row = bin of a
  std::vector<std::uint64_t> marginal_a;
  std::vector<std::uint64_t> marginal_b;
  std::uint64_t total = 0;

  std::uint64_t at(int bin_a, int bin_b) const {
    return counts[static_cast<std::size_t>(bin_a) * bins + bin_b];
  }
};

JointHistogram joint_histogram(const GrayImage& a, const GrayImage& b, const OverlapMask& mask,
                               int bins);

/// I(X;Y) in bits over the masked pixels. Throws MetricError(empty_overlap)
/// when the mask is empty.
double mutual_information(const GrayImage& a, const GrayImage& b, const OverlapMask& mask,
                          int bins = 256);

/// Shannon entropy in bits of the binned intensities under the mask.
double entropy(const GrayImage& a, const OverlapMask& mask, int bins = 256);

/// Pearson correlation of intensities under the mask.
double intensity_correlation(const GrayImage& a, const GrayImage& b, const OverlapMask& mask);

/// Running sums for a Pearson coefficient.
struct CorrelationSums {
  double n = 0.0;
  double sa = 0.0;
  double sb = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  double sab = 0.0;

  void add(double a, double b) {
    n += 1.0;
    sa += a;
    sb += b;
    saa += a * a;
    sbb += b * b;
    sab += a * b;
  }
};

enum class CorrelationStatus { ok, empty_overlap, zero_variance };

struct CorrelationValue {
  CorrelationStatus status = CorrelationStatus::ok;
  double value = 0.0;
};

/// Pearson coefficient from sums, clamped to [-1, 1]. A side whose centered
/// sum of squares is at or below 1e-12 of its raw sum of squares counts as
/// zero variance.
CorrelationValue finish_correlation(const CorrelationSums& sums);

/// Correlation of structure values between s1 (reference grid) and s2
/// sampled under `params`. Only pixels valid in s1 whose sample in s2 is in
/// bounds and valid take part. Throws MetricError on empty overlap or zero
/// variance.
double correlation_coefficient(const StructureCodeImage& s1, const StructureCodeImage& s2,
                               const RigidParams& params);

/// Same as correlation_coefficient but reports the failure instead of throwing,
/// together with the overlap size.
CorrelationValue try_correlation_coefficient(const StructureCodeImage& s1,
                                             const StructureCodeImage& s2,
                                             const RigidParams& params,
                                             std::size_t* overlap = nullptr);

}  // namespace walshreg
