#pragma once

#include "walshreg/io.hpp"
#include "walshreg/registration.hpp"
#include "walshreg/synthetic.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace walshreg {

/// One registration of a perturbed copy. Recovered parameters, residuals and
/// metrics are empty when the registration failed.
struct BenchmarkRow {
  int index = 0;
  Perturbation perturbation;
  Backend backend = Backend::fwht4;
  std::optional<RigidParams> recovered;
  std::optional<AlignmentResidual> residual;
  std::optional<double> mi_after;
  std::optional<double> cc_after;
  double elapsed_seconds = 0.0;
  RegistrationStatus status = RegistrationStatus::error;
  std::optional<RegistrationErrorKind> error_kind;
};

/// Warps a copy of `reference` by each perturbation (mm converted with
/// reference.spacing), registers it back with every backend in `backends` and
/// records one row per (perturbation, backend). Errors are captured per row.
std::vector<BenchmarkRow> run_registration_benchmark(const GrayImage& reference,
                                                     std::span<const Perturbation> perturbations,
                                                     std::span<const Backend> backends,
                                                     const SearchSpec& spec,
                                                     Interpolation interp = Interpolation::bilinear);

/// Fastest of `repeats` wall-clock runs of encode_image.
double time_encoding(const GrayImage& img, Backend backend, int base, int repeats = 3, int workers = 1);

struct EncodingTiming {
  double walsh3_seconds = 0.0;
  double fwht4_seconds = 0.0;
  double direct4_seconds = 0.0;

  /// Naive 4x4 matrix products over the fast butterfly.
  double direct_over_fast() const { return direct4_seconds / fwht4_seconds; }
};

EncodingTiming time_encoders(const GrayImage& img, int base, int repeats = 3, int workers = 1);

/// Columns: index,x_mm,y_mm,angle_deg,backend,t,s,theta,residual_px,
/// residual_deg,mi_after,cc_after,elapsed_seconds,status,error
CsvTable benchmark_table(std::span<const BenchmarkRow> rows);

/// Columns: quantity,value. Mean registration time per backend, the
/// walsh3/fwht4 registration time ratio, encoding times and the
/// direct4/fwht4 encoding ratio.
CsvTable summary_table(std::span<const BenchmarkRow> rows, const EncodingTiming& timing);

/// Shortest round-trip decimal form, used for every CSV number.
std::string format_number(double v);

}  // namespace walshreg
