#pragma once

#include "walshreg/geometry.hpp"
#include "walshreg/metrics.hpp"
#include "walshreg/structure_codes.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace walshreg {

/// Closed integer interval sampled every `step`.
struct IntRange {
  int lo = -25;
  int hi = 25;
  int step = 1;

  std::vector<int> values() const;
};

/// Closed angle interval in degrees sampled every `step`.
struct AngleRange {
  double lo = -25.0;
  double hi = 25.0;
  double step = 1.0;

  std::vector<double> values() const;
};

struct SearchSpec {
  IntRange t_range;
  IntRange s_range;
  AngleRange theta_range;
  int pyramid_levels = 1;
  Backend backend = Backend::fwht4;
  int base = 10;
  DigitOrdering ordering = default_ordering(Backend::fwht4);
  int workers = 1;
  int bins = 256;
  /// Grid cells whose overlap covers less than this fraction of the valid
  /// reference pixels are skipped as erroring.
  double min_overlap_fraction = 0.05;

  /// Throws ParameterError on empty ranges, non-positive steps or a digit
  /// ordering that does not fit the backend.
  void validate() const;
};

enum class RegistrationStatus { ok, error };
enum class RegistrationErrorKind { empty_overlap, zero_variance, degenerate_input };

std::string_view to_string(RegistrationStatus status);
std::string_view to_string(RegistrationErrorKind kind);

struct RegistrationResult {
  RigidParams params;
  double score = 0.0;
  double mi_after = 0.0;
  double cc_after = 0.0;
  double elapsed_seconds = 0.0;
  RegistrationStatus status = RegistrationStatus::error;
  std::optional<RegistrationErrorKind> error_kind;

  bool ok() const { return status == RegistrationStatus::ok; }
};

/// Explicit lists of candidate translations and angles.
struct SearchWindow {
  std::vector<int> t_values;
  std::vector<int> s_values;
  std::vector<double> theta_values;

  std::size_t cell_count() const { return t_values.size() * s_values.size() * theta_values.size(); }
};

SearchWindow make_window(const SearchSpec& spec);

struct CellScore {
  RigidParams params;
  CorrelationStatus status = CorrelationStatus::empty_overlap;
  double value = 0.0;
};

struct GridOutcome {
  std::optional<CellScore> best;
  std::size_t ok_cells = 0;
  std::size_t empty_cells = 0;
  std::size_t zero_variance_cells = 0;
  std::vector<CellScore> cells;  // filled only when requested
};

/// True when `a` should win over `b`: higher score, then smaller |theta|,
/// then smaller |t| + |s|, then lexicographically smaller (t, s, theta).
bool better_candidate(const CellScore& a, const CellScore& b);

/// Scores every cell of `window` with the structure-code correlation and
/// reduces to the best one. Results do not depend on `workers`.
GridOutcome search_grid(const StructureCodeImage& reference, const StructureCodeImage& moving,
                        const SearchWindow& window, double min_overlap_fraction, int workers,
                        bool keep_cells = false);

struct PairMetrics {
  double mi = 0.0;
  double cc = 0.0;
};

/// MI (bits) and intensity correlation of two same-sized images over a mask.
PairMetrics evaluate_pair(const GrayImage& reference, const GrayImage& registered,
                          const OverlapMask& mask, int bins = 256);

/// Full-resolution exhaustive search over the grid in `spec`.
RegistrationResult exhaustive_search(const GrayImage& reference, const GrayImage& moving,
                                     const SearchSpec& spec);

/// Coarse-to-fine search: exhaustive on the coarsest level, then a window of
/// +-2 translation steps and +-4 angle steps around the upsampled optimum on
/// each finer level. One level is
/// the same as exhaustive_search.
RegistrationResult pyramid_search(const GrayImage& reference, const GrayImage& moving,
                                  const SearchSpec& spec);

/// Dispatches on spec.pyramid_levels.
RegistrationResult register_images(const GrayImage& reference, const GrayImage& moving,
                                   const SearchSpec& spec);

}  // namespace walshreg
