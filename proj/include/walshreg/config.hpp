#pragma once

#include "walshreg/geometry.hpp"
#include "walshreg/registration.hpp"
#include "walshreg/structure_codes.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace walshreg {

/// Everything a CLI run needs. Keys of the config file match the long flag
/// names (without the leading dashes):
///
///   backend      walsh3 | fwht4 | direct4
///   base         N >= 1
///   ordering     IA | IB | IIA | IIB | rowmajor
///   t-range      lo:hi          (pixels)
///   s-range      lo:hi          (pixels)
///   theta-range  lo:hi          (degrees)
///   steps        t:s:theta      (or a single value for all three)
///   pyramid      levels >= 1
///   bins         N >= 2
///   interp       nearest | bilinear
///   spacing      mm per pixel
///   workers      N >= 1
///   seed         synthetic suite seed
///   out          output directory
struct RunConfig {
  Backend backend = Backend::fwht4;
  int base = 10;
  std::optional<OrderingTag> ordering;  // backend default when unset
  IntRange t_range;
  IntRange s_range;
  AngleRange theta_range;
  int pyramid = 1;
  int bins = 256;
  Interpolation interp = Interpolation::bilinear;
  double spacing = 1.0;
  int workers = 1;
  std::uint64_t seed = 1;
  std::filesystem::path out = ".";

  DigitOrdering digit_ordering() const;

  /// Throws ConfigError describing the first offending setting.
  void validate() const;

  SearchSpec search_spec() const;
};

/// key=value lines; blank lines and '#' comments are ignored. Throws
/// ConfigError with the line number on malformed lines.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text);

/// Applies one setting. Throws ConfigError on unknown keys or bad values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

std::string_view to_string(Interpolation interp);

}  // namespace walshreg
