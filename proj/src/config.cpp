#include "walshreg/config.hpp"

#include "walshreg/errors.hpp"
#include "walshreg/io.hpp"

#include <charconv>
#include <cmath>
#include <type_traits>

namespace walshreg {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw ConfigError(std::string(key) + ": cannot parse '" + std::string(text) + "' as a number");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ConfigError(std::string(key) + ": value must be finite");
  }
  return value;
}

template <class T>
std::pair<T, T> parse_pair(std::string_view key, std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw ConfigError(std::string(key) + ": expected lo:hi, got '" + std::string(text) + "'");
  return {parse_number<T>(key, parts[0]), parse_number<T>(key, parts[1])};
}

template <class Fn>
auto rethrow_as_config(std::string_view key, Fn&& fn) {
  try {
    return fn();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

}  // namespace

std::string_view to_string(Interpolation interp) {
  return interp == Interpolation::nearest ? "nearest" : "bilinear";
}

DigitOrdering RunConfig::digit_ordering() const {
  if (!ordering) return default_ordering(backend);
  return rethrow_as_config("ordering", [&] { return make_ordering(*ordering, neighborhood_side(backend)); });
}

void RunConfig::validate() const {
  if (!(spacing > 0.0)) throw ConfigError("spacing must be positive");
  const SearchSpec spec = search_spec();
  rethrow_as_config("config", [&] {
    spec.validate();
    return 0;
  });
}

SearchSpec RunConfig::search_spec() const {
  SearchSpec spec;
  spec.t_range = t_range;
  spec.s_range = s_range;
  spec.theta_range = theta_range;
  spec.pyramid_levels = pyramid;
  spec.backend = backend;
  spec.base = base;
  spec.ordering = digit_ordering();
  spec.workers = workers;
  spec.bins = bins;
  return spec;
}

std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  int line_no = 0;
  for (const std::string_view raw : split(text, '\n')) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "backend") {
    cfg.backend = rethrow_as_config(key, [&] { return parse_backend(value); });
  } else if (key == "base") {
    cfg.base = parse_number<int>(key, value);
  } else if (key == "ordering") {
    cfg.ordering = rethrow_as_config(key, [&] { return parse_ordering(value); });
  } else if (key == "t-range" || key == "s-range") {
    const auto [lo, hi] = parse_pair<int>(key, value);
    IntRange& r = key == "t-range" ? cfg.t_range : cfg.s_range;
    r.lo = lo;
    r.hi = hi;
  } else if (key == "theta-range") {
    const auto [lo, hi] = parse_pair<double>(key, value);
    cfg.theta_range.lo = lo;
    cfg.theta_range.hi = hi;
  } else if (key == "steps") {
    const auto parts = split(value, ':');
    if (parts.size() == 1) {
      const double v = parse_number<double>(key, parts[0]);
      if (v != std::floor(v)) throw ConfigError("steps: translation steps must be whole pixels");
      cfg.t_range.step = cfg.s_range.step = static_cast<int>(v);
      cfg.theta_range.step = v;
    } else if (parts.size() == 3) {
      cfg.t_range.step = parse_number<int>(key, parts[0]);
      cfg.s_range.step = parse_number<int>(key, parts[1]);
      cfg.theta_range.step = parse_number<double>(key, parts[2]);
    } else {
      throw ConfigError("steps: expected t:s:theta, got '" + std::string(value) + "'");
    }
  } else if (key == "pyramid") {
    cfg.pyramid = parse_number<int>(key, value);
  } else if (key == "bins") {
    cfg.bins = parse_number<int>(key, value);
  } else if (key == "interp") {
    if (value == "nearest") {
      cfg.interp = Interpolation::nearest;
    } else if (value == "bilinear") {
      cfg.interp = Interpolation::bilinear;
    } else {
      throw ConfigError("interp: expected nearest or bilinear, got '" + std::string(value) + "'");
    }
  } else if (key == "spacing") {
    cfg.spacing = parse_number<double>(key, value);
  } else if (key == "workers") {
    cfg.workers = parse_number<int>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "out") {
    if (value.empty()) throw ConfigError("out: empty path");
    cfg.out = std::filesystem::path(std::string(value));
  } else {
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  const std::string text = read_text(path);
  try {
    for (const auto& [key, value] : parse_key_values(text)) apply_setting(base, key, value);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return base;
}

}  // namespace walshreg
