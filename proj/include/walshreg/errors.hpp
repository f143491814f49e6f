#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace walshreg {

// Shapes of patches, blocks, vectors or images disagree with what an
// operation expects.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scalar parameter is outside its admissible range (base < 1, k < 1, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A digit sequence cannot be packed into a structure code.
class EncodingError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Image content or geometry is unusable (too small, mismatched shapes).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class MetricErrorKind { empty_overlap, zero_variance };

std::string_view to_string(MetricErrorKind kind);

class MetricError : public std::runtime_error {
 public:
  MetricError(MetricErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  MetricErrorKind kind() const noexcept { return kind_; }

 private:
  MetricErrorKind kind_;
};

}  // namespace walshreg
