#pragma once

#include "walshreg/geometry.hpp"
#include "walshreg/transforms.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace walshreg {

/// alpha_ij = a_ij / a_00 for every non-DC coefficient, in row-major order
/// of the coefficient block with (0,0) skipped.
struct NormalizedCoefficients {
  std::vector<double> values;
  double dc = 0.0;
};

NormalizedCoefficients normalize(const CoefficientBlock& g);

enum class OrderingTag { IA, IB, IIA, IIB, rowmajor };

/// Assigns non-DC coefficients to digit positions, most significant first:
/// digit k is taken from NormalizedCoefficients::values[permutation[k]].
struct DigitOrdering {
  OrderingTag tag = OrderingTag::rowmajor;
  std::vector<int> permutation;
};

/// IA/IB/IIA/IIB exist only for 3x3 neighborhoods; rowmajor fits any side.
DigitOrdering make_ordering(OrderingTag tag, int side);
OrderingTag parse_ordering(std::string_view name);
std::string_view to_string(OrderingTag tag);

/// Clamp alpha to [-1, 1] and map uniformly onto digits 0..base-1.
int quantize_digit(double alpha, int base);

/// Positional base-`base` number, digits[0] most significant. Base 1 yields 0.
std::uint64_t encode_code(std::span<const int> digits, int base);
std::vector<int> decode_code(std::uint64_t code, int base, int digit_count);

/// Coefficient backends for the per-pixel encoder. direct4 computes the same
/// 4x4 Walsh-Hadamard block as fwht4 through the naive matrix product; it is
/// the timing baseline.
enum class Backend { walsh3, fwht4, direct4 };

Backend parse_backend(std::string_view name);
std::string_view to_string(Backend backend);
int neighborhood_side(Backend backend);

/// Per-pixel unique numbers. Border pixels whose neighborhood leaves the image
/// are invalid and carry code 0.
struct StructureCodeImage {
  int width = 0;
  int height = 0;
  int base = 10;
  int digit_count = 0;
  std::vector<std::uint64_t> codes;
  std::vector<std::uint8_t> valid;

  std::uint64_t code(int x, int y) const { return codes[static_cast<std::size_t>(y) * width + x]; }
  bool is_valid(int x, int y) const { return valid[static_cast<std::size_t>(y) * width + x] != 0; }

  /// Exclusive upper bound of valid codes: base^digit_count, or 256 for the
  /// base-1 DC fallback.
  std::uint64_t code_limit() const;
};

/// Encodes every interior pixel. The 3x3 Walsh neighborhood is centered on the
/// pixel; the 4x4 neighborhoods put the pixel at offset (1,1). Base 1 has no
/// usable digits, so it stores the DC term quantized to [0, 255] instead.
StructureCodeImage encode_image(const GrayImage& img, Backend backend, int base,
                                const DigitOrdering& ordering, int workers = 1);

/// Default ordering per backend: IA for walsh3, rowmajor otherwise.
DigitOrdering default_ordering(Backend backend);

}  // namespace walshreg
