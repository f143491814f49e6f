#include "walshreg/structure_codes.hpp"

#include "parallel.hpp"
#include "walshreg/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace walshreg {

namespace {

// alpha for coeffs[1..count), written to alpha[0..count-1).
void normalize_into(const double* coeffs, int count, double* alpha) {
  const double dc = coeffs[0];
  double max_abs = 0.0;
  for (int i = 1; i < count; ++i) max_abs = std::max(max_abs, std::abs(coeffs[i]));
  if (dc == 0.0 || std::abs(dc) < 1e-12 * max_abs) {
    std::fill(alpha, alpha + count - 1, 0.0);
    return;
  }
  for (int i = 1; i < count; ++i) alpha[i - 1] = coeffs[i] / dc;
}

inline int quantize_unchecked(double alpha, int base) {
  const double a = std::clamp(alpha, -1.0, 1.0);
  const int digit = static_cast<int>(std::floor((a + 1.0) / 2.0 * base));
  return std::clamp(digit, 0, base - 1);
}

// base^digits, or 0 when it does not fit in 64 bits.
std::uint64_t checked_power(int base, int digits) {
  const auto b = static_cast<std::uint64_t>(base);
  std::uint64_t p = 1;
  for (int i = 0; i < digits; ++i) {
    if (p > std::numeric_limits<std::uint64_t>::max() / b) return 0;
    p *= b;
  }
  return p;
}

void check_permutation(const DigitOrdering& ordering, int length) {
  if (static_cast<int>(ordering.permutation.size()) != length) {
    throw ParameterError("digit ordering has " + std::to_string(ordering.permutation.size()) +
                         " entries, neighborhood needs " + std::to_string(length));
  }
  std::vector<bool> seen(static_cast<std::size_t>(length), false);
  for (const int p : ordering.permutation) {
    if (p < 0 || p >= length || seen[p]) throw ParameterError("digit ordering is not a permutation");
    seen[p] = true;
  }
}

// fwht4 encoder on exact integers. Each horizontal 4-sample run is
// transformed once and shared by the four windows that contain it. A digit
// is floor((a + dc) * base / (2 dc)); away from integer values that is
// exactly what the double-precision quantizer returns, so only values that
// land on (or next to) an integer go through quantize_unchecked.
void encode_fwht4_fast(const GrayImage& img, int base, std::span<const int> perm,
                       std::span<const int> order, int workers, StructureCodeImage& out) {
  const int w = img.width;
  const int h = img.height;
  const int nx = w - 3;
  std::vector<std::array<std::int32_t, 4>> rows(static_cast<std::size_t>(nx) * h);
  detail::parallel_for(0, h, workers, [&](int y) {
    const std::uint8_t* p = img.pixels.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < nx; ++x) {
      const std::int32_t s0 = p[x] + p[x + 1], d0 = p[x] - p[x + 1];
      const std::int32_t s1 = p[x + 2] + p[x + 3], d1 = p[x + 2] - p[x + 3];
      rows[static_cast<std::size_t>(y) * nx + x] = {s0 + s1, d0 + d1, s0 - s1, d0 - d1};
    }
  });

  // Natural-order block position of each digit, most significant first.
  std::array<int, 15> slot{};
  for (int k = 0; k < 15; ++k) {
    const int c = perm[k] + 1;
    slot[k] = order[c / 4] * 4 + order[c % 4];
  }
  const auto ubase = static_cast<std::uint64_t>(base);
  const auto mid = static_cast<std::uint64_t>(quantize_unchecked(0.0, base));

  detail::parallel_for(0, h - 3, workers, [&](int y0) {
    std::array<std::int32_t, 16> g{};
    for (int x0 = 0; x0 < nx; ++x0) {
      const auto& r0 = rows[static_cast<std::size_t>(y0) * nx + x0];
      const auto& r1 = rows[static_cast<std::size_t>(y0 + 1) * nx + x0];
      const auto& r2 = rows[static_cast<std::size_t>(y0 + 2) * nx + x0];
      const auto& r3 = rows[static_cast<std::size_t>(y0 + 3) * nx + x0];
      for (int j = 0; j < 4; ++j) {
        const std::int32_t s0 = r0[j] + r1[j], d0 = r0[j] - r1[j];
        const std::int32_t s1 = r2[j] + r3[j], d1 = r2[j] - r3[j];
        g[j] = s0 + s1;
        g[4 + j] = d0 + d1;
        g[8 + j] = s0 - s1;
        g[12 + j] = d0 - d1;
      }
      const std::int32_t dc = g[0];
      std::uint64_t code = 0;
      if (base == 1) {
        code = static_cast<std::uint64_t>(std::min(dc / 16, 255));
      } else if (dc == 0) {
        // Nonnegative samples: a zero sum means an all-zero patch.
        for (int k = 0; k < 15; ++k) code = code * ubase + mid;
      } else {
        const double scale = static_cast<double>(base) / (2.0 * dc);
        for (int k = 0; k < 15; ++k) {
          const std::int32_t a = g[slot[k]];
          if (a == 0) {  // alpha is exactly 0
            code = code * ubase + mid;
            continue;
          }
          const double v = static_cast<double>(a + dc) * scale;
          int digit = static_cast<int>(v);
          const double frac = v - digit;
          if (frac < 1e-6 || frac > 1.0 - 1e-6) {
            digit = quantize_unchecked(static_cast<double>(a) / dc, base);
          }
          code = code * ubase + static_cast<std::uint64_t>(digit);
        }
      }
      const std::size_t o = static_cast<std::size_t>(y0 + 1) * w + (x0 + 1);
      out.codes[o] = code;
      out.valid[o] = 1;
    }
  });
}

}  // namespace

NormalizedCoefficients normalize(const CoefficientBlock& g) {
  const int count = static_cast<int>(g.coeffs.size());
  if (count < 2) throw DimensionError("normalize: block needs at least one non-DC coefficient");
  NormalizedCoefficients out;
  out.dc = g.dc();
  out.values.resize(static_cast<std::size_t>(count - 1));
  normalize_into(g.coeffs.data(), count, out.values.data());
  return out;
}

DigitOrdering make_ordering(OrderingTag tag, int side) {
  if (side < 2) throw ParameterError("make_ordering: side must be >= 2");
  DigitOrdering ordering;
  ordering.tag = tag;
  // Indices into the non-DC list of a 3x3 block:
  //   a01=0 a02=1 a10=2 a11=3 a12=4 a20=5 a21=6 a22=7
  switch (tag) {
    case OrderingTag::IA:
      ordering.permutation = {0, 2, 5, 1, 3, 6, 4, 7};
      break;
    case OrderingTag::IB:
      ordering.permutation = {2, 0, 1, 5, 3, 4, 6, 7};
      break;
    case OrderingTag::IIA:
      ordering.permutation = {7, 6, 4, 3, 1, 5, 2, 0};
      break;
    case OrderingTag::IIB:
      ordering.permutation = {7, 4, 6, 3, 5, 1, 0, 2};
      break;
    case OrderingTag::rowmajor:
      ordering.permutation.resize(static_cast<std::size_t>(side * side - 1));
      for (int i = 0; i < side * side - 1; ++i) ordering.permutation[i] = i;
      return ordering;
  }
  if (side != 3) {
    throw ParameterError("ordering " + std::string(to_string(tag)) +
                         " is defined for 3x3 neighborhoods only");
  }
  return ordering;
}

OrderingTag parse_ordering(std::string_view name) {
  if (name == "IA") return OrderingTag::IA;
  if (name == "IB") return OrderingTag::IB;
  if (name == "IIA") return OrderingTag::IIA;
  if (name == "IIB") return OrderingTag::IIB;
  if (name == "rowmajor") return OrderingTag::rowmajor;
  throw ParameterError("unknown digit ordering '" + std::string(name) + "'");
}

std::string_view to_string(OrderingTag tag) {
  switch (tag) {
    case OrderingTag::IA: return "IA";
    case OrderingTag::IB: return "IB";
    case OrderingTag::IIA: return "IIA";
    case OrderingTag::IIB: return "IIB";
    case OrderingTag::rowmajor: return "rowmajor";
  }
  return "?";
}

int quantize_digit(double alpha, int base) {
  if (base < 1) throw ParameterError("quantize_digit: base must be >= 1, got " + std::to_string(base));
  if (std::isnan(alpha)) throw ParameterError("quantize_digit: alpha is NaN");
  return quantize_unchecked(alpha, base);
}

std::uint64_t encode_code(std::span<const int> digits, int base) {
  if (base < 1) throw ParameterError("encode_code: base must be >= 1, got " + std::to_string(base));
  for (const int d : digits) {
    if (d < 0 || d >= base) {
      throw EncodingError("digit " + std::to_string(d) + " is not valid in base " +
                          std::to_string(base));
    }
  }
  if (base == 1) return 0;
  if (checked_power(base, static_cast<int>(digits.size())) == 0) {
    throw EncodingError(std::to_string(digits.size()) + " base-" + std::to_string(base) +
                        " digits overflow a 64-bit code");
  }
  std::uint64_t code = 0;
  for (const int d : digits) code = code * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(d);
  return code;
}

std::vector<int> decode_code(std::uint64_t code, int base, int digit_count) {
  if (base < 2) throw ParameterError("decode_code: base must be >= 2");
  const std::uint64_t limit = checked_power(base, digit_count);
  if (limit == 0 || code >= limit) {
    throw EncodingError("code " + std::to_string(code) + " does not fit in " +
                        std::to_string(digit_count) + " base-" + std::to_string(base) + " digits");
  }
  std::vector<int> digits(static_cast<std::size_t>(digit_count));
  for (int k = digit_count - 1; k >= 0; --k) {
    digits[k] = static_cast<int>(code % static_cast<std::uint64_t>(base));
    code /= static_cast<std::uint64_t>(base);
  }
  return digits;
}

Backend parse_backend(std::string_view name) {
  if (name == "walsh3") return Backend::walsh3;
  if (name == "fwht4") return Backend::fwht4;
  if (name == "direct4") return Backend::direct4;
  throw ParameterError("unknown backend '" + std::string(name) + "'");
}

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::walsh3: return "walsh3";
    case Backend::fwht4: return "fwht4";
    case Backend::direct4: return "direct4";
  }
  return "?";
}

int neighborhood_side(Backend backend) { return backend == Backend::walsh3 ? 3 : 4; }

DigitOrdering default_ordering(Backend backend) {
  return backend == Backend::walsh3 ? make_ordering(OrderingTag::IA, 3)
                                    : make_ordering(OrderingTag::rowmajor, 4);
}

std::uint64_t StructureCodeImage::code_limit() const {
  if (base == 1) return 256;
  return checked_power(base, digit_count);
}

StructureCodeImage encode_image(const GrayImage& img, Backend backend, int base,
                                const DigitOrdering& ordering, int workers) {
  const int side = neighborhood_side(backend);
  const int count = side * side;
  if (img.width < side || img.height < side) {
    throw InputError("image " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                     " is smaller than the " + std::to_string(side) + "x" + std::to_string(side) +
                     " neighborhood");
  }
  if (base < 1) throw ParameterError("encode_image: base must be >= 1, got " + std::to_string(base));
  check_permutation(ordering, count - 1);
  if (base > 1 && checked_power(base, count - 1) == 0) {
    throw ParameterError("base " + std::to_string(base) + " with " + std::to_string(count - 1) +
                         " digits overflows a 64-bit code");
  }

  StructureCodeImage out;
  out.width = img.width;
  out.height = img.height;
  out.base = base;
  out.digit_count = count - 1;
  out.codes.assign(img.pixels.size(), 0);
  out.valid.assign(img.pixels.size(), 0);

  const WalshBasis3 basis = walsh3_basis();
  const HadamardPlan plan(4, HadamardOrdering::sequency);
  const auto order = plan.output_order();
  const Matrix direct_matrix = transpose(plan.matrix());

  // Writes the ordered coefficient block of the neighborhood whose top-left
  // corner is (x0, y0) into coeffs[0..count).
  auto transform = [&](int x0, int y0, std::array<double, 16>& coeffs) {
    switch (backend) {
      case Backend::walsh3: {
        std::array<double, 9> f{};
        std::array<double, 9> g{};
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) f[r * 3 + c] = img.at(x0 + c, y0 + r);
        detail::walsh3_apply(f, basis, g);
        std::copy(g.begin(), g.end(), coeffs.begin());
        break;
      }
      case Backend::fwht4: {
        std::array<double, 16> f{};
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c) f[r * 4 + c] = img.at(x0 + c, y0 + r);
        detail::fwht4x4_inplace(f);
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) coeffs[i * 4 + j] = f[order[i] * 4 + order[j]];
        break;
      }
      case Backend::direct4: {
        Patch patch(4);
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c) patch.at(r, c) = img.at(x0 + c, y0 + r);
        const CoefficientBlock g = direct_oracle(patch, direct_matrix);
        std::copy(g.coeffs.begin(), g.coeffs.end(), coeffs.begin());
        break;
      }
    }
  };

  // DC of an all-ones neighborhood, so the base-1 fallback lands in [0, 255].
  double dc_unit = 1.0;
  if (base == 1) {
    std::array<double, 16> c{};
    if (backend == Backend::walsh3) {
      std::array<double, 9> f{};
      std::array<double, 9> g{};
      f.fill(1.0);
      detail::walsh3_apply(f, basis, g);
      dc_unit = g[0];
    } else {
      c.fill(1.0);
      detail::fwht4x4_inplace(c);
      dc_unit = c[0];
    }
  }

  const std::span<const int> perm = ordering.permutation;
  if (backend == Backend::fwht4) {
    encode_fwht4_fast(img, base, perm, order, workers, out);
    return out;
  }
  const int last_x = img.width - side + 1;   // exclusive bound on x0
  const int last_y = img.height - side + 1;  // exclusive bound on y0

  detail::parallel_for(0, last_y, workers, [&](int y0) {
    std::array<double, 16> coeffs{};
    std::array<double, 15> alpha{};
    for (int x0 = 0; x0 < last_x; ++x0) {
      transform(x0, y0, coeffs);
      std::uint64_t code = 0;
      if (base == 1) {
        code = static_cast<std::uint64_t>(std::clamp(std::floor(coeffs[0] / dc_unit), 0.0, 255.0));
      } else {
        normalize_into(coeffs.data(), count, alpha.data());
        for (int k = 0; k < count - 1; ++k) {
          code = code * static_cast<std::uint64_t>(base) +
                 static_cast<std::uint64_t>(quantize_unchecked(alpha[perm[k]], base));
        }
      }
      // Anchor pixel sits at offset (1,1) for every backend.
      const std::size_t o = static_cast<std::size_t>(y0 + 1) * img.width + (x0 + 1);
      out.codes[o] = code;
      out.valid[o] = 1;
    }
  });
  return out;
}

}  // namespace walshreg
