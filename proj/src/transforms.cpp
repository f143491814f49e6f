#include "walshreg/transforms.hpp"

#include "walshreg/errors.hpp"

#include <cmath>
#include <string>

namespace walshreg {

Matrix::Matrix(int r, int c, double fill)
    : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) {
    throw DimensionError("matrix product: inner dimensions " + std::to_string(a.cols) +
                         " and " + std::to_string(b.rows) + " differ");
  }
  Matrix out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < b.cols; ++j) {
      double acc = 0.0;
      for (int k = 0; k < a.cols; ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(j, i) = m(i, j);
  return out;
}

Patch::Patch(int s, double fill) : side(s), samples(static_cast<std::size_t>(s) * s, fill) {}

CoefficientBlock::CoefficientBlock(int s, double fill)
    : side(s), coeffs(static_cast<std::size_t>(s) * s, fill) {}

// ---------------------------------------------------------------------------

namespace {

// Walsh function of sequency `index` (0..2) on [0, 1).
double walsh_function(int index, double t) {
  switch (index) {
    case 0:
      return 1.0;
    case 1:
      return t < 0.5 ? 1.0 : -1.0;
    default:
      return (t < 0.25 || t >= 0.75) ? 1.0 : -1.0;
  }
}

Matrix inverse3(const Matrix& m) {
  const double a = m(0, 0), b = m(0, 1), c = m(0, 2);
  const double d = m(1, 0), e = m(1, 1), f = m(1, 2);
  const double g = m(2, 0), h = m(2, 1), i = m(2, 2);
  const double det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
  Matrix inv(3, 3);
  inv(0, 0) = (e * i - f * h) / det;
  inv(0, 1) = (c * h - b * i) / det;
  inv(0, 2) = (b * f - c * e) / det;
  inv(1, 0) = (f * g - d * i) / det;
  inv(1, 1) = (a * i - c * g) / det;
  inv(1, 2) = (c * d - a * f) / det;
  inv(2, 0) = (d * h - e * g) / det;
  inv(2, 1) = (b * g - a * h) / det;
  inv(2, 2) = (a * e - b * d) / det;
  return inv;
}

bool is_power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

int log2_exact(int n) {
  int k = 0;
  while ((1 << k) < n) ++k;
  return k;
}

int bit_reverse(int value, int bits) {
  int out = 0;
  for (int b = 0; b < bits; ++b) {
    out = (out << 1) | (value & 1);
    value >>= 1;
  }
  return out;
}

template <bool Counted>
void butterfly(double* data, int n, int stride, OpCounter* counter) {
  std::uint64_t ops = 0;
  for (int h = 1; h < n; h <<= 1) {
    for (int i = 0; i < n; i += 2 * h) {
      for (int j = i; j < i + h; ++j) {
        const double a = data[j * stride];
        const double b = data[(j + h) * stride];
        data[j * stride] = a + b;
        data[(j + h) * stride] = a - b;
        if constexpr (Counted) ops += 2;
      }
    }
  }
  if constexpr (Counted) counter->add_sub += ops;
}

template <int N>
inline void butterfly_fixed(double* data, int stride) {
  for (int h = 1; h < N; h <<= 1) {
    for (int i = 0; i < N; i += 2 * h) {
      for (int j = i; j < i + h; ++j) {
        const double a = data[j * stride];
        const double b = data[(j + h) * stride];
        data[j * stride] = a + b;
        data[(j + h) * stride] = a - b;
      }
    }
  }
}

void natural_2d(std::vector<double>& values, int n) {
  for (int r = 0; r < n; ++r) detail::fwht_natural_inplace(values.data() + r * n, n, 1);
  for (int c = 0; c < n; ++c) detail::fwht_natural_inplace(values.data() + c, n, n);
}

}  // namespace

WalshBasis3 walsh3_basis() {
  WalshBasis3 basis;
  basis.w = Matrix(3, 3);
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 3; ++col) basis.w(row, col) = walsh_function(row, col / 3.0);
  basis.w_inv = inverse3(basis.w);
  return basis;
}

CoefficientBlock walsh3_forward(const Patch& f, const WalshBasis3& basis) {
  if (f.side != 3 || f.samples.size() != 9) {
    throw DimensionError("walsh3_forward expects a 3x3 patch, got side " +
                         std::to_string(f.side));
  }
  std::array<double, 9> in{};
  std::array<double, 9> out{};
  for (std::size_t i = 0; i < 9; ++i) in[i] = f.samples[i];
  detail::walsh3_apply(in, basis, out);
  CoefficientBlock g(3);
  for (std::size_t i = 0; i < 9; ++i) g.coeffs[i] = out[i];
  return g;
}

Patch walsh3_inverse(const CoefficientBlock& g, const WalshBasis3& basis) {
  if (g.side != 3 || g.coeffs.size() != 9) {
    throw DimensionError("walsh3_inverse expects a 3x3 block, got side " +
                         std::to_string(g.side));
  }
  const Matrix& w = basis.w;
  Patch f(3);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      double acc = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) acc += w(i, r) * g.at(i, j) * w(j, c);
      f.at(r, c) = acc;
    }
  }
  return f;
}

// ---------------------------------------------------------------------------

Matrix hadamard_matrix(int k) {
  if (k < 1 || k > 14) {
    throw ParameterError("hadamard_matrix: order exponent must be in [1, 14], got " +
                         std::to_string(k));
  }
  Matrix h(1, 1, 1.0);
  for (int level = 0; level < k; ++level) {
    const int n = h.rows;
    Matrix next(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        next(i, j) = h(i, j);
        next(i, j + n) = h(i, j);
        next(i + n, j) = h(i, j);
        next(i + n, j + n) = -h(i, j);
      }
    }
    h = std::move(next);
  }
  return h;
}

HadamardPlan::HadamardPlan(int size, HadamardOrdering ordering)
    : size_(size), stages_(0), ordering_(ordering) {
  if (!is_power_of_two(size) || size > (1 << 14)) {
    throw ParameterError("HadamardPlan: size must be a power of two >= 2, got " +
                         std::to_string(size));
  }
  stages_ = log2_exact(size);
  order_.resize(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) {
    // Sequency row i is natural row bitrev(gray(i)).
    order_[i] = ordering == HadamardOrdering::natural ? i : bit_reverse(i ^ (i >> 1), stages_);
  }
}

Matrix HadamardPlan::matrix() const {
  const Matrix natural = hadamard_matrix(stages_);
  Matrix out(size_, size_);
  for (int i = 0; i < size_; ++i)
    for (int j = 0; j < size_; ++j) out(i, j) = natural(order_[i], j);
  return out;
}

int sign_changes(std::span<const double> row) {
  int changes = 0;
  for (std::size_t i = 1; i < row.size(); ++i)
    if ((row[i] < 0) != (row[i - 1] < 0)) ++changes;
  return changes;
}

namespace detail {

void fwht_natural_inplace(double* data, int n, int stride, OpCounter* counter) {
  if (counter != nullptr) {
    butterfly<true>(data, n, stride, counter);
  } else {
    butterfly<false>(data, n, stride, nullptr);
  }
}

void fwht4x4_inplace(std::array<double, 16>& block) {
  for (int r = 0; r < 4; ++r) butterfly_fixed<4>(block.data() + r * 4, 1);
  for (int c = 0; c < 4; ++c) butterfly_fixed<4>(block.data() + c, 4);
}

void walsh3_apply(const std::array<double, 9>& f, const WalshBasis3& basis,
                  std::array<double, 9>& g) {
  const Matrix& m = basis.w_inv;
  std::array<double, 9> fm{};
  for (int r = 0; r < 3; ++r)
    for (int j = 0; j < 3; ++j)
      fm[r * 3 + j] = f[r * 3 + 0] * m(0, j) + f[r * 3 + 1] * m(1, j) + f[r * 3 + 2] * m(2, j);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      g[i * 3 + j] = m(0, i) * fm[0 * 3 + j] + m(1, i) * fm[1 * 3 + j] + m(2, i) * fm[2 * 3 + j];
}

}  // namespace detail

std::vector<double> fwht_1d(std::span<const double> v, const HadamardPlan& plan,
                            OpCounter* counter) {
  if (static_cast<int>(v.size()) != plan.size()) {
    throw DimensionError("fwht_1d: vector length " + std::to_string(v.size()) +
                         " does not match plan size " + std::to_string(plan.size()));
  }
  std::vector<double> natural(v.begin(), v.end());
  detail::fwht_natural_inplace(natural.data(), plan.size(), 1, counter);
  if (plan.ordering() == HadamardOrdering::natural) return natural;
  std::vector<double> out(natural.size());
  const auto order = plan.output_order();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = natural[order[i]];
  return out;
}

CoefficientBlock fwht_2d(const Patch& f, const HadamardPlan& plan) {
  const int n = plan.size();
  if (f.side != n || f.samples.size() != static_cast<std::size_t>(n) * n) {
    throw DimensionError("fwht_2d: patch side " + std::to_string(f.side) +
                         " does not match plan size " + std::to_string(n));
  }
  std::vector<double> work = f.samples;
  natural_2d(work, n);
  CoefficientBlock g(n);
  const auto order = plan.output_order();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.at(i, j) = work[order[i] * n + order[j]];
  return g;
}

Patch inverse_fwht_2d(const CoefficientBlock& g, const HadamardPlan& plan) {
  const int n = plan.size();
  if (g.side != n || g.coeffs.size() != static_cast<std::size_t>(n) * n) {
    throw DimensionError("inverse_fwht_2d: block side " + std::to_string(g.side) +
                         " does not match plan size " + std::to_string(n));
  }
  std::vector<double> work(g.coeffs.size());
  const auto order = plan.output_order();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) work[order[i] * n + order[j]] = g.at(i, j);
  natural_2d(work, n);
  const double scale = 1.0 / (static_cast<double>(n) * n);
  Patch f(n);
  for (std::size_t i = 0; i < work.size(); ++i) f.samples[i] = work[i] * scale;
  return f;
}

CoefficientBlock direct_oracle(const Patch& f, const Matrix& m) {
  if (m.rows != m.cols || m.rows != f.side ||
      f.samples.size() != static_cast<std::size_t>(f.side) * f.side) {
    throw DimensionError("direct_oracle: patch side " + std::to_string(f.side) +
                         " and matrix " + std::to_string(m.rows) + "x" +
                         std::to_string(m.cols) + " disagree");
  }
  Matrix patch(f.side, f.side);
  patch.data = f.samples;
  const Matrix product = multiply(multiply(transpose(m), patch), m);
  CoefficientBlock g(f.side);
  g.coeffs = product.data;
  return g;
}

}  // namespace walshreg
