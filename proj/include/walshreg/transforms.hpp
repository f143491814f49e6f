#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace walshreg {

/// Dense row-major matrix of doubles. Only what the transforms and their
/// oracles need; not a linear algebra library.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  static Matrix identity(int n);
};

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

/// Square neighborhood of intensities, row-major.
struct Patch {
  int side = 0;
  std::vector<double> samples;

  Patch() = default;
  explicit Patch(int side, double fill = 0.0);

  double& at(int row, int col) { return samples[static_cast<std::size_t>(row) * side + col]; }
  double at(int row, int col) const { return samples[static_cast<std::size_t>(row) * side + col]; }
};

/// Transform output a_ij, row-major. The DC coefficient is coeffs[0].
struct CoefficientBlock {
  int side = 0;
  std::vector<double> coeffs;

  CoefficientBlock() = default;
  explicit CoefficientBlock(int side, double fill = 0.0);

  double at(int i, int j) const { return coeffs[static_cast<std::size_t>(i) * side + j]; }
  double& at(int i, int j) { return coeffs[static_cast<std::size_t>(i) * side + j]; }
  double dc() const { return coeffs.front(); }
};

// ---------------------------------------------------------------------------
// 3x3 Walsh transform
// ---------------------------------------------------------------------------

/// Sampled Walsh functions W0, W1, W2 at t = 0, 1/3, 2/3 and the inverse.
struct WalshBasis3 {
  Matrix w;
  Matrix w_inv;
};

WalshBasis3 walsh3_basis();

/// g = (W^-1)^T f W^-1. Throws DimensionError unless f.side == 3.
CoefficientBlock walsh3_forward(const Patch& f, const WalshBasis3& basis);

/// f = W^T g W, the exact inverse of walsh3_forward.
Patch walsh3_inverse(const CoefficientBlock& g, const WalshBasis3& basis);

// ---------------------------------------------------------------------------
// Walsh-Hadamard transform
// ---------------------------------------------------------------------------

enum class HadamardOrdering { natural, sequency };

/// Sylvester Hadamard matrix of order 2^k, natural order. k must be >= 1.
Matrix hadamard_matrix(int k);

/// Precomputed description of a radix-2 fast transform of length 2^k.
///
/// The butterfly stages always run in natural (Sylvester) order; sequency
/// ordering is a fixed output permutation applied afterwards, so output[i]
/// is natural coefficient output_order()[i].
class HadamardPlan {
 public:
  explicit HadamardPlan(int size, HadamardOrdering ordering = HadamardOrdering::natural);

  int size() const { return size_; }
  int stages() const { return stages_; }
  HadamardOrdering ordering() const { return ordering_; }
  std::span<const int> output_order() const { return order_; }

  /// The matrix the plan computes: hadamard_matrix rows permuted by ordering.
  Matrix matrix() const;

 private:
  int size_;
  int stages_;
  HadamardOrdering ordering_;
  std::vector<int> order_;
};

/// Number of sign changes along a row of +-1 entries.
int sign_changes(std::span<const double> row);

/// Add/subtract tally for instrumented runs of the butterfly.
struct OpCounter {
  std::uint64_t add_sub = 0;
};

std::vector<double> fwht_1d(std::span<const double> v, const HadamardPlan& plan,
                            OpCounter* counter = nullptr);

/// Separable transform H f H^T (rows, then columns).
CoefficientBlock fwht_2d(const Patch& f, const HadamardPlan& plan);

/// f = H^T g H / size^2.
Patch inverse_fwht_2d(const CoefficientBlock& g, const HadamardPlan& plan);

/// Naive m^T f m by explicit triple loops. Used as the reference in tests and
/// as the slow baseline in the benchmark harness.
CoefficientBlock direct_oracle(const Patch& f, const Matrix& m);

namespace detail {

/// In-place natural-order butterfly over n = 2^k elements spaced `stride`
/// apart. Exactly n*k add/sub operations.
void fwht_natural_inplace(double* data, int n, int stride, OpCounter* counter = nullptr);

/// Fixed-size kernels used by the per-pixel encoder. Results are identical to
/// fwht_2d / walsh3_forward, without heap traffic.
void fwht4x4_inplace(std::array<double, 16>& block);
void walsh3_apply(const std::array<double, 9>& f, const WalshBasis3& basis,
                  std::array<double, 9>& g);

}  // namespace detail

}  // namespace walshreg
