#pragma once

// Dense linear algebra, a dual simplex LP solver, cyclic Jacobi and a
// counter-based RNG. Everything here is a pure function of its inputs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ncc/error.hpp"

namespace ncc {

using Vec = std::vector<double>;

inline constexpr double kTolFeas = 1e-8;
inline constexpr double kTolLp = 1e-7;

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
double norm1(std::span<const double> a);
Vec add(std::span<const double> a, std::span<const double> b);
Vec sub(std::span<const double> a, std::span<const double> b);
Vec scaled(std::span<const double> a, double s);
/// y += s * x
void axpy(double s, std::span<const double> x, std::span<double> y);
bool all_finite(std::span<const double> a);

/// Row-major dense matrix.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Mat identity(std::size_t n);
  /// Builds a matrix whose columns are the given vectors (all of length rows).
  static Mat from_columns(std::size_t rows, const std::vector<Vec>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vec column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> v);

  /// Appends a row; on an empty 0x0 matrix this fixes the column count.
  void append_row(std::span<const double> r);

  Mat transpose() const;
  double max_abs() const;
  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Mat operator*(const Mat& a, const Mat& b);
Vec operator*(const Mat& a, std::span<const double> x);
/// a^T x without forming the transpose.
Vec mul_transpose(const Mat& a, std::span<const double> x);

/// Solves a square system by Gaussian elimination with partial pivoting.
/// Returns nullopt if the matrix is numerically singular.
std::optional<Vec> solve_linear(Mat a, Vec b);

// ---------------------------------------------------------------------------
// Linear programming

enum class Sense { maximize, minimize };
enum class LpStatus { optimal, infeasible, unbounded };

/// optimize objective . x  subject to  constraints * x <= bounds, x free.
struct LpProblem {
  Vec objective;
  Mat constraints;
  Vec bounds;
  Sense sense = Sense::maximize;
};

struct LpOutcome {
  LpStatus status = LpStatus::infeasible;
  std::optional<Vec> point;
  std::optional<double> value;
  /// Set when infeasibility was proven by a Farkas ray (y >= 0, A^T y = 0, b.y < 0).
  bool farkas_certificate = false;
  int pivots = 0;
};

/// Dense simplex on the dual of the problem (d equality rows, m columns), with
/// Dantzig pricing and a switch to Bland's rule on degenerate stalls.
/// Throws Error(numerical_failure) if the pivot budget is exhausted.
LpOutcome lp_solve(const LpProblem& p);

// ---------------------------------------------------------------------------
// Symmetric eigenproblem

struct SymEigen {
  Vec values;  ///< ascending
  Mat vectors;  ///< column i is the eigenvector for values[i]
};

/// Cyclic Jacobi rotations. Input must be symmetric within 1e-9 (relative).
SymEigen sym_eigen(const Mat& s);

/// Modified Gram-Schmidt with reorthogonalisation. Vectors whose residual
/// falls below drop_tol after projection are discarded.
std::vector<Vec> orthonormalize(const std::vector<Vec>& vectors, double drop_tol = 1e-8);

// ---------------------------------------------------------------------------
// Randomness

/// Counter-based generator: draw k of stream (seed) is mix(seed, k), so the
/// state is just two integers and results do not depend on scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double next_unit();
  double uniform(double lo, double hi);
  double gaussian();
  Vec gaussian_dir(int d);
  /// Independent child stream; children with distinct indices never overlap.
  RngStream split(std::uint64_t index) const;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

double rng_uniform(RngStream& r, double lo, double hi);
Vec rng_gaussian_dir(RngStream& r, int d);

}  // namespace ncc
