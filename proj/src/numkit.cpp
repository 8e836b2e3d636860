#include "ncc/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ncc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::contract_violation: return "contract violation";
    case ErrorKind::numerical_failure: return "numerical failure";
    case ErrorKind::empty_body: return "empty body";
    case ErrorKind::unbounded_body: return "unbounded body";
    case ErrorKind::degenerate_body: return "degenerate body";
    case ErrorKind::facet_budget: return "facet budget";
    case ErrorKind::violated_nesting: return "violated nesting";
    case ErrorKind::depth_exceeded: return "depth exceeded";
    case ErrorKind::scale_underflow: return "scale underflow";
    case ErrorKind::estimation_failure: return "estimation failure";
    case ErrorKind::parse_error: return "parse error";
    case ErrorKind::feasibility_violation: return "feasibility violation";
    case ErrorKind::config_error: return "config error";
  }
  return "error";
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double norm1(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

Vec add(std::span<const double> a, std::span<const double> b) {
  Vec r(a.begin(), a.end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Vec sub(std::span<const double> a, std::span<const double> b) {
  Vec r(a.begin(), a.end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Vec scaled(std::span<const double> a, double s) {
  Vec r(a.begin(), a.end());
  for (double& v : r) v *= s;
  return r;
}

void axpy(double s, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

// ---------------------------------------------------------------------------

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::from_columns(std::size_t rows, const std::vector<Vec>& columns) {
  Mat m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
  return m;
}

Vec Mat::column(std::size_t j) const {
  Vec c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void Mat::set_column(std::size_t j, std::span<const double> v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

void Mat::append_row(std::span<const double> r) {
  if (rows_ == 0 && data_.empty()) cols_ = r.size();
  require(r.size() == cols_, "append_row: column count mismatch");
  data_.insert(data_.end(), r.begin(), r.end());
  ++rows_;
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Mat::max_abs() const { return norm_inf(data_); }

Mat operator*(const Mat& a, const Mat& b) {
  require(a.cols() == b.rows(), "matrix product: dimension mismatch");
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vec operator*(const Mat& a, std::span<const double> x) {
  require(a.cols() == x.size(), "matrix-vector product: dimension mismatch");
  Vec y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

Vec mul_transpose(const Mat& a, std::span<const double> x) {
  require(a.rows() == x.size(), "transposed product: dimension mismatch");
  Vec y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) axpy(x[i], a.row(i), y);
  return y;
}

std::optional<Vec> solve_linear(Mat a, Vec b) {
  const std::size_t n = a.rows();
  require(a.cols() == n && b.size() == n, "solve_linear: shape mismatch");
  const double scale = std::max(1.0, a.max_abs());
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
    if (std::abs(a(piv, col)) < 1e-13 * scale) return std::nullopt;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = a(i, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
      b[i] -= f * b[col];
    }
  }
  Vec x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
    x[ii] = s / a(ii, ii);
  }
  return x;
}

// ---------------------------------------------------------------------------

SymEigen sym_eigen(const Mat& s) {
  const std::size_t n = s.rows();
  require(s.cols() == n, "sym_eigen: matrix must be square");
  require(n <= 64, "sym_eigen: dimension above 64");
  const double scale = std::max(1.0, s.max_abs());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(s(i, j) - s(j, i)) > 1e-9 * scale)
        throw Error(ErrorKind::contract_violation, "sym_eigen: matrix is not symmetric");

  Mat a = s;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (s(i, j) + s(j, i));
  Mat v = Mat::identity(n);

  auto off_norm = [&] {
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) t += a(i, j) * a(i, j);
    return std::sqrt(t);
  };
  double frob = 0.0;
  for (double x : a.data()) frob += x * x;
  frob = std::sqrt(frob);

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_norm() <= 1e-15 * std::max(frob, 1e-300)) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymEigen out{Vec(n), Mat(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<Vec> orthonormalize(const std::vector<Vec>& vectors, double drop_tol) {
  std::vector<Vec> basis;
  for (const Vec& v : vectors) {
    Vec r = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& q : basis) axpy(-dot(q, r), q, r);
    const double nr = norm2(r);
    if (nr < drop_tol) continue;
    for (double& x : r) x /= nr;
    basis.push_back(std::move(r));
  }
  return basis;
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return mix64(seed_ + counter_ * kGolden);
}

double RngStream::next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

double RngStream::gaussian() {
  // Box-Muller; u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - next_unit();
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

Vec RngStream::gaussian_dir(int d) {
  Vec v(static_cast<std::size_t>(d));
  double n = 0.0;
  while (n < 1e-12) {
    for (double& x : v) x = gaussian();
    n = norm2(v);
  }
  for (double& x : v) x /= n;
  return v;
}

RngStream RngStream::split(std::uint64_t index) const {
  return RngStream(mix64(seed_ ^ mix64(index + kGolden)) + index, 0);
}

double rng_uniform(RngStream& r, double lo, double hi) {
  require(lo < hi, "rng_uniform: lo must be below hi");
  return r.uniform(lo, hi);
}

Vec rng_gaussian_dir(RngStream& r, int d) {
  require(d >= 1, "rng_gaussian_dir: d must be positive");
  return r.gaussian_dir(d);
}

}  // namespace ncc
