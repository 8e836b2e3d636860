#include "ncc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#ifdef NCC_HAVE_OPENMP
#include <omp.h>
#endif

namespace ncc::kernels {

int max_threads() {
#ifdef NCC_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Moments moments_serial(std::span<const double> points, std::size_t dim) {
  require(dim > 0 && points.size() % dim == 0, "moments: point array is not a multiple of dim");
  const std::size_t n = points.size() / dim;
  Moments out{Vec(dim, 0.0), Mat(dim, dim)};
  if (n == 0) return out;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t i = 0; i < dim; ++i) out.mean[i] += points[p * dim + i];
  for (double& v : out.mean) v /= static_cast<double>(n);
  Vec c(dim);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t i = 0; i < dim; ++i) c[i] = points[p * dim + i] - out.mean[i];
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j <= i; ++j) out.covariance(i, j) += c[i] * c[j];
  }
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      out.covariance(i, j) /= static_cast<double>(n);
      out.covariance(j, i) = out.covariance(i, j);
    }
  return out;
}

Moments moments_parallel(std::span<const double> points, std::size_t dim) {
  require(dim > 0 && points.size() % dim == 0, "moments: point array is not a multiple of dim");
  const std::size_t n = points.size() / dim;
  Moments out{Vec(dim, 0.0), Mat(dim, dim)};
  if (n == 0) return out;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  const auto nb = static_cast<long long>(blocks);

  std::vector<double> partial_mean(blocks * dim, 0.0);
#pragma omp parallel for schedule(static)
  for (long long blk = 0; blk < nb; ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double* acc = partial_mean.data() + static_cast<std::size_t>(blk) * dim;
    for (std::size_t p = lo; p < hi; ++p)
      for (std::size_t i = 0; i < dim; ++i) acc[i] += points[p * dim + i];
  }
  for (std::size_t blk = 0; blk < blocks; ++blk)
    for (std::size_t i = 0; i < dim; ++i) out.mean[i] += partial_mean[blk * dim + i];
  for (double& v : out.mean) v /= static_cast<double>(n);

  const std::size_t tri = dim * (dim + 1) / 2;
  std::vector<double> partial_cov(blocks * tri, 0.0);
#pragma omp parallel for schedule(static)
  for (long long blk = 0; blk < nb; ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double* acc = partial_cov.data() + static_cast<std::size_t>(blk) * tri;
    std::vector<double> c(dim);
    for (std::size_t p = lo; p < hi; ++p) {
      for (std::size_t i = 0; i < dim; ++i) c[i] = points[p * dim + i] - out.mean[i];
      std::size_t k = 0;
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j <= i; ++j) acc[k++] += c[i] * c[j];
    }
  }
  std::vector<double> total(tri, 0.0);
  for (std::size_t blk = 0; blk < blocks; ++blk)
    for (std::size_t k = 0; k < tri; ++k) total[k] += partial_cov[blk * tri + k];
  std::size_t k = 0;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      out.covariance(i, j) = total[k++] / static_cast<double>(n);
      out.covariance(j, i) = out.covariance(i, j);
    }
  return out;
}

double max_violation_serial(const Mat& a, std::span<const double> b, std::span<const double> points) {
  const std::size_t dim = a.cols();
  double worst = -std::numeric_limits<double>::infinity();
  if (dim == 0) return worst;
  const std::size_t n = points.size() / dim;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t i = 0; i < a.rows(); ++i)
      worst = std::max(worst, dot(a.row(i), points.subspan(p * dim, dim)) - b[i]);
  return worst;
}

double max_violation_parallel(const Mat& a, std::span<const double> b, std::span<const double> points) {
  const std::size_t dim = a.cols();
  double worst = -std::numeric_limits<double>::infinity();
  if (dim == 0) return worst;
  const auto n = static_cast<long long>(points.size() / dim);
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (long long p = 0; p < n; ++p) {
    const auto x = points.subspan(static_cast<std::size_t>(p) * dim, dim);
    for (std::size_t i = 0; i < a.rows(); ++i) worst = std::max(worst, dot(a.row(i), x) - b[i]);
  }
  return worst;
}

std::size_t count_below_serial(std::span<const double> points, std::span<const double> normal, double offset) {
  const std::size_t dim = normal.size();
  const std::size_t n = points.size() / dim;
  std::size_t count = 0;
  for (std::size_t p = 0; p < n; ++p)
    if (dot(normal, points.subspan(p * dim, dim)) <= offset) ++count;
  return count;
}

std::size_t count_below_parallel(std::span<const double> points, std::span<const double> normal, double offset) {
  const std::size_t dim = normal.size();
  const auto n = static_cast<long long>(points.size() / dim);
  long long count = 0;
#pragma omp parallel for schedule(static) reduction(+ : count)
  for (long long p = 0; p < n; ++p)
    if (dot(normal, points.subspan(static_cast<std::size_t>(p) * dim, dim)) <= offset) ++count;
  return static_cast<std::size_t>(count);
}

}  // namespace ncc::kernels
