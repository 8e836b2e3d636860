#pragma once

// Data-parallel inner loops over point clouds. Each kernel has a plain serial
// reference and an OpenMP version; tests check them against each other and
// bench/bench_kernels.cpp times them.
//
// Point clouds are flat row-major arrays of n points of dimension dim.
// The parallel reductions use fixed-size blocks combined in block order, so
// their results do not depend on the thread count.

#include <cstddef>
#include <span>

#include "ncc/numkit.hpp"

namespace ncc::kernels {

inline constexpr std::size_t kBlock = 256;

struct Moments {
  Vec mean;
  Mat covariance;  ///< divisor n
};

Moments moments_serial(std::span<const double> points, std::size_t dim);
Moments moments_parallel(std::span<const double> points, std::size_t dim);

/// max over points and rows of (a_i . x - b_i); -inf for an empty cloud.
double max_violation_serial(const Mat& a, std::span<const double> b, std::span<const double> points);
double max_violation_parallel(const Mat& a, std::span<const double> b, std::span<const double> points);

/// Number of points with normal . x <= offset.
std::size_t count_below_serial(std::span<const double> points, std::span<const double> normal, double offset);
std::size_t count_below_parallel(std::span<const double> points, std::span<const double> normal, double offset);

/// Number of threads the parallel kernels will use (1 without OpenMP).
int max_threads();

}  // namespace ncc::kernels
