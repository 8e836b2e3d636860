// Serial reference vs OpenMP kernels on hit-and-run sized point clouds.

#include <benchmark/benchmark.h>

#include "ncc/kernels.hpp"

namespace {

std::vector<double> cloud(std::size_t n, std::size_t d) {
  ncc::RngStream rng(11);
  std::vector<double> pts(n * d);
  for (double& v : pts) v = rng.uniform(-1.0, 1.0);
  return pts;
}

ncc::Mat rows(std::size_t m, std::size_t d) {
  ncc::RngStream rng(12);
  ncc::Mat a(m, d);
  for (std::size_t i = 0; i < m; ++i) {
    const ncc::Vec u = rng.gaussian_dir(static_cast<int>(d));
    for (std::size_t j = 0; j < d; ++j) a(i, j) = u[j];
  }
  return a;
}

void BM_MomentsSerial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto pts = cloud(n, 5);
  for (auto _ : st) benchmark::DoNotOptimize(ncc::kernels::moments_serial(pts, 5));
}
void BM_MomentsParallel(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto pts = cloud(n, 5);
  for (auto _ : st) benchmark::DoNotOptimize(ncc::kernels::moments_parallel(pts, 5));
}
void BM_ViolationSerial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto pts = cloud(n, 5);
  const auto a = rows(64, 5);
  const ncc::Vec b(64, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(ncc::kernels::max_violation_serial(a, b, pts));
}
void BM_ViolationParallel(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto pts = cloud(n, 5);
  const auto a = rows(64, 5);
  const ncc::Vec b(64, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(ncc::kernels::max_violation_parallel(a, b, pts));
}
void BM_CountSerial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto pts = cloud(n, 5);
  const ncc::Vec normal{1, 0, 0, 0, 0};
  for (auto _ : st) benchmark::DoNotOptimize(ncc::kernels::count_below_serial(pts, normal, 0.0));
}
void BM_CountParallel(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto pts = cloud(n, 5);
  const ncc::Vec normal{1, 0, 0, 0, 0};
  for (auto _ : st) benchmark::DoNotOptimize(ncc::kernels::count_below_parallel(pts, normal, 0.0));
}

}  // namespace

BENCHMARK(BM_MomentsSerial)->Arg(4000)->Arg(100000);
BENCHMARK(BM_MomentsParallel)->Arg(4000)->Arg(100000);
BENCHMARK(BM_ViolationSerial)->Arg(4000)->Arg(100000);
BENCHMARK(BM_ViolationParallel)->Arg(4000)->Arg(100000);
BENCHMARK(BM_CountSerial)->Arg(4000)->Arg(100000);
BENCHMARK(BM_CountParallel)->Arg(4000)->Arg(100000);

BENCHMARK_MAIN();
