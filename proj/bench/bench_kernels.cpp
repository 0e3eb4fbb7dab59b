// Serial against parallel, and fast kernels against their reference routes.
#include <benchmark/benchmark.h>

#include <numbers>

#include "favlab/favard.hpp"
#include "favlab/kernels.hpp"
#include "favlab/spectral.hpp"
#include "favlab/stacks.hpp"

using namespace favlab;

namespace {

Exec exec_of(const benchmark::State& state) {
  return state.range(0) ? Exec::parallel : Exec::serial;
}

void BM_SortedCenters(benchmark::State& state) {
  const auto g = preset("gasket");
  for (auto _ : state) benchmark::DoNotOptimize(kernels::sorted_projected_centers(g, 9, 0.7));
}
BENCHMARK(BM_SortedCenters)->Unit(benchmark::kMillisecond);

void BM_SortedCentersReference(benchmark::State& state) {
  const auto g = preset("gasket");
  for (auto _ : state) benchmark::DoNotOptimize(kernels::sorted_projected_centers_reference(g, 9, 0.7));
}
BENCHMARK(BM_SortedCentersReference)->Unit(benchmark::kMillisecond);

void BM_ProjectionLengths(benchmark::State& state) {
  const auto g = preset("gasket");
  const auto thetas = uniform_angles(256, std::numbers::pi);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::projection_lengths(g, 7, thetas, exec_of(state)));
}
BENCHMARK(BM_ProjectionLengths)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ProjectionLengthReference(benchmark::State& state) {
  const auto g = preset("gasket");
  for (auto _ : state) benchmark::DoNotOptimize(kernels::projection_length_reference(g, 7, 0.7));
}
BENCHMARK(BM_ProjectionLengthReference)->Unit(benchmark::kMillisecond);

void BM_Buffon(benchmark::State& state) {
  const auto g = preset("gasket");
  for (auto _ : state) benchmark::DoNotOptimize(buffon_estimate(g, 8, 200000, 1, exec_of(state)));
}
BENCHMARK(BM_Buffon)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FavardQuadrature(benchmark::State& state) {
  const auto g = preset("gasket");
  for (auto _ : state) benchmark::DoNotOptimize(favard_length(g, 6, {}, exec_of(state)));
}
BENCHMARK(BM_FavardQuadrature)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SsvScan(benchmark::State& state) {
  const auto g = preset("gasket");
  for (auto _ : state) {
    benchmark::DoNotOptimize(ssv_scan(g, Direction::slope(0.5), {10, 3, 6}, 1.0 / 729.0, 200000,
                                      exec_of(state)));
  }
}
BENCHMARK(BM_SsvScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ProductScan(benchmark::State& state) {
  const auto g = preset("gasket");
  const auto thetas = uniform_angles(256, std::numbers::pi);
  const std::vector<std::pair<int, int>> pairs{{1, 1}, {2, 2}, {3, 3}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(product_inequality_report(g, 5, thetas, pairs, exec_of(state)));
  }
}
BENCHMARK(BM_ProductScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
