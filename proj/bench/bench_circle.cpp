#include <benchmark/benchmark.h>

#include <omp.h>

#include "fracbloch/circle.hpp"
#include "fracbloch/grid.hpp"
#include "fracbloch/moments.hpp"
#include "fracbloch/norms.hpp"

using namespace fracbloch;

namespace {

const std::vector<double>& sweep_complements() {
  static const auto grid = RadialGrid::geometric(48, 4);
  return grid.complements();
}

void BM_CircleSweepParallel(benchmark::State& state) {
  const auto f = random_corpus(kCorpusSeed, 1, static_cast<std::size_t>(state.range(0))).front();
  const auto Q = angular_resolution(f.degree());
  for (auto _ : state) benchmark::DoNotOptimize(circle_sweep(f, sweep_complements(), Q));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_CircleSweepSerialReference(benchmark::State& state) {
  const auto f = random_corpus(kCorpusSeed, 1, static_cast<std::size_t>(state.range(0))).front();
  const auto Q = angular_resolution(f.degree());
  for (auto _ : state) benchmark::DoNotOptimize(circle_sweep_reference(f, sweep_complements(), Q));
}

void BM_OddMoments(benchmark::State& state) {
  for (auto _ : state) {
    const MomentTable table(exponential_weight(1, 1, 1));
    benchmark::DoNotOptimize(table.log_odd_moments(static_cast<std::size_t>(state.range(0))));
  }
  state.counters["threads"] = omp_get_max_threads();
}

}  // namespace

BENCHMARK(BM_CircleSweepParallel)->Arg(64)->Arg(512)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CircleSweepSerialReference)->Arg(64)->Arg(512)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OddMoments)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
