// Serial reference vs OpenMP kernel for the three parallel paths.
// Run with OMP_NUM_THREADS set to the number of cores to compare.

#include <benchmark/benchmark.h>

#include "subspace_bounds/curves.hpp"
#include "subspace_bounds/partition_optimizer.hpp"
#include "subspace_bounds/verification.hpp"

using namespace sbounds;

namespace {

ScenarioSpec bench_spec() {
  ScenarioSpec spec;
  spec.layout = Layout::interlaced;
  spec.kind = PerturbationKind::off_diagonal;
  spec.sampling = StrengthSampling::log_uniform;
  spec.dim_max = 30;
  spec.seed = 1;
  return spec;
}

void BM_verify_serial(benchmark::State& state) {
  const auto spec = bench_spec();
  for (auto _ : state) benchmark::DoNotOptimize(verify_bounds_serial(spec, state.range(0)));
}

void BM_verify_openmp(benchmark::State& state) {
  const auto spec = bench_spec();
  for (auto _ : state) benchmark::DoNotOptimize(verify_bounds(spec, state.range(0)));
}

void BM_dp_oracle_serial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(dp_oracle_serial(0.8, DenominatorKind::off_diagonal, static_cast<int>(state.range(0))));
}

void BM_dp_oracle_openmp(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(dp_oracle(0.8, DenominatorKind::off_diagonal, static_cast<int>(state.range(0))));
}

CurveGrid bench_grid(int points) {
  CurveGrid g;
  g.points = points;
  return g;
}

void BM_curves_serial(benchmark::State& state) {
  const auto g = bench_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_curves_serial(g));
}

void BM_curves_openmp(benchmark::State& state) {
  const auto g = bench_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_curves(g));
}

}  // namespace

BENCHMARK(BM_verify_serial)->Arg(100)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_verify_openmp)->Arg(100)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_dp_oracle_serial)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_dp_oracle_openmp)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_curves_serial)->Arg(50)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_curves_openmp)->Arg(50)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
