#include <benchmark/benchmark.h>

#include "chainent/analysis.hpp"
#include "chainent/entanglement.hpp"
#include "chainent/ermakov.hpp"

using namespace chainent;

namespace {

ChainSpec fig3_chain(int n) { return {n, 3.0, 0.01, 2.0, 2.5, Boundary::periodic}; }

void BM_EntropySeries(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChainSpec spec = fig3_chain(n);
  const Partition p = Partition::second_half(n);
  const TimeGrid grid = TimeGrid::span(100.0, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(entropy_series(spec, ChainQuench::sudden(), p, grid, {1, 2}));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.count));
}
BENCHMARK(BM_EntropySeries)->Arg(2)->Arg(4)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_EntropySeriesThreads(benchmark::State& state) {
  const ChainSpec spec = fig3_chain(20);
  const TimeGrid grid = TimeGrid::span(100.0, 0.1);
  const PipelineOptions options{static_cast<unsigned>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        entropy_series(spec, ChainQuench::sudden(), Partition::second_half(20), grid, {1}, options));
  }
}
BENCHMARK(BM_EntropySeriesThreads)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SuddenMode(benchmark::State& state) {
  const ModeSolution mode = solve_sudden(9.0, 0.0225);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mode.at(t));
    t += 0.01;
  }
}
BENCHMARK(BM_SuddenMode);

void BM_IntegrateGeneral(benchmark::State& state) {
  ModeProtocol protocol;
  protocol.lambda_initial = 9.0;
  protocol.times = {0.0, 5.0};
  protocol.lambdas = {1.0, 0.0225};
  protocol.interpolation = Interpolation::linear;
  const TimeGrid grid = TimeGrid::span(50.0, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_general(protocol, grid, 1e-10));
}
BENCHMARK(BM_IntegrateGeneral)->Unit(benchmark::kMillisecond);

void BM_ExtractPeriods(benchmark::State& state) {
  const ChainSpec spec{2, 1.0, 0.15, 12.0, 8.6, Boundary::open};
  const auto series = entropy_series(spec, ChainQuench::sudden(), Partition::second_half(2),
                                     TimeGrid::span(1000.0, 0.05), {1});
  for (auto _ : state) benchmark::DoNotOptimize(extract_periods(series, 2));
}
BENCHMARK(BM_ExtractPeriods)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
