#include <benchmark/benchmark.h>

#include "chainent/entanglement.hpp"
#include "chainent/oracles.hpp"

using namespace chainent;

namespace {

void BM_CovarianceEntropy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChainSpec spec{n, 3.0, 0.01, 2.0, 2.5, Boundary::periodic};
  const Partition p = Partition::second_half(n);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(covariance_entropy(spec, p, t, {1, 2}));
    t += 0.1;
  }
}
BENCHMARK(BM_CovarianceEntropy)->Arg(4)->Arg(10)->Arg(20);

void BM_KernelSpectrum(benchmark::State& state) {
  // Single-site reduction of the omega_BH(i) = 3, J = 2 pair at t = 0.
  const TwoSiteReduction r = two_site_reduction(1.0, 5.0, {1.0, 0.0}, {1.0, 0.0});
  const double g = r.gamma, b = r.beta;
  const KernelGrid grid{KernelGrid::defaults(g, b).extent, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(kernel_spectrum(g, b, 0.3, grid, 5));
}
BENCHMARK(BM_KernelSpectrum)->Arg(401)->Arg(801)->Unit(benchmark::kMillisecond);

}  // namespace
