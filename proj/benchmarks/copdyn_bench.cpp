#include <benchmark/benchmark.h>

#include "copdyn/copula.hpp"
#include "copdyn/gaussian.hpp"
#include "copdyn/synth.hpp"
#include "copdyn/taildep.hpp"

namespace {

copdyn::ReturnMatrix panel(std::size_t k, std::size_t t) {
  copdyn::SynthSpec spec;
  spec.assets = k;
  spec.length = t;
  spec.correlation = 0.3;
  spec.seed = 1;
  return copdyn::sample_panel(spec);
}

void BM_AveragePairwiseDensity(benchmark::State& state) {
  const auto m = panel(static_cast<std::size_t>(state.range(0)), 3000);
  for (auto _ : state) benchmark::DoNotOptimize(copdyn::average_pairwise_density(m, 50));
  state.SetItemsProcessed(state.iterations() * state.range(0) * (state.range(0) - 1) / 2);
}
BENCHMARK(BM_AveragePairwiseDensity)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_EmpiricalCopulaDensity(benchmark::State& state) {
  const auto [x, y] = copdyn::sample_bivariate_gaussian(0.5, static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(copdyn::empirical_copula_density(x, y, 50));
}
BENCHMARK(BM_EmpiricalCopulaDensity)->Arg(3000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_BivariateNormalCdf(benchmark::State& state) {
  const double c = static_cast<double>(state.range(0)) / 100.0;
  double x = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(copdyn::bivariate_normal_cdf(x, 0.3, c));
    x = x > 2.0 ? -2.0 : x + 0.01;
  }
}
BENCHMARK(BM_BivariateNormalCdf)->Arg(0)->Arg(50)->Arg(95)->Arg(-90);

void BM_GaussianGrid(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(copdyn::gaussian_grid(0.5, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_GaussianGrid)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_PearsonMatrix(benchmark::State& state) {
  const auto m = panel(100, 3000);
  for (auto _ : state) benchmark::DoNotOptimize(copdyn::pearson_matrix(m));
}
BENCHMARK(BM_PearsonMatrix)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
