#include <cmath>

#include <benchmark/benchmark.h>

#include "tgf/catalog.hpp"
#include "tgf/charts.hpp"
#include "tgf/goursat.hpp"

using namespace tgf;

namespace {

void BM_JetSeedAndSine(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const std::vector<double> p{0.3, -0.2, 0.1};
  for (auto _ : state) {
    const JetVector x = seed(p, order);
    benchmark::DoNotOptimize(sin(x[0] * x[1]) + exp(x[2]));
  }
}
BENCHMARK(BM_JetSeedAndSine)->Arg(1)->Arg(2)->Arg(3);

void BM_GoursatSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  GoursatProblem gp;
  gp.u = {0, 1};
  gp.v = {0, 1};
  gp.a = [](double, double) { return 0.0; };
  gp.b = [](double u, double v) { return -(1 + u * v); };
  gp.data_u = gp.data_v = [](double) { return 1.0; };
  for (auto _ : state) benchmark::DoNotOptimize(solve_goursat(gp, n, n));
  state.SetComplexityN(n * n);
}
BENCHMARK(BM_GoursatSolve)->Arg(41)->Arg(81)->Arg(161)->Complexity(benchmark::oN);

void BM_GaussResidualsPerSample(benchmark::State& state) {
  const Example ex = catalog::named("typed_euclidean_clifford", true);
  const GaussChart& gc = *ex.gauss;
  std::size_t i = 0;
  for (auto _ : state) {
    while (!gc.regular[i % gc.samples.size()]) ++i;
    benchmark::DoNotOptimize(gauss_residuals(gc, gc.samples[i++ % gc.samples.size()]));
  }
}
BENCHMARK(BM_GaussResidualsPerSample)->Unit(benchmark::kMicrosecond);

void BM_Trichotomy(benchmark::State& state) {
  const Example ex = catalog::named("typed_euclidean_clifford", true);
  for (auto _ : state) benchmark::DoNotOptimize(trichotomy_classify(ex.data, ex.dist));
  state.counters["samples"] = static_cast<double>(ex.data.samples.size());
}
BENCHMARK(BM_Trichotomy)->Unit(benchmark::kMillisecond);

void BM_LeafShoot(benchmark::State& state) {
  const Example ex = catalog::named("ruled_helicoid_r4", true);
  const auto c = ex.data.f.center();
  for (auto _ : state) benchmark::DoNotOptimize(leaf_shoot(ex.data, ex.dist, c, Vec::Unit(3, 1), 0.4));
}
BENCHMARK(BM_LeafShoot)->Unit(benchmark::kMillisecond);

void BM_PolarClifford(benchmark::State& state) {
  const auto g = charts::clifford_torus(4);
  for (auto _ : state) benchmark::DoNotOptimize(polar_construction(g));
}
BENCHMARK(BM_PolarClifford)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
