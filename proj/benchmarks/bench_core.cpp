#include "curvedborn/curvedborn.hpp"

#include <benchmark/benchmark.h>

using namespace curvedborn;

static void BM_BornProbability(benchmark::State& state) {
  const Spacetime st = minkowski(3);
  const CurrentSpec c = boosted_gaussian_current(st, make_vec({0.5, 0.0}), 1.0);
  const ParametrizedHypersurface h = time_slice(3, 0.0, 8.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(born_probability(st, c.current, h).value);
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_BornProbability)->RangeMultiplier(2)->Range(8, 64)->Complexity(benchmark::oN);

static void BM_RK4(benchmark::State& state) {
  const VectorField x = example1_field(1.0);
  const Vec p = make_vec({0.0, 1.0, 0.5});
  for (auto _ : state) benchmark::DoNotOptimize(rk4_integrate(x, p, 1.0, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RK4)->Arg(1000)->Arg(10000);

static void BM_LightlikeCrossing(benchmark::State& state) {
  const Spacetime st = minkowski(3);
  const Integrator integrator = state.range(0) ? Integrator::RK4 : Integrator::AnalyticIfAvailable;
  const FlowMap fm{example1_field(1.0), integrator, 1e-3};
  const ParametrizedHypersurface disk = disk_polar(3.0, 4, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lightlike_crossing(st, fm, disk, make_vec({2.0, 0.0}), make_vec({1.0, 0.0}), 4.0));
  }
}
BENCHMARK(BM_LightlikeCrossing)->Arg(0)->Arg(1);

static void BM_ConservationSweep(benchmark::State& state) {
  const Spacetime st = minkowski(3);
  const CurrentSpec c = boosted_gaussian_current(st, make_vec({0.5, 0.0}), 1.0);
  const ParametrizedHypersurface h = time_slice(3, 0.0, 8.0, 16);
  const std::vector<double> taus{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
  for (auto _ : state) benchmark::DoNotOptimize(conservation_sweep(st, c, h, taus).max_drift);
}
BENCHMARK(BM_ConservationSweep);
BENCHMARK_MAIN();
