// Serial reference loops against the OpenMP kernels. Run with
// ENTMEAS_THREADS unset to use every core.

#include <benchmark/benchmark.h>

#include "entmeas/locc.hpp"
#include "entmeas/random.hpp"
#include "entmeas/variational.hpp"

using namespace entmeas;

namespace {

Execution policy(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "openmp"); }

void BM_GeometricRestarts(benchmark::State& state) {
  Rng rng = make_stream(1, 0);
  const auto psi = random_pure_state(rng, {2, 2, 2, 2});
  SolverConfig cfg;
  cfg.execution = policy(state);
  cfg.restarts = 64;
  for (auto _ : state) benchmark::DoNotOptimize(geometric_measure(psi, cfg).value);
  label(state);
}

void BM_CatalysisGrid(benchmark::State& state) {
  const std::vector<double> source{1.0, 0.0};
  // Entropy would have to grow, so no catalyst exists and the whole simplex is scanned.
  const std::vector<double> target{0.5, 0.5};
  CatalysisOptions options;
  options.catalyst_rank = 3;
  options.grid_resolution = 120;
  options.execution = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(catalysis_search(source, target, options).candidates_checked);
  label(state);
}

void BM_ConvexRoof(benchmark::State& state) {
  Rng rng = make_stream(2, 0);
  const auto rho = random_density(rng, {2, 2}, 3);
  SolverConfig cfg;
  cfg.execution = policy(state);
  cfg.restarts = 16;
  for (auto _ : state) benchmark::DoNotOptimize(eof_convex_roof(rho, default_cut(), std::nullopt, cfg).value);
  label(state);
}

}  // namespace

BENCHMARK(BM_GeometricRestarts)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CatalysisGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvexRoof)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
