#include <benchmark/benchmark.h>

#include "tracelab/harness.hpp"
#include "tracelab/identities.hpp"
#include "tracelab/inequalities.hpp"
#include "tracelab/rng.hpp"
#include "tracelab/spectral.hpp"

using namespace tracelab;

namespace {

AlgebraPtr bench_algebra(int dim) { return make_algebra({{dim, 1.0}, {dim, 0.5}}); }

void BM_SingularValues(benchmark::State& state) {
  const auto a = bench_algebra(static_cast<int>(state.range(0)));
  CounterRng rng(7);
  const auto x = random_element(a, rng);
  for (auto _ : state) benchmark::DoNotOptimize(singular_values(x));
}
BENCHMARK(BM_SingularValues)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_TraceFunctionSpectral(benchmark::State& state) {
  const auto a = bench_algebra(static_cast<int>(state.range(0)));
  CounterRng rng(11);
  const auto x = random_element(a, rng);
  const ScalarFunction f = ScalarFunction::power(3);
  for (auto _ : state) benchmark::DoNotOptimize(trace_function_spectral(f, x));
}
BENCHMARK(BM_TraceFunctionSpectral)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_ResidualIbk(benchmark::State& state) {
  const auto a = bench_algebra(4);
  CounterRng rng(13);
  const int n = static_cast<int>(state.range(0));
  std::vector<AlgebraElement> xs;
  for (int i = 0; i < n; ++i) xs.push_back(random_element(a, rng));
  for (auto _ : state) benchmark::DoNotOptimize(residual_ibk(xs));
}
BENCHMARK(BM_ResidualIbk)->Arg(2)->Arg(3)->Arg(5);

void BM_WeightedClarksonTrial(benchmark::State& state) {
  const auto a = bench_algebra(static_cast<int>(state.range(0)));
  CounterRng rng(17);
  std::vector<AlgebraElement> xs;
  for (int i = 0; i < 3; ++i) xs.push_back(random_element(a, rng));
  const auto w = random_weights(3, ConstraintMode::SumOne, rng);
  const ScalarFunction phi = ScalarFunction::power(4);
  for (auto _ : state)
    benchmark::DoNotOptimize(check_weighted_clarkson("mt1", phi, xs, w, Tolerance{}, {}));
}
BENCHMARK(BM_WeightedClarksonTrial)->Arg(2)->Arg(4)->Arg(8);

void BM_Campaign(benchmark::State& state) {
  TrialConfig config;
  config.trials = static_cast<int>(state.range(0));
  config.master_seed = 23;
  config.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_campaign(config, {"mt1"}));
}
BENCHMARK(BM_Campaign)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
