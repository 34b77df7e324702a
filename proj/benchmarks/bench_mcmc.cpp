#include <benchmark/benchmark.h>

#include "etm/geometry.hpp"
#include "etm/mcmc.hpp"

using namespace etm;

static void MetropolisStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  MetropolisSampler sampler(turan_graph(n, 4), 80, -40);
  SplitMix64 rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.step(rng));
  }
}
BENCHMARK(MetropolisStep)->Arg(30)->Arg(128)->Arg(512);

static void RazborovLower(benchmark::State& state) {
  double e = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(razborov_lower(e));
    e += 1e-7;
    if (e >= 1.0) e = 0.5;
  }
}
BENCHMARK(RazborovLower);

static void ClassifyDirection(benchmark::State& state) {
  double y = -0.4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_direction(1.0, y));
    y -= 1e-6;
    if (y <= -1.0) y = -0.4;
  }
}
BENCHMARK(ClassifyDirection);

static void TuranModeCheck(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(turan_mode_check(30, 80, -40));
  }
}
BENCHMARK(TuranModeCheck);

BENCHMARK_MAIN();
