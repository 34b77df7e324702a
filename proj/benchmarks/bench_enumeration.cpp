#include <benchmark/benchmark.h>

#include "etm/exact_family.hpp"

using namespace etm;

static void EnumerateSupport(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_support(n));
  }
}
BENCHMARK(EnumerateSupport)->DenseRange(4, 7);

static void ExactFamily(benchmark::State& state) {
  const SupportTable table = enumerate_support(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_family(table, 0.7, -1.3));
  }
}
BENCHMARK(ExactFamily)->Arg(6)->Arg(7);

static void ConvexSupport(benchmark::State& state) {
  const SupportTable table = enumerate_support(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(convex_support(table));
  }
}
BENCHMARK(ConvexSupport);

static void NuTuran(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(nu_turan(static_cast<int>(state.range(0)), 4));
  }
}
BENCHMARK(NuTuran)->Arg(30)->Arg(120);

BENCHMARK_MAIN();
