#include <benchmark/benchmark.h>

#include "etm/graph.hpp"
#include "etm/mcmc.hpp"

using namespace etm;

namespace {

Graph random_graph(int n, double p, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform01() < p) g.set_edge(i, j, true);
  return g;
}

}  // namespace

static void TriangleCount(benchmark::State& state) {
  const Graph g = random_graph(static_cast<int>(state.range(0)), 0.5, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.triangle_count());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(TriangleCount)->RangeMultiplier(2)->Range(32, 512)->Complexity();

static void CommonNeighbors(benchmark::State& state) {
  const Graph g = random_graph(static_cast<int>(state.range(0)), 0.5, 2);
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.common_neighbors(i, (i + 1) % g.size()));
    i = (i + 1) % (g.size() - 1);
  }
}
BENCHMARK(CommonNeighbors)->Arg(64)->Arg(256)->Arg(1024);

static void FlipEdge(benchmark::State& state) {
  Graph g = random_graph(static_cast<int>(state.range(0)), 0.5, 3);
  SplitMix64 rng(4);
  const int n = g.size();
  for (auto _ : state) {
    const int i = static_cast<int>(rng.below(n));
    int j = static_cast<int>(rng.below(n - 1));
    if (j >= i) ++j;
    benchmark::DoNotOptimize(g.flip_edge(i, j));
  }
}
BENCHMARK(FlipEdge)->Arg(30)->Arg(256);

static void PartitionRecovery(benchmark::State& state) {
  const Graph g = turan_graph(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(partition_recovery(g));
  }
}
BENCHMARK(PartitionRecovery)->Arg(30)->Arg(120);

BENCHMARK_MAIN();
