#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "etm/exact_family.hpp"
#include "etm/geometry.hpp"
#include "etm/graph.hpp"
#include "etm/mcmc.hpp"

using namespace etm;

namespace {

Graph random_graph(int n, double p, SplitMix64& rng) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform01() < p) g.set_edge(i, j, true);
  return g;
}

}  // namespace

TEST_CASE("densities of named graphs") {
  const Graph k6 = turan_graph(6, 6);
  const DensityPoint d = densities(k6);
  CHECK(d.e == Rational(5, 6));
  CHECK(d.t == Rational(5, 9));

  const Graph empty(9);
  CHECK(densities(empty).e == 0);
  CHECK(densities(empty).t == 0);

  const Graph k33 = turan_graph(6, 2);
  CHECK(k33.edge_count() == 9);
  CHECK(k33.triangle_count() == 0);
  CHECK(densities(k33).e == Rational(1, 2));
}

TEST_CASE("complete graph counts are binomials") {
  for (int n = 2; n <= 12; ++n) {
    const Graph kn = turan_graph(n, n);
    CHECK(kn.edge_count() == n * (n - 1) / 2);
    CHECK(kn.triangle_count() == static_cast<std::int64_t>(n) * (n - 1) * (n - 2) / 6);
  }
}

TEST_CASE("turan graph construction") {
  const Graph t63 = turan_graph(6, 3);
  CHECK(t63.edge_count() == 12);
  CHECK(t63.triangle_count() == 8);
  CHECK(turan_graph(5, 1).edge_count() == 0);

  CHECK_THROWS_AS(turan_graph(6, 0), std::domain_error);
  CHECK_THROWS_AS(turan_graph(6, 7), std::domain_error);
}

TEST_CASE("closed-form turan densities match built graphs exactly") {
  for (int n = 2; n <= 60; ++n) {
    for (int r = 1; r <= n; ++r) {
      const auto [e, t] = turan_counts(n, r);
      const Graph g = turan_graph(n, r);
      REQUIRE(e == g.edge_count());
      REQUIRE(t == g.triangle_count());
      REQUIRE(turan_densities(n, r) == densities(g));
    }
  }
}

TEST_CASE("common neighbors") {
  const Graph k4 = turan_graph(4, 4);
  CHECK(k4.common_neighbors(0, 3) == 2);
  const Graph empty(5);
  CHECK(empty.common_neighbors(1, 4) == 0);
  // K_{2,2,2}: a cross pair shares exactly the remaining class
  const Graph t63 = turan_graph(6, 3);
  CHECK(t63.common_neighbors(0, 1) == 2);
  CHECK_THROWS_AS(t63.common_neighbors(2, 2), std::domain_error);
}

TEST_CASE("flip_edge deltas") {
  Graph g(5);
  auto d = g.flip_edge(0, 1);
  CHECK(d.d_edges == 1);
  CHECK(d.d_triangles == 0);

  Graph k4 = turan_graph(4, 4);
  d = k4.flip_edge(1, 2);
  CHECK(d.d_edges == -1);
  CHECK(d.d_triangles == -2);
  CHECK(k4.triangle_count() == 2);

  CHECK_THROWS_AS(g.flip_edge(3, 3), std::domain_error);
}

TEST_CASE("flip_edge delta equals full recount, exhaustively for n <= 7") {
  for (int n = 3; n <= 7; ++n) {
    // the walk maintains T through flip deltas; recount every state
    std::int64_t bad = 0;
    for_each_labeled_graph(n, [&](const Graph& g, std::int64_t, std::int64_t t) {
      if (g.triangle_count() != t) ++bad;
    });
    REQUIRE(bad == 0);
  }
}

TEST_CASE("flip_edge delta equals recount on random graphs up to n = 64") {
  SplitMix64 rng(31337);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 8 + static_cast<int>(rng.below(57));  // 8..64
    Graph g = random_graph(n, 0.2 + 0.6 * rng.uniform01(), rng);
    std::int64_t t = g.triangle_count();
    for (int f = 0; f < 8; ++f) {
      const int i = static_cast<int>(rng.below(n));
      int j = static_cast<int>(rng.below(n - 1));
      if (j >= i) ++j;
      const auto d = g.flip_edge(i, j);
      t += d.d_triangles;
      REQUIRE(g.triangle_count() == t);
    }
  }
}

TEST_CASE("every sampled graph stays inside the feasible density region") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(40));
    const Graph g = random_graph(n, rng.uniform01(), rng);
    const DensityPoint d = densities(g);
    const double e = d.ef(), t = d.tf();
    CHECK(t <= kk_upper(e) + 1e-12);
    CHECK(t >= razborov_lower(e) - 1e-12);
  }
}

TEST_CASE("partition recovery") {
  const Partition exact = partition_recovery(turan_graph(30, 4));
  CHECK(exact.classes.size() == 4);
  CHECK(exact.misfit == 0.0);

  const Partition complete = partition_recovery(turan_graph(7, 7));
  CHECK(complete.classes.size() == 7);
  CHECK(complete.misfit == 0.0);

  // removing 5 edges leaves at most 10 inconsistent pairs
  Graph g = turan_graph(30, 4);
  SplitMix64 rng(11);
  int removed = 0;
  while (removed < 5) {
    const int i = static_cast<int>(rng.below(30));
    int j = static_cast<int>(rng.below(29));
    if (j >= i) ++j;
    if (!g.has_edge(i, j)) continue;
    g.set_edge(i, j, false);
    ++removed;
  }
  const Partition noisy = partition_recovery(g);
  CHECK(noisy.misfit <= 10.0 / (30.0 * 29 / 2));
}

TEST_CASE("edge list round trip") {
  SplitMix64 rng(99);
  const Graph g = random_graph(17, 0.4, rng);
  std::stringstream ss;
  write_edge_list(ss, g);
  const Graph back = read_edge_list(ss);
  CHECK(back == g);
}

TEST_CASE("hex dump round trip is exact") {
  SplitMix64 rng(100);
  for (const int n : {2, 30, 64, 65, 130}) {
    const Graph g = random_graph(n, 0.5, rng);
    std::stringstream ss;
    write_hex_dump(ss, g);
    CHECK(read_hex_dump(ss) == g);
  }
}

TEST_CASE("graph rejects degenerate input") {
  CHECK_THROWS_AS(Graph(1), std::domain_error);
  Graph g(4);
  CHECK_THROWS_AS(g.set_edge(0, 4, true), std::domain_error);
  CHECK_THROWS_AS(g.has_edge(-1, 2), std::domain_error);
}
