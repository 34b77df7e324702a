#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "etm/exact_family.hpp"
#include "etm/geometry.hpp"
#include "etm/mcmc.hpp"

using namespace etm;

TEST_CASE("enumerate_support small cases") {
  const SupportTable t3 = enumerate_support(3);
  REQUIRE(t3.entries.size() == 4);
  CHECK(t3.find(0, 0)->count == 1);
  CHECK(t3.find(1, 0)->count == 3);
  CHECK(t3.find(2, 0)->count == 3);
  CHECK(t3.find(3, 1)->count == 1);

  CHECK(enumerate_support(5).total_count() == 1024);
  CHECK(enumerate_support(6).total_count() == 32768);

  CHECK_THROWS(enumerate_support(8));   // needs the explicit flag
  CHECK_THROWS(enumerate_support(9));   // beyond the hard cap
  CHECK_THROWS(enumerate_support(1));
}

TEST_CASE("parallel enumeration merges deterministically") {
  const SupportTable serial = enumerate_support(6);
  EnumerateOptions opts;
  opts.threads = 4;
  opts.allow_large = true;  // force the threaded path despite small n
  SupportTable parallel = enumerate_support(6, opts);
  REQUIRE(serial.entries.size() == parallel.entries.size());
  for (std::size_t i = 0; i < serial.entries.size(); ++i) {
    CHECK(serial.entries[i].edges == parallel.entries[i].edges);
    CHECK(serial.entries[i].triangles == parallel.entries[i].triangles);
    CHECK(serial.entries[i].count == parallel.entries[i].count);
  }
}

TEST_CASE("support points satisfy the density-region bounds") {
  const SupportTable table = enumerate_support(6);
  for (const auto& entry : table.entries) {
    const DensityPoint p = table.point(entry);
    CHECK(p.tf() <= kk_upper(p.ef()) + 1e-12);
    CHECK(p.tf() >= razborov_lower(p.ef()) - 1e-12);
  }
}

TEST_CASE("convex hull of the support") {
  const SupportTable t6 = enumerate_support(6);
  const auto hull6 = convex_support(t6);
  REQUIRE(hull6.size() == 4);
  CHECK(hull6[0] == extreme_point(0));
  CHECK(hull6[1] == extreme_point(1));
  CHECK(hull6[2] == extreme_point(2));
  CHECK(hull6[3] == turan_densities(6, 6));

  // n = 4: vertices are turan points with the collinear tail collapsed
  const auto hull4 = convex_support(enumerate_support(4));
  REQUIRE(hull4.size() == 3);
  CHECK(hull4[0] == turan_densities(4, 1));
  CHECK(hull4[1] == turan_densities(4, 2));
  CHECK(hull4[2] == turan_densities(4, 4));
}

TEST_CASE("exact_family probabilities") {
  const SupportTable t3 = enumerate_support(3);
  const FiniteFamily uniform = exact_family(t3, 0, 0);
  CHECK(uniform.prob(1, 0) == doctest::Approx(3.0 / 8).epsilon(1e-14));
  CHECK(uniform.prob(3, 1) == doctest::Approx(1.0 / 8).epsilon(1e-14));
  CHECK(uniform.prob(5, 0) == 0.0);

  double total = 0;
  for (const double p : uniform.probs) total += p;
  CHECK(std::abs(total - 1.0) < 1e-12);

  // at beta2 = 0 edges are iid, so the mean density is (n-1)/n * logistic(2 b1)
  const FiniteFamily strong = exact_family(enumerate_support(5), 5, 0);
  CHECK(strong.mean().first ==
        doctest::Approx(0.8 / (1.0 + std::exp(-10.0))).epsilon(1e-12));
  CHECK(strong.mean().first / 0.8 > 0.99);  // fraction of present edges
}

TEST_CASE("normalization across random parameters") {
  const SupportTable t5 = enumerate_support(5);
  SplitMix64 rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    const double b1 = 6 * rng.uniform01() - 3;
    const double b2 = 6 * rng.uniform01() - 3;
    const FiniteFamily fam = exact_family(t5, b1, b2);
    double total = 0;
    for (const double p : fam.probs) total += p;
    REQUIRE(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("mean value lies strictly inside the hull") {
  const SupportTable t6 = enumerate_support(6);
  const auto hull = convex_support(t6);
  SplitMix64 rng(505);
  for (int trial = 0; trial < 30; ++trial) {
    const double b1 = 6 * rng.uniform01() - 3;
    const double b2 = 6 * rng.uniform01() - 3;
    const auto [me, mt] = exact_family(t6, b1, b2).mean();
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const auto& a = hull[i];
      const auto& b = hull[(i + 1) % hull.size()];
      const double cross = (b.ef() - a.ef()) * (mt - a.tf()) - (b.tf() - a.tf()) * (me - a.ef());
      REQUIRE(cross > 0);  // strictly left of every CCW hull edge
    }
  }
}

TEST_CASE("log-normalizer is convex on a grid (n=5)") {
  // Directional second differences of a convex function are nonnegative; the
  // four directions cover the 2x2 second-difference matrix without the
  // cancellation-prone determinant.
  const SupportTable t5 = enumerate_support(5);
  const double h = 0.125;
  const auto psi = [&](double b1, double b2) { return exact_family(t5, b1, b2).log_normalizer; };
  for (double b1 = -1; b1 <= 1; b1 += 0.25) {
    for (double b2 = -1; b2 <= 1; b2 += 0.25) {
      const double mid = psi(b1, b2);
      CHECK(psi(b1 + h, b2) + psi(b1 - h, b2) - 2 * mid >= -1e-9);
      CHECK(psi(b1, b2 + h) + psi(b1, b2 - h) - 2 * mid >= -1e-9);
      CHECK(psi(b1 + h, b2 + h) + psi(b1 - h, b2 - h) - 2 * mid >= -1e-9);
      CHECK(psi(b1 + h, b2 - h) + psi(b1 - h, b2 + h) - 2 * mid >= -1e-9);
    }
  }
}

TEST_CASE("nu_turan closed form") {
  CHECK(nu_turan(6, 2) == 10);
  CHECK(nu_turan(6, 3) == 15);
  CHECK(nu_turan(9, 1) == 1);
  CHECK(nu_turan(9, 9) == 1);
  CHECK(nu_turan(30, 4) == BigInt("1605824071780500"));  // 30!/(8!^2 7!^2 2! 2!)
  CHECK_THROWS_AS(nu_turan(5, 6), std::domain_error);

  for (int n = 2; n <= 40; ++n) {
    for (int r = 1; r <= n; ++r) {
      CHECK(log_nu_turan(n, r) ==
            doctest::Approx(log_big(nu_turan(n, r))).epsilon(1e-10));
    }
  }
}

TEST_CASE("nu_turan matches exhaustive isomorphic counts for n <= 7") {
  for (int n = 4; n <= 7; ++n) {
    // target statistic points per class count
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<int>> targets;
    for (int r = 1; r <= n; ++r) targets[turan_counts(n, r)].push_back(r);

    std::map<int, std::int64_t> iso_counts;
    for_each_labeled_graph(n, [&](const Graph& g, std::int64_t e, std::int64_t t) {
      const auto it = targets.find({e, t});
      if (it == targets.end()) return;
      const Partition p = partition_recovery(g);
      if (p.misfit != 0.0) return;
      std::vector<int> sizes;
      for (const auto& cls : p.classes) sizes.push_back(static_cast<int>(cls.size()));
      std::sort(sizes.begin(), sizes.end(), std::greater<>());
      for (const int r : it->second) {
        // compare against the turan class sizes for this r
        std::vector<int> want;
        for (int c = 0; c < r; ++c) want.push_back(n / r + (c < n % r ? 1 : 0));
        std::sort(want.begin(), want.end(), std::greater<>());
        if (sizes == want) iso_counts[r] += 1;
      }
    });
    for (int r = 1; r <= n; ++r) {
      REQUIRE(BigInt(iso_counts[r]) == nu_turan(n, r));
    }
  }
}

TEST_CASE("statistic counts at the facet endpoints equal the isomorphic counts (n=6)") {
  // The family restricted to the facet weighs points by the raw statistic
  // count; at n=6 no non-turan graph shares those statistics.
  const SupportTable t6 = enumerate_support(6);
  CHECK(t6.find(9, 0)->count == 10);
  CHECK(t6.find(12, 8)->count == 15);
  CHECK(nu_turan(6, 2) == 10);
  CHECK(nu_turan(6, 3) == 15);
}

TEST_CASE("triangle-free mass off bipartite graphs shrinks with the edge field") {
  // Measured, not assumed: under the triangle-free family most weight sits on
  // bipartite graphs once the edge field is positive.
  for (const int n : {6, 7}) {
    std::vector<double> fractions;
    for (const double b1 : {0.0, 1.0, 3.0}) {
      double bip = 0, nonbip = 0;
      for_each_labeled_graph(n, [&](const Graph& g, std::int64_t e, std::int64_t t) {
        if (t != 0) return;
        const double w = std::exp(2 * b1 * static_cast<double>(e) - 2 * b1 * n);
        // 2-color BFS; triangle-free does not imply bipartite (C_5)
        std::vector<int> color(n, -1);
        bool ok = true;
        for (int s = 0; s < n && ok; ++s) {
          if (color[s] != -1) continue;
          color[s] = 0;
          std::vector<int> stack{s};
          while (!stack.empty() && ok) {
            const int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v) {
              if (v == u || !g.has_edge(u, v)) continue;
              if (color[v] == -1) {
                color[v] = 1 - color[u];
                stack.push_back(v);
              } else if (color[v] == color[u]) {
                ok = false;
                break;
              }
            }
          }
        }
        (ok ? bip : nonbip) += w;
      });
      fractions.push_back(nonbip / (bip + nonbip));
    }
    CHECK(fractions[0] < 0.5);
    CHECK(fractions[1] < fractions[0]);
    CHECK(fractions[2] < fractions[1]);
    CHECK(fractions[2] < 0.01);
  }
}

TEST_CASE("closure_two_point at n=6, k=1") {
  const TwoPointFamily fam = closure_two_point(6, 1, 0, 0);
  CHECK(fam.count_low == 10);
  CHECK(fam.count_high == 15);
  CHECK(fam.p_low == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(fam.p_high == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(fam.exponent == 0);

  const TwoPointFamily strong = closure_two_point(6, 1, 10, -6);
  CHECK(strong.p_high > 0.999);
  // exponent is exactly n^2 <v_2 - v_1, beta> = 36 * (10/6 - 12/9) = 12
  CHECK(strong.exponent == 12);

  CHECK_THROWS_AS(closure_two_point(7, 1, 0, 0), std::domain_error);
  CHECK_THROWS_AS(closure_two_point(12, 0, 0, 0), std::domain_error);
}

TEST_CASE("two-point family depends on beta only through the facet projection") {
  SplitMix64 rng(321);
  const Vec2 o1 = critical_direction(1);
  for (int trial = 0; trial < 100; ++trial) {
    const double b1 = 8 * rng.uniform01() - 4;
    const double b2 = 8 * rng.uniform01() - 4;
    const double c = 20 * rng.uniform01() - 10;
    const TwoPointFamily base = closure_two_point(6, 1, b1, b2);
    const TwoPointFamily shifted =
        closure_two_point(6, 1, b1 + c * to_double(o1.x), b2 + c * to_double(o1.y));
    // reduced parameter <l~_1, beta> must agree exactly whenever the shift
    // c*o_1 is exactly representable, which holds for c*3/4 dyadic
    const Rational cr = rational_from_double(c);
    const Rational b2r = rational_from_double(b2);
    if (rational_from_double(b2 + c * to_double(o1.y)) == b2r + cr * o1.y &&
        rational_from_double(b1 + c * to_double(o1.x)) == rational_from_double(b1) + cr * o1.x) {
      REQUIRE(base.reduced == shifted.reduced);
      REQUIRE(base.p_low == shifted.p_low);
      REQUIRE(base.p_high == shifted.p_high);
    }
  }
  // integer shifts are always exact
  const TwoPointFamily a = closure_two_point(6, 1, 2, -3);
  const TwoPointFamily b = closure_two_point(6, 1, 2 + 4, -3 - 3);  // +4*o_1 = (4, -3)
  CHECK(a.reduced == b.reduced);
  CHECK(a.p_low == b.p_low);
}

TEST_CASE("edge_complete_family") {
  const Distribution even = edge_complete_family(9, 0, 0);
  CHECK(even.atoms[0].prob == 0.5);
  CHECK(even.atoms[1].prob == 0.5);

  const Distribution d = edge_complete_family(6, 1, -1);
  // exponent 30 - 20 = 10
  CHECK(d.atoms[1].prob == doctest::Approx(std::exp(10.0) / (1 + std::exp(10.0))).epsilon(1e-15));
  CHECK(d.atoms[0].edges == 0);
  CHECK(d.atoms[1].edges == 15);
  CHECK(d.atoms[1].triangles == 20);

  // uniform exactly when the exponent vanishes: beta = (t, -n t / (n-2))
  const Distribution balanced = edge_complete_family(6, 2, -3);
  CHECK(balanced.atoms[0].prob == 0.5);
}

TEST_CASE("triangle_free_family") {
  const SupportTable t3 = enumerate_support(3);
  const Distribution q = triangle_free_family(t3, 0);
  REQUIRE(q.atoms.size() == 3);
  CHECK(q.atoms[0].prob == doctest::Approx(1.0 / 7).epsilon(1e-14));
  CHECK(q.atoms[1].prob == doctest::Approx(3.0 / 7).epsilon(1e-14));
  CHECK(q.atoms[2].prob == doctest::Approx(3.0 / 7).epsilon(1e-14));

  const SupportTable t6 = enumerate_support(6);
  const Distribution strong = triangle_free_family(t6, 5);
  double at_max = 0;
  for (const auto& a : strong.atoms)
    if (a.edges == 9) at_max = a.prob;
  CHECK(at_max > 0.999);

  // mass collapses onto the empty graph as beta1 -> -inf
  const Distribution weak = triangle_free_family(t6, -10);
  CHECK(weak.atoms[0].edges == 0);
  CHECK(weak.atoms[0].prob > 0.999999);
}

TEST_CASE("tv distance") {
  Distribution a{6, {{0, 0, 0.5}, {9, 0, 0.5}}};
  CHECK(tv_distance(a, a) == 0.0);
  Distribution b{6, {{12, 8, 1.0}}};
  CHECK(tv_distance(a, b) == 1.0);
  Distribution c{6, {{0, 0, 0.4}, {12, 8, 0.6}}};
  Distribution point{6, {{0, 0, 1.0}}};
  CHECK(tv_distance(point, c) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("closure limit along the critical ray equals the two-point family") {
  const SupportTable t6 = enumerate_support(6);
  const Distribution limit = closure_limit_family(t6, 1, 1, critical_direction(1));
  const Distribution two_point = closure_two_point(6, 1, 1, 1).distribution();
  CHECK(tv_distance(limit, two_point) < 1e-15);
}

TEST_CASE("closure convergence along o_1") {
  const SupportTable t6 = enumerate_support(6);
  const std::vector<double> rs{0, 5, 10, 20, 40};
  const auto tvs = closure_convergence_check(t6, 1, 1, critical_direction(1), rs);
  REQUIRE(tvs.size() == 5);
  CHECK(tvs[0] > 0.0);
  CHECK(tvs[0] < 1.0);
  for (std::size_t i = 1; i < tvs.size(); ++i) CHECK(tvs[i] < tvs[i - 1]);
  CHECK(tvs.back() < 3e-8);  // first exact run measured 2.3245e-08; frozen as regression bound
}

TEST_CASE("closure along a direction generic for this n") {
  // (1, -3/5) exposes v_2 alone in P_6
  const SupportTable t6 = enumerate_support(6);
  const Vec2 o{Rational(1), Rational(-3, 5)};
  const std::vector<double> rs{80};
  const auto tvs = closure_convergence_check(t6, 0, 0, o, rs);
  const Distribution limit = closure_limit_family(t6, 0, 0, o);
  REQUIRE(limit.atoms.size() == 1);
  CHECK(limit.atoms[0].edges == 12);
  CHECK(limit.atoms[0].triangles == 8);
  CHECK(tvs[0] < 1e-6);
}

TEST_CASE("direction generic for P but critical for P_6 yields a multi-point limit") {
  // At n=6 the turan points for r >= 3 are collinear, so (1,-1/2) exposes a
  // whole facet of P_6: the limit spreads over four support points by count.
  const SupportTable t6 = enumerate_support(6);
  const Vec2 o{Rational(1), Rational(-1, 2)};
  const Distribution limit = closure_limit_family(t6, 0, 0, o);
  REQUIRE(limit.atoms.size() == 4);
  CHECK(limit.atoms[0].edges == 12);
  CHECK(limit.atoms[3].edges == 15);
  CHECK(limit.atoms[1].prob == doctest::Approx(45.0 / 76).epsilon(1e-12));

  Distribution point_mass{6, {{13, 12, 1.0}}};
  const std::vector<double> rs{80};
  const auto tvs = closure_convergence_check(t6, 0, 0, o, rs);
  CHECK(tvs[0] < 1e-9);  // converges to the facet family...
  const FiniteFamily fam = exact_family(t6, 80, -40);
  CHECK(tv_distance(to_distribution(fam), point_mass) ==
        doctest::Approx(31.0 / 76).epsilon(1e-6));  // ...not to the point mass
}

TEST_CASE("ratio trend examples") {
  std::vector<int> ns;
  for (int n = 6; n <= 60; n += 6) ns.push_back(n);

  const auto flat = ratio_trend(1, 0, 0, ns);
  CHECK(flat.front().count_ratio == Rational(3, 2));
  CHECK(flat.front().exponent == 0);
  for (std::size_t i = 1; i < flat.size(); ++i)
    CHECK(flat[i].log_ratio > flat[i - 1].log_ratio);

  // exact/stirling ratio settles near 1
  const auto& last = flat.back();
  CHECK(std::exp(last.log_ratio - last.log_ratio_stirling) ==
        doctest::Approx(1.0).epsilon(0.05));

  const auto minus = ratio_trend(1, 20, -80, ns);
  CHECK(minus.back().log_ratio < -1e3);

  CHECK_THROWS_AS(ratio_trend(1, 0, 0, std::vector<int>{7}), std::domain_error);
}

TEST_CASE("support table csv round trip") {
  const SupportTable t5 = enumerate_support(5);
  std::stringstream ss;
  write_support_csv(ss, t5);
  const SupportTable back = read_support_csv(ss);
  REQUIRE(back.n == 5);
  REQUIRE(back.entries.size() == t5.entries.size());
  for (std::size_t i = 0; i < t5.entries.size(); ++i) {
    CHECK(back.entries[i].edges == t5.entries[i].edges);
    CHECK(back.entries[i].triangles == t5.entries[i].triangles);
    CHECK(back.entries[i].count == t5.entries[i].count);
  }
}

TEST_CASE("distribution json") {
  const Distribution d = edge_complete_family(6, 0, 0);
  const std::string json = distribution_json(d);
  CHECK(json.find("\"prob\": 0.5") != std::string::npos);
  CHECK(json.find("\"point\"") != std::string::npos);
}
