#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "etm/graph.hpp"
#include "etm/point.hpp"

namespace etm {

inline constexpr int kEnumerationCap = 7;      // default limit (2^21 graphs)
inline constexpr int kEnumerationHardCap = 8;  // opt-in limit (2^28 graphs)

struct SupportEntry {
  std::int64_t edges;
  std::int64_t triangles;
  std::uint64_t count;  // nu_n at this statistic point
};

// Exact histogram of (E, T) over all 2^{C(n,2)} labeled graphs.
struct SupportTable {
  int n = 0;
  std::vector<SupportEntry> entries;  // sorted by (edges, triangles)

  std::uint64_t total_count() const;
  DensityPoint point(const SupportEntry& entry) const;
  const SupportEntry* find(std::int64_t edges, std::int64_t triangles) const;
};

struct EnumerateOptions {
  bool allow_large = false;  // required for n = 8
  int threads = 0;           // 0 = pick from hardware
  // Invoked with (graphs walked, total) roughly every 2^22 states; may be
  // called from several worker threads at once.
  std::function<void(std::uint64_t, std::uint64_t)> progress;
};
SupportTable enumerate_support(int n, const EnumerateOptions& opts = {});

// Gray-code walk over all labeled graphs on n nodes; visit sees every state
// exactly once together with its exact edge and triangle counts.
void for_each_labeled_graph(
    int n, const std::function<void(const Graph&, std::int64_t, std::int64_t)>& visit);

// Exact convex hull of the support, counterclockwise, starting at (0,0).
std::vector<DensityPoint> convex_support(const SupportTable& table);

// The exponential family on the support at natural parameter beta.
struct FiniteFamily {
  SupportTable table;
  double beta1 = 0, beta2 = 0;
  double log_normalizer = 0;   // n^2 psi_n(beta)
  std::vector<double> probs;   // aligned with table.entries

  double prob(std::int64_t edges, std::int64_t triangles) const;
  std::pair<double, double> mean() const;  // E_beta[(e, t)]
};
FiniteFamily exact_family(const SupportTable& table, double beta1, double beta2);

// Number of labeled graphs isomorphic to T(n, r), exact.
BigInt nu_turan(int n, int r);
double log_nu_turan(int n, int r);

struct Distribution {
  struct Atom {
    std::int64_t edges;
    std::int64_t triangles;
    double prob;
  };
  int n = 0;
  std::vector<Atom> atoms;  // sorted by (edges, triangles)
};
Distribution to_distribution(const FiniteFamily& family);
double tv_distance(const Distribution& p, const Distribution& q);
std::string distribution_json(const Distribution& d);

// Limit family along the critical direction o_k: a two-point family on
// {v_k, v_{k+1}}. Requires n to be a multiple of (k+1)(k+2) so that both
// points are exact support points and the facet meets the support only there.
// Counts come from full enumeration when n <= kEnumerationCap and from
// nu_turan otherwise.
struct TwoPointFamily {
  int n = 0, k = 0;
  std::int64_t edges_low = 0, triangles_low = 0;    // v_k at this n
  std::int64_t edges_high = 0, triangles_high = 0;  // v_{k+1}
  BigInt count_low, count_high;
  Rational reduced;   // <l~_k, beta> with l~_k = ((k+1)(k+2), k(3k+5)), dyadic-exact
  Rational exponent;  // n^2 <v_{k+1} - v_k, beta>
  double p_low = 0, p_high = 0;

  Distribution distribution() const;
};
TwoPointFamily closure_two_point(int n, int k, double beta1, double beta2);

// Two-point closure along the empty/complete direction.
Distribution edge_complete_family(int n, double beta1, double beta2);

// Closure along o_0: the family on the triangle-free slice of the support.
Distribution triangle_free_family(const SupportTable& table, double beta1);

// Total-variation limit of {P_{n, beta + r o}} as r -> inf: the family
// restricted to the exact argmax set of <o, x> over the support.
Distribution closure_limit_family(const SupportTable& table, double beta1, double beta2,
                                  const Vec2& o);

// TV(P_{n, beta + r o}, limit) for each r in the schedule.
std::vector<double> closure_convergence_check(const SupportTable& table, double beta1,
                                              double beta2, const Vec2& o,
                                              std::span<const double> rs);

struct RatioPoint {
  int n;
  Rational count_ratio;       // nu_n(v_{k+1}) / nu_n(v_k)
  Rational exponent;          // n^2 <v_{k+1} - v_k, beta>
  double log_ratio;           // exponent + log(count ratio)
  double log_ratio_stirling;  // closed-form approximation C * n^{-1/2} ((k+2)/(k+1))^n e^{exponent}
};
std::vector<RatioPoint> ratio_trend(int k, double beta1, double beta2, std::span<const int> ns);

// CSV persistence: first line "n,<n>", then header "E,T,count" and rows.
void write_support_csv(std::ostream& os, const SupportTable& table);
SupportTable read_support_csv(std::istream& is);

}  // namespace etm
