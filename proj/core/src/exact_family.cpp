#include "etm/exact_family.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "etm/geometry.hpp"

namespace etm {

namespace {

std::vector<std::pair<int, int>> pair_table(int n) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) pairs.emplace_back(i, j);
  return pairs;
}

void check_enumerable(int n, bool allow_large) {
  if (n < 2 || n > kEnumerationHardCap)
    throw std::runtime_error("enumeration supports 2 <= n <= " +
                             std::to_string(kEnumerationHardCap));
  if (n > kEnumerationCap && !allow_large)
    throw std::runtime_error("n = " + std::to_string(n) + " exceeds the default cap n <= " +
                             std::to_string(kEnumerationCap) +
                             "; pass allow_large to enumerate 2^28 graphs");
}

struct ProgressState {
  std::atomic<std::uint64_t> done{0};
  std::uint64_t total = 0;
  const std::function<void(std::uint64_t, std::uint64_t)>* callback = nullptr;
};

// Dense (E, T) histogram for one Gray-code index range [begin, end).
void walk_range(int n, std::uint64_t begin, std::uint64_t end,
                const std::vector<std::pair<int, int>>& pairs, std::vector<std::uint64_t>& hist,
                std::size_t t_stride, ProgressState* progress) {
  constexpr std::uint64_t kTick = std::uint64_t(1) << 22;
  Graph g(n);
  std::int64_t edges = 0, triangles = 0;
  const std::uint64_t start_mask = begin ^ (begin >> 1);
  for (std::size_t b = 0; b < pairs.size(); ++b) {
    if ((start_mask >> b) & 1u) {
      const auto d = g.flip_edge(pairs[b].first, pairs[b].second);
      edges += d.d_edges;
      triangles += d.d_triangles;
    }
  }
  ++hist[static_cast<std::size_t>(edges) * t_stride + static_cast<std::size_t>(triangles)];
  for (std::uint64_t i = begin + 1; i < end; ++i) {
    const int b = std::countr_zero(i);
    const auto d = g.flip_edge(pairs[b].first, pairs[b].second);
    edges += d.d_edges;
    triangles += d.d_triangles;
    ++hist[static_cast<std::size_t>(edges) * t_stride + static_cast<std::size_t>(triangles)];
    if (progress != nullptr && (i - begin) % kTick == 0) {
      (*progress->callback)(progress->done.fetch_add(kTick) + kTick, progress->total);
    }
  }
}

double logsumexp(const std::vector<double>& xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double acc = 0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::uint64_t SupportTable::total_count() const {
  std::uint64_t acc = 0;
  for (const auto& e : entries) acc += e.count;
  return acc;
}

DensityPoint SupportTable::point(const SupportEntry& entry) const {
  const BigInt nn(n);
  return {Rational(2 * BigInt(entry.edges), nn * nn),
          Rational(6 * BigInt(entry.triangles), nn * nn * nn)};
}

const SupportEntry* SupportTable::find(std::int64_t edges, std::int64_t triangles) const {
  const auto it = std::lower_bound(entries.begin(), entries.end(), std::pair{edges, triangles},
                                   [](const SupportEntry& e, const std::pair<std::int64_t, std::int64_t>& key) {
                                     return std::pair{e.edges, e.triangles} < key;
                                   });
  if (it == entries.end() || it->edges != edges || it->triangles != triangles) return nullptr;
  return &*it;
}

SupportTable enumerate_support(int n, const EnumerateOptions& opts) {
  check_enumerable(n, opts.allow_large);
  const auto pairs = pair_table(n);
  const std::uint64_t total = std::uint64_t(1) << pairs.size();
  const std::size_t max_e = pairs.size();
  const std::size_t max_t = static_cast<std::size_t>(n) * (n - 1) * (n - 2) / 6;
  const std::size_t t_stride = max_t + 1;
  const std::size_t cells = (max_e + 1) * t_stride;

  int threads = opts.threads;
  if (threads <= 0)  // auto: only the 2^28 case is worth spawning for
    threads = n > kEnumerationCap ? static_cast<int>(std::thread::hardware_concurrency()) : 1;
  if (threads < 1 || static_cast<std::uint64_t>(threads) > total) threads = 1;

  ProgressState progress;
  progress.total = total;
  progress.callback = opts.progress ? &opts.progress : nullptr;
  ProgressState* progress_ptr = opts.progress ? &progress : nullptr;

  std::vector<std::vector<std::uint64_t>> hists(threads, std::vector<std::uint64_t>(cells, 0));
  if (threads == 1) {
    walk_range(n, 0, total, pairs, hists[0], t_stride, progress_ptr);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = total / threads;
    for (int t = 0; t < threads; ++t) {
      const std::uint64_t begin = chunk * t;
      const std::uint64_t end = t + 1 == threads ? total : chunk * (t + 1);
      pool.emplace_back(walk_range, n, begin, end, std::cref(pairs), std::ref(hists[t]),
                        t_stride, progress_ptr);
    }
    for (auto& th : pool) th.join();
    for (int t = 1; t < threads; ++t)
      for (std::size_t c = 0; c < cells; ++c) hists[0][c] += hists[t][c];
  }

  SupportTable table;
  table.n = n;
  for (std::size_t e = 0; e <= max_e; ++e) {
    for (std::size_t t = 0; t <= max_t; ++t) {
      const std::uint64_t c = hists[0][e * t_stride + t];
      if (c != 0)
        table.entries.push_back({static_cast<std::int64_t>(e), static_cast<std::int64_t>(t), c});
    }
  }
  return table;
}

void for_each_labeled_graph(
    int n, const std::function<void(const Graph&, std::int64_t, std::int64_t)>& visit) {
  check_enumerable(n, /*allow_large=*/false);
  const auto pairs = pair_table(n);
  const std::uint64_t total = std::uint64_t(1) << pairs.size();
  Graph g(n);
  std::int64_t edges = 0, triangles = 0;
  visit(g, edges, triangles);
  for (std::uint64_t i = 1; i < total; ++i) {
    const int b = std::countr_zero(i);
    const auto d = g.flip_edge(pairs[b].first, pairs[b].second);
    edges += d.d_edges;
    triangles += d.d_triangles;
    visit(g, edges, triangles);
  }
}

std::vector<DensityPoint> convex_support(const SupportTable& table) {
  std::vector<std::pair<std::int64_t, std::int64_t>> pts;
  pts.reserve(table.entries.size());
  for (const auto& e : table.entries) pts.emplace_back(e.edges, e.triangles);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const auto cross = [](const std::pair<std::int64_t, std::int64_t>& o,
                        const std::pair<std::int64_t, std::int64_t>& a,
                        const std::pair<std::int64_t, std::int64_t>& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
  };

  // Andrew monotone chain; strict turns drop collinear interior points.
  std::vector<std::pair<std::int64_t, std::int64_t>> hull;
  for (const auto& p : pts) {  // lower chain
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0)
      hull.pop_back();
    hull.push_back(p);
  }
  const std::size_t lower = hull.size() + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {  // upper chain
    while (hull.size() >= lower && cross(hull[hull.size() - 2], hull.back(), *it) <= 0)
      hull.pop_back();
    hull.push_back(*it);
  }
  hull.pop_back();

  std::vector<DensityPoint> out;
  out.reserve(hull.size());
  const BigInt nn(table.n);
  for (const auto& p : hull) {
    out.push_back({Rational(2 * BigInt(p.first), nn * nn),
                   Rational(6 * BigInt(p.second), nn * nn * nn)});
  }
  return out;
}

double FiniteFamily::prob(std::int64_t edges, std::int64_t triangles) const {
  const SupportEntry* e = table.find(edges, triangles);
  if (e == nullptr) return 0.0;
  return probs[static_cast<std::size_t>(e - table.entries.data())];
}

std::pair<double, double> FiniteFamily::mean() const {
  double me = 0, mt = 0;
  const double n = table.n;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    me += probs[i] * (2.0 * table.entries[i].edges / (n * n));
    mt += probs[i] * (6.0 * table.entries[i].triangles / (n * n * n));
  }
  return {me, mt};
}

FiniteFamily exact_family(const SupportTable& table, double beta1, double beta2) {
  FiniteFamily fam;
  fam.table = table;
  fam.beta1 = beta1;
  fam.beta2 = beta2;
  const double n = table.n;
  std::vector<double> logw(table.entries.size());
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    const auto& e = table.entries[i];
    // n^2 <beta, x> = 2 beta1 E + 6 beta2 T / n
    logw[i] = 2 * beta1 * e.edges + 6 * beta2 * e.triangles / n +
              std::log(static_cast<double>(e.count));
  }
  fam.log_normalizer = logsumexp(logw);
  fam.probs.resize(logw.size());
  for (std::size_t i = 0; i < logw.size(); ++i) fam.probs[i] = std::exp(logw[i] - fam.log_normalizer);
  return fam;
}

BigInt nu_turan(int n, int r) {
  if (r < 1 || r > n) throw std::domain_error("nu_turan: class count out of range");
  const int q = n / r, m = n % r;
  BigInt v = factorial(n);
  v /= boost::multiprecision::pow(factorial(q + 1), static_cast<unsigned>(m));
  v /= boost::multiprecision::pow(factorial(q), static_cast<unsigned>(r - m));
  v /= factorial(m);
  v /= factorial(r - m);
  return v;
}

double log_nu_turan(int n, int r) {
  if (r < 1 || r > n) throw std::domain_error("log_nu_turan: class count out of range");
  const int q = n / r, m = n % r;
  return std::lgamma(n + 1.0) - m * std::lgamma(q + 2.0) - (r - m) * std::lgamma(q + 1.0) -
         std::lgamma(m + 1.0) - std::lgamma(r - m + 1.0);
}

Distribution to_distribution(const FiniteFamily& family) {
  Distribution d;
  d.n = family.table.n;
  d.atoms.reserve(family.probs.size());
  for (std::size_t i = 0; i < family.probs.size(); ++i) {
    const auto& e = family.table.entries[i];
    d.atoms.push_back({e.edges, e.triangles, family.probs[i]});
  }
  return d;
}

double tv_distance(const Distribution& p, const Distribution& q) {
  double acc = 0;
  std::size_t i = 0, j = 0;
  while (i < p.atoms.size() || j < q.atoms.size()) {
    if (j == q.atoms.size()) {
      acc += std::abs(p.atoms[i++].prob);
      continue;
    }
    if (i == p.atoms.size()) {
      acc += std::abs(q.atoms[j++].prob);
      continue;
    }
    const auto kp = std::pair{p.atoms[i].edges, p.atoms[i].triangles};
    const auto kq = std::pair{q.atoms[j].edges, q.atoms[j].triangles};
    if (kp == kq) {
      acc += std::abs(p.atoms[i++].prob - q.atoms[j++].prob);
    } else if (kp < kq) {
      acc += std::abs(p.atoms[i++].prob);
    } else {
      acc += std::abs(q.atoms[j++].prob);
    }
  }
  return acc / 2;
}

std::string distribution_json(const Distribution& d) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  const double n = d.n;
  for (const auto& a : d.atoms) {
    nlohmann::ordered_json item;
    item["point"] = {2.0 * a.edges / (n * n), 6.0 * a.triangles / (n * n * n)};
    item["prob"] = a.prob;
    out.push_back(std::move(item));
  }
  return out.dump(2);
}

Distribution TwoPointFamily::distribution() const {
  Distribution d;
  d.n = n;
  d.atoms = {{edges_low, triangles_low, p_low}, {edges_high, triangles_high, p_high}};
  return d;
}

TwoPointFamily closure_two_point(int n, int k, double beta1, double beta2) {
  if (k < 1) throw std::domain_error("closure_two_point: k must be positive");
  const long long period = static_cast<long long>(k + 1) * (k + 2);
  if (n % period != 0)
    throw std::domain_error(
        "closure_two_point: n must be a multiple of (k+1)(k+2) so that both facet endpoints "
        "are exact support points and the facet meets the support only there");

  TwoPointFamily fam;
  fam.n = n;
  fam.k = k;
  std::tie(fam.edges_low, fam.triangles_low) = turan_counts(n, k + 1);
  std::tie(fam.edges_high, fam.triangles_high) = turan_counts(n, k + 2);

  if (n <= kEnumerationCap) {
    const SupportTable table = enumerate_support(n);
    const SupportEntry* lo = table.find(fam.edges_low, fam.triangles_low);
    const SupportEntry* hi = table.find(fam.edges_high, fam.triangles_high);
    if (lo == nullptr || hi == nullptr)
      throw std::logic_error("closure_two_point: facet endpoint missing from support");
    fam.count_low = lo->count;
    fam.count_high = hi->count;
  } else {
    fam.count_low = nu_turan(n, k + 1);
    fam.count_high = nu_turan(n, k + 2);
  }

  const Vec2 beta{rational_from_double(beta1), rational_from_double(beta2)};
  fam.reduced = dot(facet_tangent(k), beta);
  const BigInt denom = BigInt(k + 1) * BigInt(k + 1) * BigInt(k + 2) * BigInt(k + 2);
  fam.exponent = Rational(BigInt(n) * BigInt(n)) * fam.reduced / Rational(denom);

  const double log_ratio = to_double(fam.exponent) + log_big(fam.count_high) - log_big(fam.count_low);
  if (log_ratio >= 0) {
    const double z = std::exp(-log_ratio);
    fam.p_high = 1.0 / (1.0 + z);
    fam.p_low = z / (1.0 + z);
  } else {
    const double z = std::exp(log_ratio);
    fam.p_low = 1.0 / (1.0 + z);
    fam.p_high = z / (1.0 + z);
  }
  return fam;
}

Distribution edge_complete_family(int n, double beta1, double beta2) {
  if (n < 2) throw std::domain_error("edge_complete_family: need at least 2 nodes");
  Distribution d;
  d.n = n;
  const double x = beta1 * n * (n - 1.0) + beta2 * (n - 1.0) * (n - 2.0);
  double p_empty, p_complete;
  if (x >= 0) {
    const double z = std::exp(-x);
    p_complete = 1.0 / (1.0 + z);
    p_empty = z / (1.0 + z);
  } else {
    const double z = std::exp(x);
    p_empty = 1.0 / (1.0 + z);
    p_complete = z / (1.0 + z);
  }
  const std::int64_t nn = n;
  d.atoms = {{0, 0, p_empty}, {nn * (nn - 1) / 2, nn * (nn - 1) * (nn - 2) / 6, p_complete}};
  return d;
}

Distribution triangle_free_family(const SupportTable& table, double beta1) {
  Distribution d;
  d.n = table.n;
  std::vector<double> logw;
  for (const auto& e : table.entries) {
    if (e.triangles != 0) continue;
    logw.push_back(2 * beta1 * e.edges + std::log(static_cast<double>(e.count)));
    d.atoms.push_back({e.edges, 0, 0.0});
  }
  const double z = logsumexp(logw);
  for (std::size_t i = 0; i < logw.size(); ++i) d.atoms[i].prob = std::exp(logw[i] - z);
  return d;
}

Distribution closure_limit_family(const SupportTable& table, double beta1, double beta2,
                                  const Vec2& o) {
  if (o.x == 0 && o.y == 0) throw std::domain_error("closure_limit_family: zero direction");
  // <o, x> with x = (2E/n^2, 6T/n^3); compare n * 2E * o.x + 6T * o.y (common n^3 scale).
  const BigInt n(table.n);
  Rational best;
  bool first = true;
  std::vector<std::size_t> arg;
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    const auto& e = table.entries[i];
    const Rational s = o.x * Rational(2 * n * e.edges) + o.y * Rational(6 * BigInt(e.triangles));
    if (first || s > best) {
      best = s;
      arg.assign(1, i);
      first = false;
    } else if (s == best) {
      arg.push_back(i);
    }
  }

  Distribution d;
  d.n = table.n;
  std::vector<double> logw;
  for (std::size_t i : arg) {
    const auto& e = table.entries[i];
    logw.push_back(2 * beta1 * e.edges + 6 * beta2 * e.triangles / table.n +
                   std::log(static_cast<double>(e.count)));
    d.atoms.push_back({e.edges, e.triangles, 0.0});
  }
  const double z = logsumexp(logw);
  for (std::size_t i = 0; i < logw.size(); ++i) d.atoms[i].prob = std::exp(logw[i] - z);
  return d;
}

std::vector<double> closure_convergence_check(const SupportTable& table, double beta1,
                                              double beta2, const Vec2& o,
                                              std::span<const double> rs) {
  const Distribution limit = closure_limit_family(table, beta1, beta2, o);
  const double ox = to_double(o.x), oy = to_double(o.y);
  std::vector<double> out;
  out.reserve(rs.size());
  for (const double r : rs) {
    const FiniteFamily fam = exact_family(table, beta1 + r * ox, beta2 + r * oy);
    out.push_back(tv_distance(to_distribution(fam), limit));
  }
  return out;
}

std::vector<RatioPoint> ratio_trend(int k, double beta1, double beta2, std::span<const int> ns) {
  if (k < 1) throw std::domain_error("ratio_trend: k must be positive");
  const long long period = static_cast<long long>(k + 1) * (k + 2);
  const Vec2 beta{rational_from_double(beta1), rational_from_double(beta2)};
  const Rational reduced = dot(facet_tangent(k), beta);
  const BigInt denom = BigInt(k + 1) * BigInt(k + 1) * BigInt(k + 2) * BigInt(k + 2);

  const double ratio_base = (k + 2.0) / (k + 1.0);
  const double stirling_const = std::log(1.0 / (k + 2.0)) - 0.5 * std::log(2 * std::numbers::pi) +
                                0.5 * (k + 1.0) * std::log(ratio_base) +
                                0.5 * std::log(k + 2.0);

  std::vector<RatioPoint> out;
  out.reserve(ns.size());
  for (const int n : ns) {
    if (n % period != 0)
      throw std::domain_error("ratio_trend: every n must be a multiple of (k+1)(k+2)");
    RatioPoint p;
    p.n = n;
    const BigInt lo = nu_turan(n, k + 1);
    const BigInt hi = nu_turan(n, k + 2);
    p.count_ratio = Rational(hi, lo);
    p.exponent = Rational(BigInt(n) * BigInt(n)) * reduced / Rational(denom);
    p.log_ratio = to_double(p.exponent) + log_big(hi) - log_big(lo);
    p.log_ratio_stirling = to_double(p.exponent) + stirling_const + n * std::log(ratio_base) -
                           0.5 * std::log(static_cast<double>(n));
    out.push_back(std::move(p));
  }
  return out;
}

void write_support_csv(std::ostream& os, const SupportTable& table) {
  os << "n," << table.n << '\n';
  os << "E,T,count\n";
  for (const auto& e : table.entries)
    os << e.edges << ',' << e.triangles << ',' << e.count << '\n';
}

SupportTable read_support_csv(std::istream& is) {
  SupportTable table;
  std::string line;
  if (!std::getline(is, line) || line.rfind("n,", 0) != 0)
    throw std::runtime_error("support csv: missing n header");
  table.n = std::stoi(line.substr(2));
  if (!std::getline(is, line) || line != "E,T,count")
    throw std::runtime_error("support csv: missing column header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    SupportEntry e{};
    if (std::sscanf(line.c_str(), "%ld,%ld,%lu", &e.edges, &e.triangles, &e.count) != 3)
      throw std::runtime_error("support csv: bad row: " + line);
    table.entries.push_back(e);
  }
  std::sort(table.entries.begin(), table.entries.end(), [](const auto& a, const auto& b) {
    return std::pair{a.edges, a.triangles} < std::pair{b.edges, b.triangles};
  });
  return table;
}

}  // namespace etm
