#include "etm/graph.hpp"

#include <bit>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace etm {

Graph::Graph(int n) : n_(n) {
  if (n < 2) throw std::domain_error("Graph: need at least 2 nodes");
  words_ = (n + 63) / 64;
  bits_.assign(static_cast<std::size_t>(n_) * words_, 0);
}

void Graph::check_node(int i) const {
  if (i < 0 || i >= n_) throw std::domain_error("Graph: node index out of range");
}

void Graph::check_pair(int i, int j) const {
  check_node(i);
  check_node(j);
  if (i == j) throw std::domain_error("Graph: self-loops are not allowed");
}

bool Graph::has_edge(int i, int j) const {
  check_pair(i, j);
  return (row(i)[j >> 6] >> (j & 63)) & 1u;
}

void Graph::set_edge(int i, int j, bool present) {
  check_pair(i, j);
  const std::uint64_t mi = std::uint64_t(1) << (j & 63);
  const std::uint64_t mj = std::uint64_t(1) << (i & 63);
  std::uint64_t& wi = bits_[static_cast<std::size_t>(i) * words_ + (j >> 6)];
  std::uint64_t& wj = bits_[static_cast<std::size_t>(j) * words_ + (i >> 6)];
  const bool had = wi & mi;
  if (had == present) return;
  if (present) {
    wi |= mi;
    wj |= mj;
    ++edges_;
  } else {
    wi &= ~mi;
    wj &= ~mj;
    --edges_;
  }
}

int Graph::common_neighbors(int i, int j) const {
  check_pair(i, j);
  const std::uint64_t* ri = row(i);
  const std::uint64_t* rj = row(j);
  int acc = 0;
  for (int w = 0; w < words_; ++w) acc += std::popcount(ri[w] & rj[w]);
  return acc;
}

EdgeFlip Graph::flip_edge(int i, int j) {
  const int c = common_neighbors(i, j);
  const bool present = has_edge(i, j);
  const int de = present ? -1 : +1;
  set_edge(i, j, !present);
  return {de, static_cast<std::int64_t>(de) * c};
}

std::int64_t Graph::triangle_count() const {
  std::int64_t acc = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if (has_edge(i, j)) acc += common_neighbors(i, j);
    }
  }
  return acc / 3;  // each triangle seen once per edge
}

DensityPoint densities(const Graph& g) {
  const BigInt n(g.size());
  return {Rational(2 * BigInt(g.edge_count()), n * n),
          Rational(6 * BigInt(g.triangle_count()), n * n * n)};
}

Graph turan_graph(int n, int r) {
  if (r < 1 || r > n) throw std::domain_error("turan_graph: class count out of range");
  Graph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (i % r != j % r) g.set_edge(i, j, true);
    }
  }
  return g;
}

std::pair<std::int64_t, std::int64_t> turan_counts(int n, int r) {
  if (r < 1 || r > n) throw std::domain_error("turan_counts: class count out of range");
  const std::int64_t q = n / r, m = n % r;
  const std::int64_t hi = q + 1;
  const std::int64_t p1 = n;
  const std::int64_t p2 = m * hi * hi + (r - m) * q * q;
  const std::int64_t p3 = m * hi * hi * hi + (r - m) * q * q * q;
  const std::int64_t edges = (p1 * p1 - p2) / 2;
  const std::int64_t triangles = (p1 * p1 * p1 - 3 * p1 * p2 + 2 * p3) / 6;
  return {edges, triangles};
}

DensityPoint turan_densities(int n, int r) {
  const auto [e, t] = turan_counts(n, r);
  const BigInt nn(n);
  return {Rational(2 * BigInt(e), nn * nn), Rational(6 * BigInt(t), nn * nn * nn)};
}

Partition partition_recovery(const Graph& g) {
  const int n = g.size();
  std::vector<int> color(n, -1);
  int palette = 0;
  std::vector<char> used;
  for (int v = 0; v < n; ++v) {
    used.assign(palette, 0);
    for (int u = 0; u < v; ++u) {
      if (g.has_edge(u, v)) used[color[u]] = 1;
    }
    int c = 0;
    while (c < palette && used[c]) ++c;
    if (c == palette) ++palette;
    color[v] = c;
  }

  Partition p;
  p.class_of = color;
  p.classes.assign(palette, {});
  for (int v = 0; v < n; ++v) p.classes[color[v]].push_back(v);

  std::int64_t bad = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool same = color[i] == color[j];
      // complete multipartite: same class <=> non-edge
      if (same == g.has_edge(i, j)) ++bad;
    }
  }
  p.misfit = static_cast<double>(bad) / (static_cast<double>(n) * (n - 1) / 2);
  return p;
}

void write_edge_list(std::ostream& os, const Graph& g) {
  os << g.size() << ' ' << g.edge_count() << '\n';
  for (int i = 0; i < g.size(); ++i) {
    for (int j = i + 1; j < g.size(); ++j) {
      if (g.has_edge(i, j)) os << i << ' ' << j << '\n';
    }
  }
}

Graph read_edge_list(std::istream& is) {
  int n = 0;
  std::int64_t m = 0;
  if (!(is >> n >> m)) throw std::runtime_error("edge list: bad header");
  Graph g(n);
  for (std::int64_t k = 0; k < m; ++k) {
    int i = 0, j = 0;
    if (!(is >> i >> j)) throw std::runtime_error("edge list: truncated");
    g.set_edge(i, j, true);
  }
  return g;
}

void write_hex_dump(std::ostream& os, const Graph& g) {
  static const char* digits = "0123456789abcdef";
  os << g.size() << '\n';
  for (int i = 0; i < g.size(); ++i) {
    const std::uint64_t* r = g.row(i);
    std::string line;
    line.reserve(static_cast<std::size_t>(g.words_per_row()) * 16);
    for (int w = 0; w < g.words_per_row(); ++w) {
      for (int nib = 15; nib >= 0; --nib) line.push_back(digits[(r[w] >> (4 * nib)) & 0xf]);
    }
    os << line << '\n';
  }
}

Graph read_hex_dump(std::istream& is) {
  int n = 0;
  if (!(is >> n)) throw std::runtime_error("hex dump: bad header");
  Graph g(n);
  const int words = g.words_per_row();
  for (int i = 0; i < n; ++i) {
    std::string line;
    if (!(is >> line)) throw std::runtime_error("hex dump: truncated");
    if (line.size() != static_cast<std::size_t>(words) * 16)
      throw std::runtime_error("hex dump: row has wrong width");
    for (int w = 0; w < words; ++w) {
      std::uint64_t value = 0;
      for (int c = 0; c < 16; ++c) {
        const char ch = line[static_cast<std::size_t>(w) * 16 + c];
        int digit;
        if (ch >= '0' && ch <= '9') digit = ch - '0';
        else if (ch >= 'a' && ch <= 'f') digit = ch - 'a' + 10;
        else throw std::runtime_error("hex dump: bad digit");
        value = (value << 4) | static_cast<std::uint64_t>(digit);
      }
      for (int b = 0; b < 64; ++b) {
        const int j = w * 64 + b;
        if (j >= n || j <= i) continue;
        if ((value >> b) & 1u) g.set_edge(i, j, true);
      }
    }
  }
  return g;
}

}  // namespace etm
