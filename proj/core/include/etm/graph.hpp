#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "etm/point.hpp"

namespace etm {

struct EdgeFlip {
  int d_edges;               // +1 if the edge was added, -1 if removed
  std::int64_t d_triangles;  // signed triangle delta
};

// Labeled simple graph with a symmetric bit-packed adjacency matrix.
// Rows are 64-bit words, so common-neighbor queries cost O(n/64).
class Graph {
 public:
  explicit Graph(int n);

  int size() const { return n_; }
  std::int64_t edge_count() const { return edges_; }

  bool has_edge(int i, int j) const;
  void set_edge(int i, int j, bool present);

  // Toggles {i,j} in place. Deltas refer to the pre-toggle state, so
  // d_triangles = d_edges * common_neighbors(i, j).
  EdgeFlip flip_edge(int i, int j);

  int common_neighbors(int i, int j) const;

  // Exact recount, each unordered triangle counted once.
  std::int64_t triangle_count() const;

  int words_per_row() const { return words_; }
  const std::uint64_t* row(int i) const { return bits_.data() + static_cast<std::size_t>(i) * words_; }

  bool operator==(const Graph&) const = default;

 private:
  void check_node(int i) const;
  void check_pair(int i, int j) const;

  int n_ = 0;
  int words_ = 0;
  std::int64_t edges_ = 0;
  std::vector<std::uint64_t> bits_;
};

// (2E/n^2, 6T/n^3) as exact rationals.
DensityPoint densities(const Graph& g);

// Complete r-partite graph with near-equal classes; node i lands in class i mod r.
Graph turan_graph(int n, int r);

// Closed-form (E, T) of the Turan graph, no construction needed.
std::pair<std::int64_t, std::int64_t> turan_counts(int n, int r);
DensityPoint turan_densities(int n, int r);

struct Partition {
  std::vector<int> class_of;               // color index per node
  std::vector<std::vector<int>> classes;   // nodes per class
  double misfit;  // fraction of node pairs inconsistent with complete-multipartite structure
};

// Recovers a candidate multipartite split by greedily partitioning the
// complement into cliques (equivalently, greedy proper coloring of g) and
// reports how far g is from being complete multipartite w.r.t. it.
Partition partition_recovery(const Graph& g);

// Edge-list text: header line "<n> <edge_count>", then one "i j" per line, 0-indexed.
void write_edge_list(std::ostream& os, const Graph& g);
Graph read_edge_list(std::istream& is);

// Hex dump of the packed rows, exact round-trip.
void write_hex_dump(std::ostream& os, const Graph& g);
Graph read_hex_dump(std::istream& is);

}  // namespace etm
