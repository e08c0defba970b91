#pragma once

#include <cstdint>
#include <vector>

namespace curvflow {

using Vertex = int;

/// Dense 0/1 adjacency of a finite simple (possibly mixed) graph.
///
/// adj(i, j) == 1 means a directed edge i -> j. A two-sided edge is stored as
/// both directions. The diagonal is always zero; laziness is a property of a
/// weighting scheme, not of the graph.
class CombinatorialGraph {
 public:
  CombinatorialGraph() = default;

  /// Edgeless graph on n vertices.
  explicit CombinatorialGraph(int n);

  /// Rows of 0/1 entries; throws invalid-argument on non-square input,
  /// entries outside {0,1}, or a non-zero diagonal.
  static CombinatorialGraph from_rows(const std::vector<std::vector<int>>& rows);

  int size() const noexcept { return n_; }

  bool has_edge(Vertex i, Vertex j) const { return adj_[index(i, j)] != 0; }

  /// Sets or clears the directed edge i -> j.
  void set_edge(Vertex i, Vertex j, bool present = true);

  /// Sets both directions.
  void connect(Vertex i, Vertex j);

  std::vector<Vertex> out_neighbors(Vertex i) const;
  int out_degree(Vertex i) const;

  /// Number of ordered pairs (i, j) with an edge i -> j.
  int directed_edge_count() const;

  /// True when every edge is two-sided.
  bool is_unmixed() const;

  std::vector<std::vector<int>> rows() const;

  friend bool operator==(const CombinatorialGraph&, const CombinatorialGraph&) = default;

 private:
  std::size_t index(Vertex i, Vertex j) const;

  int n_ = 0;
  std::vector<std::uint8_t> adj_;
};

/// Out-neighbour lists (increasing) and out-degrees per vertex.
struct SphereData {
  std::vector<std::vector<Vertex>> neighbors;
  std::vector<int> degrees;
};

// Generators. Sizes are vertex counts: path(12) has 12 vertices and 11 edges.
CombinatorialGraph complete(int n);
CombinatorialGraph path(int n);
CombinatorialGraph cycle(int n);
CombinatorialGraph hypercube(int d);
CombinatorialGraph octahedron();

/// Vertex (i, j) is flattened to i * B.size() + j.
CombinatorialGraph cart_prod(const CombinatorialGraph& a, const CombinatorialGraph& b);

/// Identifies vertex i of A with vertex j of B. A keeps indices 0..nA-1; the
/// remaining vertices of B follow in their original order.
CombinatorialGraph wedge_sum(const CombinatorialGraph& a, const CombinatorialGraph& b, Vertex i,
                             Vertex j);

/// Disjoint union (A first) plus one two-sided edge i -- nA + j.
CombinatorialGraph bridge_at(const CombinatorialGraph& a, const CombinatorialGraph& b, Vertex i,
                             Vertex j);

inline constexpr int kDefaultConnectRetries = 10000;

/// Erdos-Renyi graph; with `connected` the whole graph is resampled until it
/// is connected, giving up after `max_retries` attempts.
CombinatorialGraph rand_adj_mat(int n, double p, bool connected, std::uint64_t seed,
                                int max_retries = kDefaultConnectRetries);

SphereData onespheres(const CombinatorialGraph& a);

/// Connectivity with every edge treated as two-sided.
bool is_connected(const CombinatorialGraph& a);

}  // namespace curvflow
