#include "curvflow/graph.hpp"

#include <queue>
#include <string>

#include "curvflow/errors.hpp"
#include "curvflow/rng.hpp"

namespace curvflow {

CombinatorialGraph::CombinatorialGraph(int n) : n_(n) {
  if (n < 0) fail(ErrorKind::InvalidArgument, "graph size must be non-negative");
  adj_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
}

CombinatorialGraph CombinatorialGraph::from_rows(const std::vector<std::vector<int>>& rows) {
  const int n = static_cast<int>(rows.size());
  CombinatorialGraph g(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      fail(ErrorKind::InvalidArgument, "adjacency matrix must be square");
    for (int j = 0; j < n; ++j) {
      const int v = rows[i][j];
      if (v != 0 && v != 1) fail(ErrorKind::InvalidArgument, "adjacency entries must be 0 or 1");
      if (i == j && v != 0) fail(ErrorKind::InvalidArgument, "adjacency diagonal must be zero");
      g.adj_[g.index(i, j)] = static_cast<std::uint8_t>(v);
    }
  }
  return g;
}

std::size_t CombinatorialGraph::index(Vertex i, Vertex j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_)
    fail(ErrorKind::InvalidArgument, "vertex index out of range");
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
}

void CombinatorialGraph::set_edge(Vertex i, Vertex j, bool present) {
  if (i == j) fail(ErrorKind::InvalidArgument, "self-loops are not allowed");
  adj_[index(i, j)] = present ? 1 : 0;
}

void CombinatorialGraph::connect(Vertex i, Vertex j) {
  set_edge(i, j);
  set_edge(j, i);
}

std::vector<Vertex> CombinatorialGraph::out_neighbors(Vertex i) const {
  std::vector<Vertex> out;
  for (Vertex j = 0; j < n_; ++j)
    if (has_edge(i, j)) out.push_back(j);
  return out;
}

int CombinatorialGraph::out_degree(Vertex i) const {
  int d = 0;
  for (Vertex j = 0; j < n_; ++j) d += has_edge(i, j) ? 1 : 0;
  return d;
}

int CombinatorialGraph::directed_edge_count() const {
  int c = 0;
  for (auto v : adj_) c += v;
  return c;
}

bool CombinatorialGraph::is_unmixed() const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (has_edge(i, j) != has_edge(j, i)) return false;
  return true;
}

std::vector<std::vector<int>> CombinatorialGraph::rows() const {
  std::vector<std::vector<int>> out(n_, std::vector<int>(n_, 0));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[i][j] = has_edge(i, j) ? 1 : 0;
  return out;
}

CombinatorialGraph complete(int n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "complete(n) needs n >= 1");
  CombinatorialGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) g.set_edge(i, j);
  return g;
}

CombinatorialGraph path(int n) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "path(n) needs n >= 2");
  CombinatorialGraph g(n);
  for (int i = 0; i + 1 < n; ++i) g.connect(i, i + 1);
  return g;
}

CombinatorialGraph cycle(int n) {
  if (n < 3) fail(ErrorKind::InvalidArgument, "cycle(n) needs n >= 3");
  CombinatorialGraph g(n);
  for (int i = 0; i < n; ++i) g.connect(i, (i + 1) % n);
  return g;
}

CombinatorialGraph hypercube(int d) {
  if (d < 1) fail(ErrorKind::InvalidArgument, "hypercube(d) needs d >= 1");
  if (d > 16) fail(ErrorKind::InvalidArgument, "hypercube dimension too large for a dense graph");
  const int n = 1 << d;
  CombinatorialGraph g(n);
  for (int v = 0; v < n; ++v)
    for (int b = 0; b < d; ++b) g.set_edge(v, v ^ (1 << b));
  return g;
}

CombinatorialGraph octahedron() {
  // Antipodal pairs {0,2}, {1,3}, {4,5}.
  CombinatorialGraph g = complete(6);
  g.set_edge(0, 2, false);
  g.set_edge(2, 0, false);
  g.set_edge(1, 3, false);
  g.set_edge(3, 1, false);
  g.set_edge(4, 5, false);
  g.set_edge(5, 4, false);
  return g;
}

CombinatorialGraph cart_prod(const CombinatorialGraph& a, const CombinatorialGraph& b) {
  const int na = a.size();
  const int nb = b.size();
  CombinatorialGraph g(na * nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      const int u = i * nb + j;
      for (int jj = 0; jj < nb; ++jj)
        if (b.has_edge(j, jj)) g.set_edge(u, i * nb + jj);
      for (int ii = 0; ii < na; ++ii)
        if (a.has_edge(i, ii)) g.set_edge(u, ii * nb + j);
    }
  return g;
}

CombinatorialGraph wedge_sum(const CombinatorialGraph& a, const CombinatorialGraph& b, Vertex i,
                             Vertex j) {
  if (i < 0 || i >= a.size() || j < 0 || j >= b.size())
    fail(ErrorKind::InvalidArgument, "wedge_sum: merge vertex out of range");
  const int na = a.size();
  const int nb = b.size();
  std::vector<int> map(nb);
  for (int v = 0, next = na; v < nb; ++v) map[v] = (v == j) ? i : next++;
  CombinatorialGraph g(na + nb - 1);
  for (int u = 0; u < na; ++u)
    for (int v = 0; v < na; ++v)
      if (a.has_edge(u, v)) g.set_edge(u, v);
  for (int u = 0; u < nb; ++u)
    for (int v = 0; v < nb; ++v)
      if (b.has_edge(u, v)) g.set_edge(map[u], map[v]);
  return g;
}

CombinatorialGraph bridge_at(const CombinatorialGraph& a, const CombinatorialGraph& b, Vertex i,
                             Vertex j) {
  if (i < 0 || i >= a.size() || j < 0 || j >= b.size())
    fail(ErrorKind::InvalidArgument, "bridge_at: bridge vertex out of range");
  const int na = a.size();
  const int nb = b.size();
  CombinatorialGraph g(na + nb);
  for (int u = 0; u < na; ++u)
    for (int v = 0; v < na; ++v)
      if (a.has_edge(u, v)) g.set_edge(u, v);
  for (int u = 0; u < nb; ++u)
    for (int v = 0; v < nb; ++v)
      if (b.has_edge(u, v)) g.set_edge(na + u, na + v);
  g.connect(i, na + j);
  return g;
}

CombinatorialGraph rand_adj_mat(int n, double p, bool connected, std::uint64_t seed,
                                int max_retries) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "rand_adj_mat needs n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::InvalidArgument, "edge probability must lie in [0,1]");
  Rng rng(seed);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    CombinatorialGraph g(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.uniform() < p) g.connect(i, j);
    if (!connected || is_connected(g)) return g;
  }
  fail(ErrorKind::RetryLimitExceeded,
       "rand_adj_mat: no connected sample after " + std::to_string(max_retries) + " attempts");
}

SphereData onespheres(const CombinatorialGraph& a) {
  SphereData s;
  s.neighbors.reserve(a.size());
  for (int i = 0; i < a.size(); ++i) {
    s.neighbors.push_back(a.out_neighbors(i));
    s.degrees.push_back(static_cast<int>(s.neighbors.back().size()));
  }
  return s;
}

bool is_connected(const CombinatorialGraph& a) {
  const int n = a.size();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::queue<int> todo;
  todo.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!todo.empty()) {
    const int u = todo.front();
    todo.pop();
    for (int v = 0; v < n; ++v)
      if (!seen[v] && (a.has_edge(u, v) || a.has_edge(v, u))) {
        seen[v] = 1;
        ++reached;
        todo.push(v);
      }
  }
  return reached == n;
}

}  // namespace curvflow
