#pragma once

#include <Eigen/Dense>
#include <initializer_list>

#include "curvflow/graph.hpp"
#include "curvflow/weights.hpp"

namespace fixtures {

inline Eigen::MatrixXd rows(std::initializer_list<std::initializer_list<double>> r) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(r.size()),
                    static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline curvflow::CombinatorialGraph support_graph(const Eigen::MatrixXd& p) {
  curvflow::CombinatorialGraph a(static_cast<int>(p.rows()));
  for (int x = 0; x < p.rows(); ++x)
    for (int y = 0; y < p.rows(); ++y)
      if (x != y && (p(x, y) > 0 || p(y, x) > 0)) a.set_edge(x, y);
  return a;
}

// Random ten-vertex graph with a random non-lazy scheme.
inline Eigen::MatrixXd random_graph_p0() {
  return rows({{0, 0.1, 0.08, 0.17, 0, 0.28, 0.21, 0.08, 0, 0.08},
               {0.08, 0, 0, 0.16, 0, 0.2, 0.07, 0.3, 0.04, 0.15},
               {0.27, 0, 0, 0, 0, 0, 0.3, 0, 0, 0.43},
               {0.02, 0.19, 0, 0, 0.17, 0.17, 0.11, 0.34, 0, 0},
               {0, 0, 0, 1, 0, 0, 0, 0, 0, 0},
               {0.04, 0.21, 0, 0.41, 0, 0, 0.34, 0, 0, 0},
               {0.06, 0.29, 0.14, 0.12, 0, 0.3, 0, 0.09, 0, 0},
               {0.08, 0.31, 0, 0.19, 0, 0, 0.23, 0, 0.19, 0},
               {0, 0.13, 0, 0, 0, 0, 0, 0.25, 0, 0.62},
               {0.1, 0.33, 0.38, 0, 0, 0, 0, 0, 0.19, 0}});
}

// Initial K_inf of the scheme above, vertex by vertex.
inline constexpr double kRandomGraphK0[10] = {0.406, 0.293, 0.168, 0.346, 0.34,
                                              0.527, 0.404, 0.202, 0.246, 0.236};

// K6 scheme with several zero rates on edges (p04, p21, p35, p45, p54).
inline Eigen::MatrixXd degenerate_k6_p0() {
  return rows({{0, .2, .1, .2, 0, .5},
               {.1, 0, .3, .25, .25, .1},
               {.2, 0, 0, .3, .15, .35},
               {.3, .5, .1, 0, .1, 0},
               {.2, .3, .3, .2, 0, 0},
               {.6, .1, .1, .2, 0, 0}});
}

inline Eigen::MatrixXd octahedron_p0() {
  return rows({{0, .26, 0, .24, .25, .25},
               {.25, 0, .25, 0, .25, .25},
               {0, .25, 0, .25, .25, .25},
               {.25, 0, .25, 0, .25, .25},
               {.25, .25, .25, .25, 0, 0},
               {.25, .25, .25, .25, 0, 0}});
}

// Directed 4-cycle 0 -> 1 -> 2 -> 3 -> 0 with rate 1; both apexes uniform on it.
inline Eigen::MatrixXd octahedron_degenerate() {
  return rows({{0, 1, 0, 0, 0, 0},
               {0, 0, 1, 0, 0, 0},
               {0, 0, 0, 1, 0, 0},
               {1, 0, 0, 0, 0, 0},
               {.25, .25, .25, .25, 0, 0},
               {.25, .25, .25, .25, 0, 0}});
}

// p_{i,i-1} = 1.
inline Eigen::MatrixXd clockwise_cycle(int n) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) p(i, (i + n - 1) % n) = 1.0;
  return p;
}

// K4 srw Jacobian under the default removal rule, times 3.
inline Eigen::MatrixXd k4_jacobian_times3() {
  return rows({{-3, 0, -1, 0, 1, 1, 1, 1},
               {0, -3, 1, 1, -1, 0, 0, -1},
               {-1, 0, -3, 0, 1, 1, 1, 1},
               {1, 1, 0, -3, 0, -1, -1, 0},
               {0, -1, 1, 1, -3, 0, 0, -1},
               {1, 1, 0, -1, 0, -3, -1, 0},
               {1, 1, 0, -1, 0, -1, -3, 0},
               {0, -1, 1, 1, -1, 0, 0, -3}});
}

// Wedge of K4, K5, K2, K3 with components
// K4 = {0,1,2,3}, K5 = {2,4,5,6,7}, K2 = {6,8}, K3 = {8,9,10}.
inline curvflow::CombinatorialGraph wedge_k4_k5_k2_k3() {
  using namespace curvflow;
  auto a1 = wedge_sum(complete(4), complete(5), 2, 1);
  auto a2 = wedge_sum(a1, complete(2), 6, 0);
  return wedge_sum(a2, complete(3), 8, 0);
}

}  // namespace fixtures
