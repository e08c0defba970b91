#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curvflow/graph.hpp"
#include "curvflow/weights.hpp"

namespace curvflow {

/// Directed edges grouped by source, targets increasing. One edge per source
/// is removed; the remaining ones are the essential coordinates of the flow.
struct DirectedEdgeIndex {
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<int> group_begin;  // per vertex, first edge of its group
  std::vector<int> group_end;    // per vertex, one past the last edge
  std::vector<int> removed;      // per vertex, removed edge index or -1
  std::vector<char> essential;   // per edge

  int size() const noexcept { return static_cast<int>(edges.size()); }
  int essential_count() const;
  std::vector<int> essential_edges() const;
  /// Edge index of (x, y), or -1.
  int find(Vertex x, Vertex y) const;
};

/// `removed_targets[x]` picks the removed edge (x, target); -1 or an empty
/// vector means the group's last edge.
DirectedEdgeIndex enumerate_edges(const CombinatorialGraph& a,
                                  const std::vector<Vertex>& removed_targets = {});

/// Derivatives of the flow field with respect to every directed rate, at an
/// equilibrium, with the departure mass of each source held fixed.
/// Throws unsupported-input for mixed graphs and not-an-equilibrium when P is
/// not Markovian or not curvature sharp.
Eigen::MatrixXd b_matrix(const CombinatorialGraph& a, const WeightScheme& p,
                         const DirectedEdgeIndex& idx, const ToleranceConfig& tol = {});

/// Same coefficients without the equilibrium checks.
Eigen::MatrixXd b_matrix_unchecked(const Eigen::MatrixXd& p, const DirectedEdgeIndex& idx);

/// Row selection onto the essential edges.
Eigen::MatrixXd essential_projection(const DirectedEdgeIndex& idx);

/// Lift from essential coordinates: the removed rate of each source becomes
/// minus the sum of its essential rates.
Eigen::MatrixXd essential_lift(const DirectedEdgeIndex& idx);

/// Reduced Jacobian P1 B P2 on the essential coordinates.
Eigen::MatrixXd jacobian(const CombinatorialGraph& a, const WeightScheme& p,
                         const DirectedEdgeIndex& idx, const ToleranceConfig& tol = {});

struct EquilibriumReport {
  std::optional<int> kind;  // -1 stable, 0 undecided, +1 unstable
  std::optional<std::vector<std::complex<double>>> eigenvalues;
  std::optional<Eigen::MatrixXd> jacobian;
  std::string note;  // reason when kind is absent
};

/// +1 if the largest real part is >= threshold, -1 if it is <= -threshold,
/// 0 otherwise (including an empty spectrum).
int classify_spectrum(const std::vector<std::complex<double>>& eigenvalues, double threshold);

/// Eigenvalues sorted by real part, then imaginary part.
std::vector<std::complex<double>> sorted_eigenvalues(const Eigen::MatrixXd& m);

/// Never throws on bad equilibria: returns a report with absent values and a note.
EquilibriumReport equilibrium_type(const CombinatorialGraph& a, const WeightScheme& p,
                                   bool want_eigenvalues, bool want_jacobian,
                                   double norm_tolerance = 1e-3, double threshold = 1e-3,
                                   const std::vector<Vertex>& removed_targets = {});

}  // namespace curvflow
