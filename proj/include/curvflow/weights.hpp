#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "curvflow/graph.hpp"

namespace curvflow {

struct ToleranceConfig {
  double threshold = 1e-3;       // rates below this count as numerically zero
  double norm_tolerance = 1e-3;  // allowed row-sum deviation from 1
  double lim_tolerance = 1e-3;   // flow-limit criterion
  double support_eps = 0.0;      // rates <= this are invisible to the curvature operators

  /// Throws invalid-argument unless the first three are positive and support_eps >= 0.
  void validate() const;
};

/// Dense matrix of transition rates. Diagonal entries are the laziness values.
class WeightScheme {
 public:
  WeightScheme() = default;

  /// Throws invalid-argument if P is not square, has non-finite or negative entries.
  explicit WeightScheme(Eigen::MatrixXd p);

  /// Additionally checks that off-diagonal support lies on edges of `a`.
  WeightScheme(const CombinatorialGraph& a, Eigen::MatrixXd p);

  int size() const noexcept { return static_cast<int>(p_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return p_; }
  double operator()(Vertex x, Vertex y) const { return p_(x, y); }

  double laziness(Vertex x) const { return p_(x, x); }
  /// 1 - p_xx; constant along any curvature flow.
  double departure_rate(Vertex x) const { return 1.0 - p_(x, x); }
  Eigen::VectorXd row_sums() const { return p_.rowwise().sum(); }

 private:
  Eigen::MatrixXd p_;
};

/// Throws invalid-argument if P puts positive mass on a non-edge.
void validate_support(const CombinatorialGraph& a, const Eigen::MatrixXd& p);

inline constexpr int kRandomizerRetries = 1000;

/// Random Markovian scheme with every rate on an edge (and the laziness, if
/// requested) at least `threshold`.
WeightScheme randomizer(const CombinatorialGraph& a, double threshold, bool laziness,
                        std::uint64_t seed);

/// Simple random walk. The lazy variant gives the vertex itself one share.
/// Isolated vertices get a zero row, or laziness 1 in the lazy variant.
WeightScheme srw(const CombinatorialGraph& a, bool laziness = false);

/// p (P x I) + q (I x Q) with the flattening (i, j) -> i * m + j.
WeightScheme cart_prod_prob(const WeightScheme& p_scheme, const WeightScheme& q_scheme, double p,
                            double q, double norm_tolerance = 1e-3);

bool is_markovian(const Eigen::MatrixXd& p, double norm_tolerance);
inline bool is_markovian(const WeightScheme& p, double norm_tolerance) {
  return is_markovian(p.matrix(), norm_tolerance);
}

/// No two-sided edge carries rates >= threshold in both directions.
/// Throws unsupported-input for mixed graphs.
bool is_totally_degenerate(const CombinatorialGraph& a, const WeightScheme& p, double threshold);

/// Connectivity of the graph with an edge wherever p_xy or p_yx is >= threshold.
bool is_weakly_connected(const WeightScheme& p, double threshold);

/// Rescales the off-diagonal entries of every row by one factor so the row
/// sums to exactly 1; the diagonal is untouched. Rows without off-diagonal
/// mass are left alone unless the graph says the vertex has neighbours, in
/// which case a row that cannot reach 1 raises uncorrectable-row.
Eigen::MatrixXd stochastic_correction(const Eigen::MatrixXd& p,
                                      const CombinatorialGraph* a = nullptr);
WeightScheme stochastic_correction(const WeightScheme& p);
WeightScheme stochastic_correction(const CombinatorialGraph& a, const WeightScheme& p);

}  // namespace curvflow
