#include "curvflow/weights.hpp"

#include <cmath>
#include <string>

#include "curvflow/errors.hpp"
#include "curvflow/rng.hpp"

namespace curvflow {

void ToleranceConfig::validate() const {
  if (!(threshold > 0) || !(norm_tolerance > 0) || !(lim_tolerance > 0))
    fail(ErrorKind::InvalidArgument, "tolerances must be strictly positive");
  if (!(support_eps >= 0)) fail(ErrorKind::InvalidArgument, "support_eps must be >= 0");
}

WeightScheme::WeightScheme(Eigen::MatrixXd p) : p_(std::move(p)) {
  if (p_.rows() != p_.cols()) fail(ErrorKind::InvalidArgument, "weight matrix must be square");
  if (!p_.allFinite()) fail(ErrorKind::InvalidArgument, "weight matrix has non-finite entries");
  if (p_.size() > 0 && p_.minCoeff() < 0)
    fail(ErrorKind::InvalidArgument, "transition rates must be non-negative");
}

WeightScheme::WeightScheme(const CombinatorialGraph& a, Eigen::MatrixXd p)
    : WeightScheme(std::move(p)) {
  validate_support(a, p_);
}

void validate_support(const CombinatorialGraph& a, const Eigen::MatrixXd& p) {
  if (p.rows() != a.size() || p.cols() != a.size())
    fail(ErrorKind::InvalidArgument, "weight matrix size does not match the graph");
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < a.size(); ++y)
      if (x != y && p(x, y) > 0 && !a.has_edge(x, y))
        fail(ErrorKind::InvalidArgument, "positive rate p_" + std::to_string(x) + "_" +
                                             std::to_string(y) + " on a non-edge");
}

WeightScheme randomizer(const CombinatorialGraph& a, double threshold, bool laziness,
                        std::uint64_t seed) {
  if (!(threshold >= 0 && threshold <= 1))
    fail(ErrorKind::InvalidArgument, "threshold must lie in [0,1]");
  const int n = a.size();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  Rng rng(seed);
  for (int x = 0; x < n; ++x) {
    std::vector<Vertex> slots = a.out_neighbors(x);
    if (slots.empty()) {
      if (laziness) p(x, x) = 1.0;
      continue;
    }
    if (laziness) slots.push_back(x);
    const double k = static_cast<double>(slots.size());
    if (k * threshold > 1.0)
      fail(ErrorKind::InfeasibleThreshold,
           "vertex " + std::to_string(x) + " cannot carry " + std::to_string(slots.size()) +
               " rates of at least " + std::to_string(threshold));
    std::vector<double> draw(slots.size());
    bool ok = false;
    for (int attempt = 0; attempt < kRandomizerRetries && !ok; ++attempt) {
      double sum = 0;
      for (auto& d : draw) sum += (d = rng.uniform(threshold, 1.0));
      ok = true;
      for (auto& d : draw) {
        d /= sum;
        if (d < threshold) ok = false;
      }
    }
    if (!ok)
      fail(ErrorKind::RetryLimitExceeded,
           "randomizer: no admissible rates for vertex " + std::to_string(x));
    for (std::size_t i = 0; i < slots.size(); ++i) p(x, slots[i]) = draw[i];
  }
  return WeightScheme(a, std::move(p));
}

WeightScheme srw(const CombinatorialGraph& a, bool laziness) {
  const int n = a.size();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    const auto nb = a.out_neighbors(x);
    const double share = 1.0 / static_cast<double>(nb.size() + (laziness ? 1 : 0));
    if (nb.empty()) {
      if (laziness) p(x, x) = 1.0;
      continue;
    }
    for (Vertex y : nb) p(x, y) = share;
    if (laziness) p(x, x) = share;
  }
  return WeightScheme(a, std::move(p));
}

WeightScheme cart_prod_prob(const WeightScheme& p_scheme, const WeightScheme& q_scheme, double p,
                            double q, double norm_tolerance) {
  if (p < 0 || q < 0 || std::abs(p + q - 1.0) > norm_tolerance)
    fail(ErrorKind::InvalidArgument, "cart_prod_prob: weights must be non-negative and sum to 1");
  const int n = p_scheme.size();
  const int m = q_scheme.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n * m, n * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const int u = i * m + j;
      for (int ii = 0; ii < n; ++ii) out(u, ii * m + j) += p * p_scheme(i, ii);
      for (int jj = 0; jj < m; ++jj) out(u, i * m + jj) += q * q_scheme(j, jj);
    }
  return WeightScheme(std::move(out));
}

bool is_markovian(const Eigen::MatrixXd& p, double norm_tolerance) {
  for (Eigen::Index x = 0; x < p.rows(); ++x)
    if (!(std::abs(p.row(x).sum() - 1.0) <= norm_tolerance)) return false;
  return true;
}

bool is_totally_degenerate(const CombinatorialGraph& a, const WeightScheme& p, double threshold) {
  if (!a.is_unmixed())
    fail(ErrorKind::UnsupportedInput, "degeneracy test needs a graph without one-sided edges");
  for (int x = 0; x < a.size(); ++x)
    for (int y = x + 1; y < a.size(); ++y)
      if (a.has_edge(x, y) && p(x, y) >= threshold && p(y, x) >= threshold) return false;
  return true;
}

bool is_weakly_connected(const WeightScheme& p, double threshold) {
  const int n = p.size();
  CombinatorialGraph support(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && (p(x, y) >= threshold || p(y, x) >= threshold)) support.set_edge(x, y);
  return is_connected(support);
}

Eigen::MatrixXd stochastic_correction(const Eigen::MatrixXd& p, const CombinatorialGraph* a) {
  Eigen::MatrixXd out = p;
  for (Eigen::Index x = 0; x < p.rows(); ++x) {
    const double lazy = p(x, x);
    const double off = p.row(x).sum() - lazy;
    const bool has_neighbors = a ? a->out_degree(static_cast<Vertex>(x)) > 0 : off > 0;
    if (!has_neighbors) continue;
    const double target = 1.0 - lazy;
    if (target < 0 || (off <= 0 && target > 0))
      fail(ErrorKind::UncorrectableRow,
           "row " + std::to_string(x) + " cannot be normalized by rescaling its off-diagonal rates");
    if (off <= 0) continue;
    const double factor = target / off;
    for (Eigen::Index y = 0; y < p.cols(); ++y)
      if (y != x) out(x, y) = p(x, y) * factor;
  }
  return out;
}

WeightScheme stochastic_correction(const WeightScheme& p) {
  return WeightScheme(stochastic_correction(p.matrix()));
}

WeightScheme stochastic_correction(const CombinatorialGraph& a, const WeightScheme& p) {
  return WeightScheme(a, stochastic_correction(p.matrix(), &a));
}

}  // namespace curvflow
