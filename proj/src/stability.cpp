#include "curvflow/stability.hpp"

#include <algorithm>

#include "curvflow/bakry_emery.hpp"
#include "curvflow/errors.hpp"

namespace curvflow {

int DirectedEdgeIndex::essential_count() const {
  return static_cast<int>(std::count(essential.begin(), essential.end(), 1));
}

std::vector<int> DirectedEdgeIndex::essential_edges() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (essential[i]) out.push_back(i);
  return out;
}

int DirectedEdgeIndex::find(Vertex x, Vertex y) const {
  if (x < 0 || x >= static_cast<int>(group_begin.size())) return -1;
  for (int i = group_begin[x]; i < group_end[x]; ++i)
    if (edges[i].second == y) return i;
  return -1;
}

DirectedEdgeIndex enumerate_edges(const CombinatorialGraph& a,
                                  const std::vector<Vertex>& removed_targets) {
  const int n = a.size();
  if (!removed_targets.empty() && static_cast<int>(removed_targets.size()) != n)
    fail(ErrorKind::InvalidArgument, "one removed target per vertex expected");
  DirectedEdgeIndex idx;
  for (int x = 0; x < n; ++x) {
    idx.group_begin.push_back(idx.size());
    for (Vertex y : a.out_neighbors(x)) idx.edges.emplace_back(x, y);
    idx.group_end.push_back(idx.size());
    int rem = -1;
    if (idx.group_end[x] > idx.group_begin[x]) {
      rem = idx.group_end[x] - 1;
      if (!removed_targets.empty() && removed_targets[x] >= 0) {
        rem = idx.find(x, removed_targets[x]);
        if (rem < 0) fail(ErrorKind::InvalidArgument, "removed target is not a neighbour");
      }
    }
    idx.removed.push_back(rem);
  }
  idx.essential.assign(idx.edges.size(), 1);
  for (int r : idx.removed)
    if (r >= 0) idx.essential[r] = 0;
  return idx;
}

Eigen::MatrixXd b_matrix_unchecked(const Eigen::MatrixXd& p, const DirectedEdgeIndex& idx) {
  const int k = idx.size();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(k, k);
  const int n = static_cast<int>(idx.group_begin.size());
  std::vector<std::vector<Vertex>> nb(n);
  for (int x = 0; x < n; ++x)
    for (int i = idx.group_begin[x]; i < idx.group_end[x]; ++i) nb[x].push_back(idx.edges[i].second);

  for (int j = 0; j < k; ++j) {
    const auto [x, y] = idx.edges[j];
    const auto& s = nb[x];
    auto add = [&](Vertex u, Vertex v, double val) {
      const int c = idx.find(u, v);
      if (c >= 0) b(j, c) += val;
    };
    double d = 0, back = 0, dbl = 0, out_y_all = 0, out_y = 0;
    for (Vertex a1 : s) {
      d += p(x, a1);
      back += p(x, a1) * p(a1, x);
      for (Vertex a2 : s) dbl += p(x, a1) * p(a1, a2);
      out_y_all += p(y, a1);
      if (a1 != y) out_y += p(y, a1);
    }
    const double pxy = p(x, y);
    add(x, y,
        -4.0 * p(y, x) - p(y, y) - 2.0 * out_y +
            (4.0 * pxy * p(y, x) + 4.0 * back + pxy * out_y_all + dbl) / d);
    for (Vertex a1 : s) {
      if (a1 == y) continue;
      double out_a = 0;
      for (Vertex a2 : s) out_a += p(a1, a2);
      add(x, a1, 4.0 * pxy * p(a1, x) / d + pxy * out_a / d + p(a1, y));
      add(a1, x, 4.0 * pxy * p(x, a1) / d);
      add(y, a1, pxy * (pxy / d - 2.0));
      add(a1, y, p(x, a1) * (pxy / d + 1.0));
      for (Vertex a2 : s)
        if (a2 != y && a2 != a1) add(a1, a2, pxy * p(x, a1) / d);
    }
    add(y, x, 4.0 * pxy * (pxy / d - 1.0));
  }
  return b;
}

Eigen::MatrixXd essential_projection(const DirectedEdgeIndex& idx) {
  const auto ess = idx.essential_edges();
  Eigen::MatrixXd p1 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ess.size()), idx.size());
  for (std::size_t r = 0; r < ess.size(); ++r) p1(static_cast<Eigen::Index>(r), ess[r]) = 1.0;
  return p1;
}

Eigen::MatrixXd essential_lift(const DirectedEdgeIndex& idx) {
  const auto ess = idx.essential_edges();
  Eigen::MatrixXd p2 = essential_projection(idx).transpose();
  for (std::size_t c = 0; c < ess.size(); ++c) {
    const Vertex x = idx.edges[ess[c]].first;
    p2(idx.removed[x], static_cast<Eigen::Index>(c)) -= 1.0;
  }
  return p2;
}

namespace {
void require_equilibrium(const CombinatorialGraph& a, const WeightScheme& p,
                         const DirectedEdgeIndex& idx, const ToleranceConfig& tol) {
  if (a.size() != p.size()) fail(ErrorKind::InvalidArgument, "graph and scheme sizes differ");
  if (static_cast<int>(idx.group_begin.size()) != a.size())
    fail(ErrorKind::InvalidArgument, "edge index does not match the graph");
  if (!a.is_unmixed())
    fail(ErrorKind::UnsupportedInput, "stability analysis needs a graph without one-sided edges");
  validate_support(a, p.matrix());
  if (!is_markovian(p, tol.norm_tolerance))
    fail(ErrorKind::NotAnEquilibrium, "scheme is not Markovian");
  if (sharpness_defect(p.matrix(), tol.support_eps) > tol.threshold)
    fail(ErrorKind::NotAnEquilibrium, "scheme is not curvature sharp");
}
}  // namespace

Eigen::MatrixXd b_matrix(const CombinatorialGraph& a, const WeightScheme& p,
                         const DirectedEdgeIndex& idx, const ToleranceConfig& tol) {
  require_equilibrium(a, p, idx, tol);
  return b_matrix_unchecked(p.matrix(), idx);
}

Eigen::MatrixXd jacobian(const CombinatorialGraph& a, const WeightScheme& p,
                         const DirectedEdgeIndex& idx, const ToleranceConfig& tol) {
  const Eigen::MatrixXd b = b_matrix(a, p, idx, tol);
  return essential_projection(idx) * b * essential_lift(idx);
}

std::vector<std::complex<double>> sorted_eigenvalues(const Eigen::MatrixXd& m) {
  std::vector<std::complex<double>> out;
  if (m.size() == 0) return out;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) fail(ErrorKind::InvalidArgument, "eigenvalue solver failed");
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
    return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
  });
  return out;
}

int classify_spectrum(const std::vector<std::complex<double>>& eigenvalues, double threshold) {
  if (eigenvalues.empty()) return 0;
  double top = eigenvalues.front().real();
  for (const auto& e : eigenvalues) top = std::max(top, e.real());
  if (top >= threshold) return 1;
  if (top <= -threshold) return -1;
  return 0;
}

EquilibriumReport equilibrium_type(const CombinatorialGraph& a, const WeightScheme& p,
                                   bool want_eigenvalues, bool want_jacobian,
                                   double norm_tolerance, double threshold,
                                   const std::vector<Vertex>& removed_targets) {
  EquilibriumReport report;
  ToleranceConfig tol;
  tol.norm_tolerance = norm_tolerance;
  tol.threshold = threshold;
  try {
    const auto idx = enumerate_edges(a, removed_targets);
    Eigen::MatrixXd j = jacobian(a, p, idx, tol);
    auto ev = sorted_eigenvalues(j);
    report.kind = classify_spectrum(ev, threshold);
    if (want_eigenvalues) report.eigenvalues = std::move(ev);
    if (want_jacobian) report.jacobian = std::move(j);
  } catch (const Error& e) {
    report = EquilibriumReport{};
    report.note = std::string(to_string(e.kind())) + ": " + e.what();
  }
  return report;
}

}  // namespace curvflow
