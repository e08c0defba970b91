#include "curvflow/bakry_emery.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curvflow/errors.hpp"

namespace curvflow {

Dimension Dimension::finite(double n) {
  if (!(n > 0) || !std::isfinite(n))
    fail(ErrorKind::InvalidArgument, "dimension must be a positive number or infinity");
  Dimension d;
  d.infinite_ = false;
  d.n_ = n;
  return d;
}

Dimension parse_dimension(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "inf" || t == "infinity" || t == "oo") return Dimension::infinite();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(ErrorKind::InvalidArgument, "cannot parse dimension '" + text + "'");
  }
  if (used != text.size()) fail(ErrorKind::InvalidArgument, "cannot parse dimension '" + text + "'");
  if (std::isinf(v) && v > 0) return Dimension::infinite();
  return Dimension::finite(v);
}

LocalBall local_ball(const Eigen::MatrixXd& p, Vertex x, double support_eps) {
  const int n = static_cast<int>(p.rows());
  LocalBall ball;
  std::vector<char> seen(n, 0);
  seen[x] = 1;
  for (int y = 0; y < n; ++y)
    if (y != x && p(x, y) > support_eps) {
      ball.s1.push_back(y);
      seen[y] = 1;
    }
  for (Vertex y : ball.s1)
    for (int z = 0; z < n; ++z)
      if (z != y && !seen[z] && p(y, z) > support_eps) seen[z] = 2;
  for (int z = 0; z < n; ++z)
    if (seen[z] == 2) ball.s2.push_back(z);
  return ball;
}

DeltaGamma delta_gamma(const Eigen::MatrixXd& p, Vertex x, const std::vector<Vertex>& s1) {
  const int m = static_cast<int>(s1.size());
  DeltaGamma out{Eigen::VectorXd(m), Eigen::MatrixXd::Zero(m, m)};
  for (int i = 0; i < m; ++i) {
    out.delta(i) = p(x, s1[i]);
    out.gamma(i, i) = 0.5 * out.delta(i);
  }
  return out;
}

Eigen::MatrixXd gamma2_matrix(const Eigen::MatrixXd& p, Vertex x, const std::vector<Vertex>& s1,
                              const std::vector<Vertex>& s2, double support_eps) {
  // Local coordinates: 0 is x, then S1, then S2. Every function vanishes at x,
  // so the first row and column are dropped at the end.
  const int total = static_cast<int>(p.rows());
  const int m = static_cast<int>(s1.size());
  const int k = 1 + m + static_cast<int>(s2.size());
  std::vector<int> loc(total, -1);
  loc[x] = 0;
  for (int i = 0; i < m; ++i) loc[s1[i]] = 1 + i;
  for (std::size_t i = 0; i < s2.size(); ++i) loc[s2[i]] = 1 + m + static_cast<int>(i);

  // Delta at v as a row vector over local coordinates, and 2*Gamma at v as a
  // quadratic form; both only see support edges out of v.
  auto laplacian = [&](Vertex v) {
    Eigen::VectorXd l = Eigen::VectorXd::Zero(k);
    for (int z = 0; z < total; ++z)
      if (z != v && p(v, z) > support_eps) {
        l(loc[z]) += p(v, z);
        l(loc[v]) -= p(v, z);
      }
    return l;
  };
  auto add_gamma = [&](Eigen::MatrixXd& g, Vertex v, double scale) {
    const int lv = loc[v];
    for (int z = 0; z < total; ++z)
      if (z != v && p(v, z) > support_eps) {
        const double w = 0.5 * scale * p(v, z);
        const int lz = loc[z];
        g(lz, lz) += w;
        g(lv, lv) += w;
        g(lz, lv) -= w;
        g(lv, lz) -= w;
      }
  };

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k);  // Delta Gamma(e_u, e_v)(x)
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(k, k);  // Gamma(e_u, Delta e_v)(x)
  const Eigen::VectorXd lx = laplacian(x);
  double mass = 0;
  for (Vertex y : s1) mass += p(x, y);
  for (Vertex y : s1) {
    const double pxy = p(x, y);
    add_gamma(h, y, pxy);
    const Eigen::VectorXd dl = 0.5 * pxy * (laplacian(y) - lx);
    j.row(loc[y]) += dl.transpose();
    j.row(0) -= dl.transpose();
  }
  add_gamma(h, x, -mass);
  Eigen::MatrixXd g2 = 0.5 * (h - j - j.transpose());
  return g2.bottomRightCorner(k - 1, k - 1);
}

Eigen::MatrixXd symmetric_pinv(const Eigen::MatrixXd& a, double cutoff) {
  if (a.size() == 0) return a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > cutoff * top) inv(i) = 1.0 / ev(i);
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd q_matrix(const Eigen::MatrixXd& gamma2, int m, int n, double pinv_cutoff) {
  const Eigen::MatrixXd a = gamma2.topLeftCorner(m, m);
  if (n == 0) return a;
  const Eigen::MatrixXd b = gamma2.topRightCorner(m, n);
  const Eigen::MatrixXd c = gamma2.bottomRightCorner(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double scale = std::max(gamma2.cwiseAbs().maxCoeff(), 1e-300);
  if (ev(0) < -1e-9 * scale)
    fail(ErrorKind::PsdViolation, "S2 block of Gamma_2 has eigenvalue " + std::to_string(ev(0)));
  const double top = ev.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    if (ev(i) > pinv_cutoff * top) inv(i) = 1.0 / ev(i);
  const Eigen::MatrixXd bv = b * es.eigenvectors();
  Eigen::MatrixXd q = a - bv * inv.asDiagonal() * bv.transpose();
  return 0.5 * (q + q.transpose());
}

LocalCurvatureData local_curvature_data(const Eigen::MatrixXd& p, Vertex x, double support_eps) {
  if (x < 0 || x >= p.rows()) fail(ErrorKind::InvalidArgument, "vertex index out of range");
  LocalCurvatureData d;
  d.x = x;
  auto ball = local_ball(p, x, support_eps);
  d.s1 = std::move(ball.s1);
  d.s2 = std::move(ball.s2);
  auto dg = delta_gamma(p, x, d.s1);
  d.delta = std::move(dg.delta);
  d.gamma = std::move(dg.gamma);
  d.gamma2 = gamma2_matrix(p, x, d.s1, d.s2, support_eps);
  d.q = q_matrix(d.gamma2, d.m(), d.n());
  return d;
}

double curvature(const LocalCurvatureData& local, Dimension n) {
  if (local.isolated()) return 0.0;
  Eigen::MatrixXd mm = local.q - n.inverse() * local.delta * local.delta.transpose();
  const Eigen::VectorXd s = (0.5 * local.delta).cwiseSqrt().cwiseInverse();
  mm = s.asDiagonal() * mm * s.asDiagonal();
  if (mm.rows() == 1) return mm(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mm, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double curvature(const Eigen::MatrixXd& p, Vertex x, Dimension n, double support_eps) {
  return curvature(local_curvature_data(p, x, support_eps), n);
}

double curvature_upper_bound(const LocalCurvatureData& local, Dimension n) {
  if (local.isolated())
    fail(ErrorKind::UndefinedForIsolated,
         "upper curvature bound is undefined at isolated vertex " + std::to_string(local.x));
  Eigen::VectorXd f(local.m() + local.n());
  f.head(local.m()).setOnes();
  f.tail(local.n()).setConstant(2.0);
  const double mass = local.delta.sum();
  return (f.dot(local.gamma2 * f) - n.inverse() * mass * mass) / (0.5 * mass);
}

double curvature_upper_bound(const Eigen::MatrixXd& p, Vertex x, Dimension n, double support_eps) {
  return curvature_upper_bound(local_curvature_data(p, x, support_eps), n);
}

CurvatureResult curvatures(const Eigen::MatrixXd& p, Dimension n, const ToleranceConfig& tol) {
  CurvatureResult r;
  r.n = n;
  r.k.reserve(p.rows());
  for (int x = 0; x < p.rows(); ++x) r.k.push_back(curvature(p, x, n, tol.support_eps));
  return r;
}

std::vector<CurvatureRow> curvature_report(const CombinatorialGraph& a, const WeightScheme& p,
                                           Dimension n, const ToleranceConfig& tol) {
  if (a.size() != p.size()) fail(ErrorKind::InvalidArgument, "graph and scheme sizes differ");
  std::vector<CurvatureRow> rows;
  for (int x = 0; x < p.size(); ++x) {
    const auto local = local_curvature_data(p.matrix(), x, tol.support_eps);
    CurvatureRow row;
    row.vertex = x;
    row.k = curvature(local, n);
    row.k_upper = local.isolated() ? std::numeric_limits<double>::quiet_NaN()
                                   : curvature_upper_bound(local, n);
    for (int y = 0; y < a.size() && !row.sphere_mismatch; ++y)
      if (y != x && a.has_edge(x, y) && !(p(x, y) > tol.support_eps)) row.sphere_mismatch = true;
    for (Vertex y : local.s1)
      for (int z = 0; z < a.size() && !row.sphere_mismatch; ++z)
        if (z != y && a.has_edge(y, z) && !(p(y, z) > tol.support_eps)) row.sphere_mismatch = true;
    rows.push_back(row);
  }
  return rows;
}

double sharpness_defect(const Eigen::MatrixXd& p, double support_eps) {
  double worst = 0;
  for (int x = 0; x < p.rows(); ++x) {
    const auto local = local_curvature_data(p, x, support_eps);
    if (local.isolated() || local.m() == 1) continue;  // one neighbour: always sharp
    const double kd = curvature_upper_bound(local, Dimension::infinite());
    const Eigen::VectorXd r = local.q.rowwise().sum() - 0.5 * kd * local.delta;
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

bool is_curvature_sharp(const CombinatorialGraph& a, const WeightScheme& p, double norm_tolerance,
                        double threshold) {
  if (a.size() != p.size()) fail(ErrorKind::InvalidArgument, "graph and scheme sizes differ");
  if (!is_markovian(p, norm_tolerance))
    fail(ErrorKind::NotMarkovian, "curvature sharpness is only decided for Markovian schemes");
  return sharpness_defect(p.matrix()) <= threshold;
}

}  // namespace curvflow
