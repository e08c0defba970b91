#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "curvflow/graph.hpp"
#include "curvflow/weights.hpp"

namespace curvflow {

/// Dimension parameter N in (0, inf]. Infinity is a distinct state so the
/// 1/N term vanishes exactly instead of through a large float.
class Dimension {
 public:
  static Dimension infinite() noexcept { return Dimension(); }
  static Dimension finite(double n);

  bool is_infinite() const noexcept { return infinite_; }
  double inverse() const noexcept { return infinite_ ? 0.0 : 1.0 / n_; }
  double value() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : n_;
  }

 private:
  Dimension() = default;
  bool infinite_ = true;
  double n_ = 0;
};

/// Parses "inf" / "infinity" or a positive number.
Dimension parse_dimension(const std::string& text);

inline constexpr double kPinvCutoff = 1e-10;

struct LocalBall {
  std::vector<Vertex> s1;
  std::vector<Vertex> s2;
};

struct LocalCurvatureData {
  Vertex x = 0;
  std::vector<Vertex> s1;
  std::vector<Vertex> s2;
  Eigen::VectorXd delta;   // p_{x, s1[i]}
  Eigen::MatrixXd gamma;   // on S1
  Eigen::MatrixXd gamma2;  // on S1 then S2
  Eigen::MatrixXd q;       // Schur complement on S1

  int m() const noexcept { return static_cast<int>(s1.size()); }
  int n() const noexcept { return static_cast<int>(s2.size()); }
  bool isolated() const noexcept { return s1.empty(); }
};

/// Spheres of radius 1 and 2 in the support digraph (rates > support_eps).
LocalBall local_ball(const Eigen::MatrixXd& p, Vertex x, double support_eps = 0.0);

struct DeltaGamma {
  Eigen::VectorXd delta;
  Eigen::MatrixXd gamma;
};

DeltaGamma delta_gamma(const Eigen::MatrixXd& p, Vertex x, const std::vector<Vertex>& s1);

/// Gamma_2(e_u, e_v)(x) for u, v in S1 then S2, from the operator identities.
Eigen::MatrixXd gamma2_matrix(const Eigen::MatrixXd& p, Vertex x, const std::vector<Vertex>& s1,
                              const std::vector<Vertex>& s2, double support_eps = 0.0);

/// Schur complement of the S2 block. Throws psd-violation when that block has
/// a clearly negative eigenvalue.
Eigen::MatrixXd q_matrix(const Eigen::MatrixXd& gamma2, int m, int n,
                         double pinv_cutoff = kPinvCutoff);

/// Moore-Penrose pseudoinverse of a symmetric matrix via its eigendecomposition.
Eigen::MatrixXd symmetric_pinv(const Eigen::MatrixXd& a, double cutoff = kPinvCutoff);

LocalCurvatureData local_curvature_data(const Eigen::MatrixXd& p, Vertex x,
                                        double support_eps = 0.0);

/// K_N(x); 0 for isolated vertices.
double curvature(const Eigen::MatrixXd& p, Vertex x, Dimension n, double support_eps = 0.0);
double curvature(const LocalCurvatureData& local, Dimension n);

/// Curvature of the distance function d(x, .). Throws undefined-for-isolated.
double curvature_upper_bound(const Eigen::MatrixXd& p, Vertex x, Dimension n,
                             double support_eps = 0.0);
double curvature_upper_bound(const LocalCurvatureData& local, Dimension n);

struct CurvatureResult {
  std::vector<double> k;
  Dimension n = Dimension::infinite();
};

CurvatureResult curvatures(const Eigen::MatrixXd& p, Dimension n,
                           const ToleranceConfig& tol = {});
inline CurvatureResult curvatures(const WeightScheme& p, Dimension n,
                                  const ToleranceConfig& tol = {}) {
  return curvatures(p.matrix(), n, tol);
}

/// One line of a curvature report. k_upper is NaN for isolated vertices;
/// sphere_mismatch flags vertices whose support spheres differ from the
/// combinatorial ones (zero rates on edges).
struct CurvatureRow {
  Vertex vertex = 0;
  double k = 0;
  double k_upper = 0;
  bool sphere_mismatch = false;
};

std::vector<CurvatureRow> curvature_report(const CombinatorialGraph& a, const WeightScheme& p,
                                           Dimension n, const ToleranceConfig& tol = {});

/// max over non-isolated x of |Q(x) 1 - K^d_inf(x) p_x / 2|_inf.
double sharpness_defect(const Eigen::MatrixXd& p, double support_eps = 0.0);

/// Throws not-markovian if P is not Markovian within norm_tolerance.
bool is_curvature_sharp(const CombinatorialGraph& a, const WeightScheme& p, double norm_tolerance,
                        double threshold);

}  // namespace curvflow
