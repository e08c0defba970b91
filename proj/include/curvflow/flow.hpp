#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "curvflow/bakry_emery.hpp"
#include "curvflow/graph.hpp"
#include "curvflow/weights.hpp"

namespace curvflow {

/// Rate derivative as a function of the current rates.
using Field = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

/// Per-vertex normalization values C_x as a function of the current rates.
using NormalizationProvider = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;

/// Matrix form: row x is -4 Q(x) 1 + 2 C_x p_x on the support sphere. Edges of
/// `a` whose rate is currently zero get sum_{y' != y} p_xy' p_y'y, so rates
/// inside triangles can regrow. Diagonal and isolated rows are zero.
Eigen::MatrixXd flow_rhs(const CombinatorialGraph& a, const Eigen::MatrixXd& p,
                         const Eigen::VectorXd& c, double support_eps = 0.0);

/// Closed-form rate derivative of the Markov-preserving flow, summed over the
/// combinatorial neighbours of each vertex. Row sums of the derivative vanish
/// identically.
Eigen::MatrixXd normalized_flow_rhs(const CombinatorialGraph& a, const Eigen::MatrixXd& p);

/// K^d_inf(x) per vertex, 0 at isolated vertices. Throws not-markovian.
Eigen::VectorXd k_inf_bounds(const CombinatorialGraph& a, const Eigen::MatrixXd& p,
                             double norm_tolerance = 1e-3, double support_eps = 0.0);

/// Same values without the Markov check; for use inside integrators.
Eigen::VectorXd distance_curvatures(const Eigen::MatrixXd& p, double support_eps = 0.0);

/// Classical RK4 step. The diagonal is copied from `p` and negative rates are
/// clamped to zero. Throws DivergenceError when any stage is non-finite.
Eigen::MatrixXd rk4_step(const Eigen::MatrixXd& p, double dt, const Field& field, double t = 0,
                         std::size_t step = 0);

struct FlowTrajectory {
  double dt = 0;
  CombinatorialGraph graph;
  std::vector<WeightScheme> schemes;  // at t = 0, dt, 2 dt, ...
  std::vector<double> corrections;    // times of stochastic correction
  bool stopped = false;               // ended early on a Stop decision

  double time(std::size_t i) const { return static_cast<double>(i) * dt; }
};

/// Flow with an arbitrary normalization; C defaults to zero. No correction.
FlowTrajectory curv_flow(const CombinatorialGraph& a, const WeightScheme& p0, double t_max,
                         double dt = 0.3, const NormalizationProvider& c = {});

enum class CorrectionDecision { Stop, CorrectAlways, CorrectOnce };

/// How to react when a row sum drifts beyond norm_tolerance with automatic
/// correction switched off. Called from the integrating thread.
struct CorrectionHandler {
  std::function<CorrectionDecision(double t)> decide;
  std::function<void(double t)> notify;  // after every applied correction
};

struct NormFlowOptions {
  double dt = 0.3;
  bool stoch_corr = true;
  double norm_tolerance = 1e-3;
  CorrectionHandler handler;
};

/// Markov-preserving flow up to t_max. Without automatic correction and
/// without a decide callback, drift raises norm-tolerance-exceeded.
FlowTrajectory norm_curv_flow(const CombinatorialGraph& a, const WeightScheme& p0, double t_max,
                              const NormFlowOptions& opt = {});

struct LimitResult {
  WeightScheme limit;
  double t_conv = 0;
  bool converged = false;
  std::vector<double> corrections;
};

/// Resumable state of a limit search.
struct LimitCheckpoint {
  double dt = 0;
  std::size_t step = 0;                // index of window.back()
  std::deque<Eigen::MatrixXd> window;  // up to the last 20 time units of snapshots
  bool always_correct = false;
  std::vector<double> corrections;
};

struct LimitOptions {
  double dt = 0.3;
  bool stoch_corr = true;
  double norm_tolerance = 1e-3;
  double lim_tolerance = 1e-3;
  double t_lim = 10000;
  CorrectionHandler handler;
  double checkpoint_every = 50;  // time units; <= 0 disables
  std::function<void(const LimitCheckpoint&)> on_checkpoint;
  const LimitCheckpoint* resume = nullptr;
};

inline constexpr double kLimitWindow = 10.0;

/// Steps in one comparison window: the fewest spanning at least 10 time units.
int window_steps(double dt);

/// Integrates until the snapshots one and two windows apart agree within
/// lim_tolerance and returns the earliest of the three. Past t_lim the latest
/// snapshot is returned with converged = false and t_conv = t_lim.
/// A Stop decision raises flow-stopped.
LimitResult norm_curv_flow_lim(const CombinatorialGraph& a, const WeightScheme& p0,
                               const LimitOptions& opt = {});

struct CurvatureSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values[snapshot][vertex]
};

/// Curvature of every k-th snapshot.
CurvatureSeries calc_curvatures(const FlowTrajectory& traj, Dimension n, int k = 1,
                                double support_eps = 0.0);

/// Upper bound of every k-th snapshot; NaN at isolated vertices.
CurvatureSeries calc_curv_upper_bound(const FlowTrajectory& traj, Dimension n, int k = 1,
                                      double support_eps = 0.0);

}  // namespace curvflow
