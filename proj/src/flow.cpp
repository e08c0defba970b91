#include "curvflow/flow.hpp"

#include <cmath>
#include <sstream>

#include "curvflow/errors.hpp"

namespace curvflow {

namespace {

std::vector<std::vector<Vertex>> neighbor_lists(const CombinatorialGraph& a) {
  std::vector<std::vector<Vertex>> nb(a.size());
  for (int x = 0; x < a.size(); ++x) nb[x] = a.out_neighbors(x);
  return nb;
}

void check_shapes(const CombinatorialGraph& a, const Eigen::MatrixXd& p) {
  if (p.rows() != a.size() || p.cols() != a.size())
    fail(ErrorKind::InvalidArgument, "weight matrix size does not match the graph");
}

bool drifted(const Eigen::MatrixXd& p, double tol) {
  for (Eigen::Index x = 0; x < p.rows(); ++x) {
    if (p.row(x).isZero(0.0)) continue;  // isolated non-lazy rows stay zero
    if (std::abs(p.row(x).sum() - 1.0) > tol) return true;
  }
  return false;
}

std::size_t steps_until(double t_max, double dt) {
  return static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
}

struct DriftPolicy {
  const CombinatorialGraph& a;
  bool stoch_corr;
  double tol;
  const CorrectionHandler& handler;
  bool always = false;
  std::vector<double> log;

  // Returns false when the caller should stop.
  bool apply(Eigen::MatrixXd& p, double t) {
    if (!drifted(p, tol)) return true;
    if (!stoch_corr && !always) {
      if (!handler.decide) {
        std::ostringstream os;
        os << "norm_tolerance exceeded at time t = " << t;
        fail(ErrorKind::NormToleranceExceeded, os.str());
      }
      switch (handler.decide(t)) {
        case CorrectionDecision::Stop: return false;
        case CorrectionDecision::CorrectAlways: always = true; break;
        case CorrectionDecision::CorrectOnce: break;
      }
    }
    p = stochastic_correction(p, &a);
    log.push_back(t);
    if (handler.notify) handler.notify(t);
    return true;
  }
};

}  // namespace

Eigen::MatrixXd flow_rhs(const CombinatorialGraph& a, const Eigen::MatrixXd& p,
                         const Eigen::VectorXd& c, double support_eps) {
  check_shapes(a, p);
  const int n = a.size();
  if (c.size() != n) fail(ErrorKind::InvalidArgument, "one normalization value per vertex needed");
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    const auto local = local_curvature_data(p, x, support_eps);
    if (local.isolated()) continue;
    const Eigen::VectorXd row = -4.0 * local.q.rowwise().sum() + 2.0 * c(x) * local.delta;
    for (int i = 0; i < local.m(); ++i) r(x, local.s1[i]) = row(i);
    const auto nb = a.out_neighbors(x);
    for (Vertex y : nb) {
      if (p(x, y) > support_eps) continue;
      double inject = 0;
      for (Vertex yp : nb)
        if (yp != y) inject += p(x, yp) * p(yp, y);
      r(x, y) = inject;
    }
  }
  return r;
}

Eigen::MatrixXd normalized_flow_rhs(const CombinatorialGraph& a, const Eigen::MatrixXd& p) {
  check_shapes(a, p);
  const int n = a.size();
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
  const auto nbs = neighbor_lists(a);
  for (int x = 0; x < n; ++x) {
    const auto& nb = nbs[x];
    double d = 0, ax = 0, cx = 0;
    for (Vertex y : nb) {
      d += p(x, y);
      ax += p(x, y) * p(y, x);
      for (Vertex yy : nb) cx += p(x, y) * p(y, yy);
    }
    if (d <= 0) continue;
    const double common = (4.0 * ax + cx) / d;
    for (Vertex y : nb) {
      double out = 0, inject = 0;
      for (Vertex yp : nb) {
        if (yp == y) continue;
        out += p(y, yp);
        inject += p(x, yp) * p(yp, y);
      }
      r(x, y) = p(x, y) * (-4.0 * p(y, x) - 2.0 * out + common - p(y, y)) + inject;
    }
  }
  return r;
}

Eigen::VectorXd distance_curvatures(const Eigen::MatrixXd& p, double support_eps) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(p.rows());
  for (int x = 0; x < p.rows(); ++x) {
    const auto local = local_curvature_data(p, x, support_eps);
    if (!local.isolated()) c(x) = curvature_upper_bound(local, Dimension::infinite());
  }
  return c;
}

Eigen::VectorXd k_inf_bounds(const CombinatorialGraph& a, const Eigen::MatrixXd& p,
                             double norm_tolerance, double support_eps) {
  check_shapes(a, p);
  if (!is_markovian(p, norm_tolerance))
    fail(ErrorKind::NotMarkovian, "upper curvature bounds need a Markovian scheme");
  return distance_curvatures(p, support_eps);
}

Eigen::MatrixXd rk4_step(const Eigen::MatrixXd& p, double dt, const Field& field, double t,
                         std::size_t step) {
  if (!(dt > 0)) fail(ErrorKind::InvalidArgument, "dt must be positive");
  auto checked = [&](Eigen::MatrixXd k) {
    if (!k.allFinite()) throw DivergenceError(t, step);
    return k;
  };
  const Eigen::MatrixXd k1 = checked(field(p));
  const Eigen::MatrixXd k2 = checked(field(p + 0.5 * dt * k1));
  const Eigen::MatrixXd k3 = checked(field(p + 0.5 * dt * k2));
  const Eigen::MatrixXd k4 = checked(field(p + dt * k3));
  Eigen::MatrixXd out = p + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!out.allFinite()) throw DivergenceError(t + dt, step + 1);
  out = out.cwiseMax(0.0);
  out.diagonal() = p.diagonal();
  return out;
}

FlowTrajectory curv_flow(const CombinatorialGraph& a, const WeightScheme& p0, double t_max,
                         double dt, const NormalizationProvider& c) {
  check_shapes(a, p0.matrix());
  if (!(t_max >= 0)) fail(ErrorKind::InvalidArgument, "t_max must be non-negative");
  if (!(dt > 0)) fail(ErrorKind::InvalidArgument, "dt must be positive");
  FlowTrajectory traj;
  traj.dt = dt;
  traj.graph = a;
  traj.schemes.push_back(p0);
  const Field field = [&](const Eigen::MatrixXd& p) {
    const Eigen::VectorXd cv = c ? c(p) : Eigen::VectorXd::Zero(p.rows());
    return flow_rhs(a, p, cv);
  };
  const std::size_t steps = steps_until(t_max, dt);
  Eigen::MatrixXd p = p0.matrix();
  for (std::size_t s = 0; s < steps; ++s) {
    p = rk4_step(p, dt, field, static_cast<double>(s) * dt, s);
    traj.schemes.emplace_back(p);
  }
  return traj;
}

FlowTrajectory norm_curv_flow(const CombinatorialGraph& a, const WeightScheme& p0, double t_max,
                              const NormFlowOptions& opt) {
  check_shapes(a, p0.matrix());
  if (!(t_max >= 0)) fail(ErrorKind::InvalidArgument, "t_max must be non-negative");
  if (!is_markovian(p0, opt.norm_tolerance))
    fail(ErrorKind::NotMarkovian, "the normalized flow needs a Markovian initial scheme");
  FlowTrajectory traj;
  traj.dt = opt.dt;
  traj.graph = a;
  traj.schemes.push_back(p0);
  const Field field = [&](const Eigen::MatrixXd& p) { return normalized_flow_rhs(a, p); };
  DriftPolicy policy{a, opt.stoch_corr, opt.norm_tolerance, opt.handler, false, {}};
  const std::size_t steps = steps_until(t_max, opt.dt);
  Eigen::MatrixXd p = p0.matrix();
  for (std::size_t s = 0; s < steps; ++s) {
    p = rk4_step(p, opt.dt, field, static_cast<double>(s) * opt.dt, s);
    if (!policy.apply(p, static_cast<double>(s + 1) * opt.dt)) {
      traj.stopped = true;
      break;
    }
    traj.schemes.emplace_back(p);
  }
  traj.corrections = std::move(policy.log);
  return traj;
}

int window_steps(double dt) {
  if (!(dt > 0) || dt > kLimitWindow)
    fail(ErrorKind::InvalidArgument, "dt must lie in (0, 10] for the limit criterion");
  // Smallest whole number of steps spanning at least 10 time units; exact
  // when dt divides 10 (0.3 gives 34 steps, i.e. 10.2 time units).
  return static_cast<int>(std::ceil(kLimitWindow / dt - 1e-9));
}

LimitResult norm_curv_flow_lim(const CombinatorialGraph& a, const WeightScheme& p0,
                               const LimitOptions& opt) {
  check_shapes(a, p0.matrix());
  if (!(opt.t_lim > 0)) fail(ErrorKind::InvalidArgument, "t_lim must be positive");
  if (!(opt.lim_tolerance > 0)) fail(ErrorKind::InvalidArgument, "lim_tolerance must be positive");
  if (!is_markovian(p0, opt.norm_tolerance))
    fail(ErrorKind::NotMarkovian, "the normalized flow needs a Markovian initial scheme");
  const double dt = opt.dt;
  const std::size_t w = static_cast<std::size_t>(window_steps(dt));
  const std::size_t every =
      opt.checkpoint_every > 0 ? std::max<std::size_t>(1, std::llround(opt.checkpoint_every / dt))
                               : 0;

  DriftPolicy policy{a, opt.stoch_corr, opt.norm_tolerance, opt.handler, false, {}};
  std::deque<Eigen::MatrixXd> window;
  std::size_t s = 0;
  if (opt.resume) {
    if (std::abs(opt.resume->dt - dt) > 1e-12 || opt.resume->window.empty())
      fail(ErrorKind::InvalidArgument, "checkpoint does not match this flow");
    window = opt.resume->window;
    s = opt.resume->step;
    policy.always = opt.resume->always_correct;
    policy.log = opt.resume->corrections;
    for (const auto& m : window) check_shapes(a, m);
  } else {
    window.push_back(p0.matrix());
  }

  const Field field = [&](const Eigen::MatrixXd& p) { return normalized_flow_rhs(a, p); };
  auto within = [&](const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
    return (u - v).cwiseAbs().maxCoeff() < opt.lim_tolerance;
  };

  while (true) {
    if (s >= 2 * w && window.size() == 2 * w + 1) {
      const auto& oldest = window.front();
      if (within(oldest, window[w]) && within(oldest, window.back()))
        return {WeightScheme(oldest), static_cast<double>(s - 2 * w) * dt, true,
                std::move(policy.log)};
    }
    if (static_cast<double>(s) * dt >= opt.t_lim - 1e-9 * dt)
      return {WeightScheme(window.back()), opt.t_lim, false, std::move(policy.log)};

    Eigen::MatrixXd p = rk4_step(window.back(), dt, field, static_cast<double>(s) * dt, s);
    ++s;
    if (!policy.apply(p, static_cast<double>(s) * dt)) {
      std::ostringstream os;
      os << "flow stopped at t = " << static_cast<double>(s) * dt;
      fail(ErrorKind::FlowStopped, os.str());
    }
    window.push_back(std::move(p));
    if (window.size() > 2 * w + 1) window.pop_front();

    if (every && opt.on_checkpoint && s % every == 0)
      opt.on_checkpoint(LimitCheckpoint{dt, s, window, policy.always, policy.log});
  }
}

namespace {
template <typename F>
CurvatureSeries series(const FlowTrajectory& traj, int k, F per_vertex) {
  if (k < 1) fail(ErrorKind::InvalidArgument, "stride k must be >= 1");
  CurvatureSeries out;
  for (std::size_t i = 0; i < traj.schemes.size(); i += static_cast<std::size_t>(k)) {
    const auto& p = traj.schemes[i].matrix();
    std::vector<double> row(p.rows());
    for (int x = 0; x < p.rows(); ++x) row[x] = per_vertex(p, x);
    out.times.push_back(traj.time(i));
    out.values.push_back(std::move(row));
  }
  return out;
}
}  // namespace

CurvatureSeries calc_curvatures(const FlowTrajectory& traj, Dimension n, int k,
                                double support_eps) {
  return series(traj, k, [&](const Eigen::MatrixXd& p, Vertex x) {
    return curvature(p, x, n, support_eps);
  });
}

CurvatureSeries calc_curv_upper_bound(const FlowTrajectory& traj, Dimension n, int k,
                                      double support_eps) {
  return series(traj, k, [&](const Eigen::MatrixXd& p, Vertex x) {
    const auto local = local_curvature_data(p, x, support_eps);
    return local.isolated() ? std::numeric_limits<double>::quiet_NaN()
                            : curvature_upper_bound(local, n);
  });
}

}  // namespace curvflow
