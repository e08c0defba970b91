// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria, not counting those passed via --known-deviation.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "curvflow/bakry_emery.hpp"
#include "curvflow/experiment.hpp"
#include "curvflow/flow.hpp"
#include "curvflow/graph.hpp"
#include "curvflow/stability.hpp"
#include "curvflow/weights.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "spectra.hpp"

using namespace curvflow;
using Eigen::MatrixXd;
using spectra::cd;

namespace {

class Verdict {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool passed() const { return failures_.empty(); }
  std::string summary() const {
    std::ostringstream out;
    for (const auto& f : failures_) out << " [fail: " << f << "]";
    for (const auto& n : notes_) out << " " << n;
    return out.str();
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

double max_abs(const MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool alive(const WeightScheme& p, Vertex x, Vertex y, double threshold) {
  return p(x, y) >= threshold;
}

std::vector<cd> spectrum(const CombinatorialGraph& a, const WeightScheme& p,
                         const std::vector<Vertex>& removed = {}) {
  const auto r = equilibrium_type(a, p, true, false, 1e-3, 1e-3, removed);
  return r.eigenvalues.value_or(std::vector<cd>{});
}

std::vector<Vertex> next_on_cycle(int n) {
  std::vector<Vertex> out(n);
  for (int i = 0; i < n; ++i) out[i] = (i + 1) % n;
  return out;
}

LimitOptions limit_options(double dt, double lim_tol) {
  LimitOptions opt;
  opt.dt = dt;
  opt.lim_tolerance = lim_tol;
  opt.checkpoint_every = 0;
  return opt;
}

// Random ten-vertex graph: initial and limit curvatures, limit structure.
Verdict ac1() {
  Verdict v;
  const MatrixXd p0 = fixtures::random_graph_p0();
  const auto a = fixtures::support_graph(p0);
  const WeightScheme w0(a, p0);

  const auto k0 = curvatures(w0, Dimension::infinite()).k;
  double k0_err = 0;
  for (int x = 0; x < 10; ++x) k0_err = std::max(k0_err, std::abs(k0[x] - fixtures::kRandomGraphK0[x]));
  v.expect(k0_err <= 1e-3, "initial curvature error " + fmt(k0_err, 5));

  const double lim_tol = 1e-3;
  const auto lim = norm_curv_flow_lim(a, w0, limit_options(0.1, lim_tol));
  v.expect(lim.converged, "not converged");
  v.expect(lim.t_conv >= 19.7 && lim.t_conv <= 21.7, "t_conv " + fmt(lim.t_conv, 2));
  v.note("t_conv=" + fmt(lim.t_conv, 2));

  const auto k = curvatures(lim.limit, Dimension::infinite()).k;
  const std::vector<std::pair<Vertex, double>> want_k = {
      {0, 0.875}, {1, 0.875}, {3, 0.875}, {6, 0.875}, {7, 0.773}, {5, 0.476}};
  double k_err = 0;
  for (const auto& [x, want] : want_k) k_err = std::max(k_err, std::abs(k[x] - want));
  v.expect(k_err <= 5e-3, "limit curvature error " + fmt(k_err, 5));

  // Limit support W: a K4 on {0,1,3,6} with cone tips 5 and 7.
  const std::set<Vertex> k4 = {0, 1, 3, 6};
  const std::vector<Vertex> w = {0, 1, 3, 5, 6, 7};
  double rate_err = 0;
  for (Vertex x : w)
    for (Vertex y : w) {
      if (x == y || !a.has_edge(x, y)) continue;
      const double want = k4.count(y) ? 0.25 : (y == 5 ? 0.05 : 0.20);
      rate_err = std::max(rate_err, std::abs(lim.limit(x, y) - want));
    }
  v.expect(rate_err <= 5e-3, "limit rate error " + fmt(rate_err, 5));

  const double th = 1e-3;
  const bool one_way = alive(lim.limit, 3, 4, th) != alive(lim.limit, 4, 3, th);
  const bool dead = !alive(lim.limit, 8, 9, th) && !alive(lim.limit, 9, 8, th);
  v.expect(one_way, "edge {3,4} not one-way");
  v.expect(dead, "edge {8,9} not dead both ways");

  v.expect(is_curvature_sharp(a, lim.limit, 1e-3, 10 * lim_tol), "limit not curvature sharp");
  v.note("sharpness_defect=" + fmt(sharpness_defect(lim.limit.matrix()), 6));
  return v;
}

// Cartesian products of complete graphs: two-value limits and symmetry.
Verdict ac2() {
  Verdict v;
  const std::vector<std::pair<int, int>> cases = {{2, 3}, {2, 2}, {3, 3}, {2, 4}};
  for (const auto& [n, m] : cases) {
    const auto a = cart_prod(complete(n + 1), complete(m + 1));
    const auto p0 = srw(a);
    const double denom = 2.0 * n * m + 3.0 * n + 3.0 * m;
    const double want_a = (m + 3.0) / denom;
    const double want_b = (n + 3.0) / denom;
    const std::string tag = "K" + std::to_string(n + 1) + "xK" + std::to_string(m + 1);
    if (n == 2 && m == 3) {
      v.expect(std::abs(want_a - 2.0 / 9) < 1e-15 && std::abs(want_b - 5.0 / 27) < 1e-15,
               "closed form for K3xK4");
    }

    // Edge (i,j)-(i',j) moves in the first factor and carries a(t).
    const int s = m + 1;
    auto split = [&](const MatrixXd& p, double& a_lo, double& a_hi, double& b_lo, double& b_hi) {
      a_lo = b_lo = INFINITY;
      a_hi = b_hi = -INFINITY;
      for (int x = 0; x < a.size(); ++x)
        for (Vertex y : a.out_neighbors(x)) {
          const double r = p(x, y);
          if (x % s == y % s) {
            a_lo = std::min(a_lo, r);
            a_hi = std::max(a_hi, r);
          } else {
            b_lo = std::min(b_lo, r);
            b_hi = std::max(b_hi, r);
          }
        }
    };

    const auto lim = norm_curv_flow_lim(a, p0, limit_options(0.3, 1e-5));
    v.expect(lim.converged, tag + " not converged");
    double a_lo, a_hi, b_lo, b_hi;
    split(lim.limit.matrix(), a_lo, a_hi, b_lo, b_hi);
    const double err = std::max({std::abs(a_lo - want_a), std::abs(a_hi - want_a),
                                 std::abs(b_lo - want_b), std::abs(b_hi - want_b)});
    v.expect(err <= 1e-3, tag + " limit error " + fmt(err, 6));

    NormFlowOptions fo;
    fo.dt = 0.3;
    const auto tr = norm_curv_flow(a, p0, lim.t_conv + 20.0, fo);
    double spread = 0;
    for (const auto& snap : tr.schemes) {
      split(snap.matrix(), a_lo, a_hi, b_lo, b_hi);
      spread = std::max({spread, a_hi - a_lo, b_hi - b_lo});
    }
    v.expect(spread <= 1e-9, tag + " symmetry spread " + std::to_string(spread));
    if (n == 2 && m == 3) v.note("K3xK4 a=" + fmt(a_lo, 5) + " b=" + fmt(b_lo, 5));
  }
  return v;
}

// Complete graph K6 with zero rates: limit is the simple random walk.
Verdict ac3() {
  Verdict v;
  const auto a = complete(6);
  const WeightScheme p0(a, fixtures::degenerate_k6_p0());
  const auto lim = norm_curv_flow_lim(a, p0, limit_options(0.1, 1e-3));
  v.expect(lim.converged, "not converged");
  MatrixXd off = lim.limit.matrix();
  double err = 0;
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y)
      if (x != y) err = std::max(err, std::abs(off(x, y) - 0.2));
  v.expect(err <= 1e-3, "limit error " + fmt(err, 5));
  v.expect(lim.t_conv >= 17.5 && lim.t_conv <= 19.5, "t_conv " + fmt(lim.t_conv, 2));
  v.note("t_conv=" + fmt(lim.t_conv, 2));

  NormFlowOptions fo;
  fo.dt = 0.1;
  const auto tr = norm_curv_flow(a, p0, 1.0, fo);
  v.expect(tr.schemes.back()(2, 1) > 0, "p21 still zero at t=1");
  v.expect(tr.schemes.back()(5, 4) > 0, "p54 still zero at t=1");
  return v;
}

// Octahedron: flow to the directed 4-cycle scheme, which is curvature sharp.
Verdict ac4() {
  Verdict v;
  const auto a = octahedron();
  const WeightScheme p0(a, fixtures::octahedron_p0());
  const auto lim = norm_curv_flow_lim(a, p0, limit_options(0.1, 1e-3));
  v.expect(lim.converged, "not converged");
  const double err = max_abs(lim.limit.matrix() - fixtures::octahedron_degenerate());
  v.expect(err <= 1e-2, "distance to 4-cycle scheme " + fmt(err, 5));
  v.note("t_conv=" + fmt(lim.t_conv, 2) + " distance=" + fmt(err, 5));

  const WeightScheme target(a, fixtures::octahedron_degenerate());
  v.expect(is_curvature_sharp(a, target, 1e-12, 1e-9), "4-cycle scheme not sharp at 1e-9");
  v.note("defect=" + std::to_string(sharpness_defect(target.matrix())));
  return v;
}

// Dumbbell: two K5 joined by a bridge; the limit concentrates on the bridge.
Verdict ac5() {
  Verdict v;
  const auto a = bridge_at(complete(5), complete(5), 0, 0);
  const auto lim = norm_curv_flow_lim(a, srw(a), limit_options(0.3, 1e-4));
  v.expect(lim.converged, "not converged");
  v.expect(lim.t_conv >= 70 && lim.t_conv <= 90, "t_conv " + fmt(lim.t_conv, 2));
  const std::vector<Component> parts = {
      {"K5-left", {0, 1, 2, 3, 4}}, {"K5-right", {5, 6, 7, 8, 9}}, {"bridge", {0, 5}}};
  const auto label = classify_limit(a, lim.limit, parts, 1e-3);
  v.expect(label == "bridge", "classified as " + label);
  const auto coarse = norm_curv_flow_lim(a, srw(a), limit_options(0.3, 1e-3));
  v.note("t_conv=" + fmt(lim.t_conv, 2) + " class=" + label + "; at lim_tolerance 1e-3 t_conv=" +
         fmt(coarse.t_conv, 2));
  return v;
}

// Stability spectra of the known equilibria.
Verdict ac6() {
  Verdict v;
  auto check = [&](const std::string& tag, const std::vector<cd>& got, const std::vector<cd>& want) {
    const double d = oracle::spectrum_distance(got, want);
    v.expect(d <= 1e-6, tag + " spectrum distance " + std::to_string(d));
  };
  for (int n = 2; n <= 7; ++n) {
    const auto a = complete(n + 1);
    check("K" + std::to_string(n + 1), spectrum(a, srw(a)), spectra::complete_srw_spectrum(n));
    v.expect(equilibrium_type(a, srw(a), false, false).kind == -1, "K" + std::to_string(n + 1) + " kind");
  }
  // The general formula reproduces the two smallest cases written out.
  v.expect(oracle::spectrum_distance(spectra::complete_srw_spectrum(2), {cd(-0.5), cd(-1.25), cd(-1.25)}) < 1e-15,
           "K3 formula");
  v.expect(oracle::spectrum_distance(spectra::complete_srw_spectrum(3),
                                     spectra::repeat({{cd(-2.0 / 3), 6}, {cd(-2.0), 2}})) < 1e-15,
           "K4 formula");

  const auto o = octahedron();
  const WeightScheme deg(o, fixtures::octahedron_degenerate());
  check("octahedron degenerate", spectrum(o, deg), spectra::octahedron_degenerate_spectrum());
  check("octahedron srw", spectrum(o, srw(o)), spectra::octahedron_srw_spectrum());
  v.expect(equilibrium_type(o, deg, false, false).kind == -1, "octahedron degenerate kind");
  v.expect(equilibrium_type(o, srw(o), false, false).kind == 1, "octahedron srw kind");

  for (int n = 4; n <= 12; ++n) {
    const auto a = cycle(n);
    const auto idx = enumerate_edges(a, next_on_cycle(n));
    MatrixXd adj = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) adj(i, (i + 1) % n) = adj(i, (i + n - 1) % n) = 1;
    const std::string tag = "C" + std::to_string(n);
    v.expect(max_abs(jacobian(a, srw(a), idx) - adj) <= 1e-12, tag + " srw jacobian");
    v.expect(equilibrium_type(a, srw(a), false, false).kind == 1, tag + " srw kind");
    const WeightScheme cw(a, fixtures::clockwise_cycle(n));
    v.expect(max_abs(jacobian(a, cw, idx) + 4 * MatrixXd::Identity(n, n)) <= 1e-12, tag + " clockwise jacobian");
    v.expect(equilibrium_type(a, cw, false, false).kind == -1, tag + " clockwise kind");
  }

  for (int d = 2; d <= 6; ++d) {
    const auto q = hypercube(d);
    const auto s = spectrum(q, srw(q));
    double top = -INFINITY;
    for (const auto& e : s) top = std::max(top, e.real());
    v.expect(std::abs(top - 4.0 / d) <= 1e-6, "Q" + std::to_string(d) + " top eigenvalue " + fmt(top, 8));
    v.expect(equilibrium_type(q, srw(q), false, false).kind == 1, "Q" + std::to_string(d) + " kind");
  }
  return v;
}

// Seeded batch on the wedge sum of K4, K5, K2 and K3.
Verdict ac7() {
  Verdict v;
  ExperimentConfig cfg;
  cfg.graph = fixtures::wedge_k4_k5_k2_k3();
  cfg.source = SchemeSource::Random;
  cfg.dt = 0.3;
  cfg.seed = 1;
  const std::vector<Component> parts = {
      {"K4", {0, 1, 2, 3}}, {"K5", {2, 4, 5, 6, 7}}, {"K2", {6, 8}}, {"K3", {8, 9, 10}}};
  const auto s = run_batch(cfg, 1000, parts);
  auto stat = [&](const std::string& label) {
    const auto it = s.classes.find(label);
    return it == s.classes.end() ? ClassStats{} : it->second;
  };
  const auto k4 = stat("K4"), k5 = stat("K5"), k2 = stat("K2"), k3 = stat("K3");
  v.expect(s.failed == 0, std::to_string(s.failed) + " failed runs");
  v.expect(std::abs(k5.share - 0.805) <= 0.05, "K5 share " + fmt(k5.share, 3));
  v.expect(k3.share > k4.share, "K3 share " + fmt(k3.share, 3) + " <= K4 share " + fmt(k4.share, 3));
  v.expect(k2.count == 0, "K2 count " + std::to_string(k2.count));
  v.expect(k3.mean_t_conv < k4.mean_t_conv && k4.mean_t_conv < k5.mean_t_conv, "t_conv ordering");
  std::ostringstream n;
  n << "shares K4=" << fmt(k4.share, 3) << " K5=" << fmt(k5.share, 3) << " K2=" << fmt(k2.share, 3)
    << " K3=" << fmt(k3.share, 3) << " mean t_conv K4=" << fmt(k4.mean_t_conv, 1)
    << " K5=" << fmt(k5.mean_t_conv, 1) << " K3=" << fmt(k3.mean_t_conv, 1)
    << " non_converged=" << s.non_converged << " classes=" << s.classes.size();
  v.note(n.str());
  return v;
}

// Structural properties that need no reference numbers.
Verdict ac8() {
  Verdict v;
  const Dimension inf = Dimension::infinite();
  double gamma_err = 0, sym_err = 0, psd_min = 0, bound_gap = -INFINITY, mono_gap = -INFINITY;
  double bisect_err = 0, rhs_err = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto c = oracle::random_case(seed);
    const MatrixXd& p = c.p.matrix();
    for (int x = 0; x < c.a.size(); ++x) {
      const auto d = local_curvature_data(p, x);
      if (d.isolated()) continue;
      gamma_err = std::max(gamma_err, max_abs(d.gamma - MatrixXd(0.5 * d.delta.asDiagonal())));
      sym_err = std::max(sym_err, max_abs(d.gamma2 - d.gamma2.transpose()));
      if (d.n() > 0) {
        const MatrixXd s2 = d.gamma2.bottomRightCorner(d.n(), d.n());
        psd_min = std::min(psd_min, Eigen::SelfAdjointEigenSolver<MatrixXd>(s2).eigenvalues().minCoeff());
      }
      const double kinf = curvature(d, inf);
      const double k5 = curvature(d, Dimension::finite(5));
      const double k2 = curvature(d, Dimension::finite(2));
      bound_gap = std::max({bound_gap, kinf - curvature_upper_bound(d, inf),
                            k2 - curvature_upper_bound(d, Dimension::finite(2))});
      mono_gap = std::max({mono_gap, k2 - k5, k5 - kinf});
      bisect_err = std::max({bisect_err, std::abs(kinf - oracle::bisection_curvature(p, x, 0.0)),
                             std::abs(k2 - oracle::bisection_curvature(p, x, 0.5))});
    }
    rhs_err = std::max(rhs_err, max_abs(flow_rhs(c.a, p, k_inf_bounds(c.a, p)) -
                                        normalized_flow_rhs(c.a, p)));
  }
  v.expect(gamma_err <= 1e-14, "gamma identity " + std::to_string(gamma_err));
  v.expect(sym_err <= 1e-13, "gamma2 symmetry " + std::to_string(sym_err));
  v.expect(psd_min >= -1e-12, "S2 block eigenvalue " + std::to_string(psd_min));
  v.expect(bound_gap <= 1e-10, "upper bound violated by " + std::to_string(bound_gap));
  v.expect(mono_gap <= 1e-10, "N-monotonicity violated by " + std::to_string(mono_gap));
  v.expect(bisect_err <= 1e-7, "bisection oracle " + std::to_string(bisect_err));
  v.expect(rhs_err <= 1e-9, "rhs forms " + std::to_string(rhs_err));

  // Diagonal exactness and Markov property along corrected flows.
  double markov_err = 0;
  bool diag_exact = true;
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto c = oracle::random_case(seed);
    NormFlowOptions fo;
    fo.dt = 0.1;
    const auto tr = norm_curv_flow(c.a, c.p, 10.0, fo);
    for (const auto& s : tr.schemes) {
      diag_exact = diag_exact && s.matrix().diagonal() == c.p.matrix().diagonal();
      markov_err = std::max(markov_err, (s.row_sums().array() - 1.0).abs().maxCoeff());
    }
  }
  v.expect(diag_exact, "diagonal changed");
  v.expect(markov_err <= 1e-3, "row-sum drift " + std::to_string(markov_err));

  // Zero rates on triangle-free edges stay zero.
  auto p = randomizer(cycle(5), 0.05, true, 11).matrix();
  p(0, 0) += p(0, 1);
  p(0, 1) = 0;
  NormFlowOptions fo;
  fo.dt = 0.1;
  const auto tc = norm_curv_flow(cycle(5), WeightScheme(cycle(5), p), 40.0, fo);
  bool persists = true;
  for (const auto& s : tc.schemes) persists = persists && s(0, 1) <= 1e-12;
  v.expect(persists, "zero rate regrew on a cycle");

  // Jacobian against central differences.
  for (const auto& a : {complete(3), cycle(4)}) {
    const auto idx = enumerate_edges(a);
    const MatrixXd j = jacobian(a, srw(a), idx);
    v.expect(max_abs(j - oracle::fd_jacobian(a, srw(a).matrix(), idx)) <= 1e-4, "finite-difference jacobian");
  }

  // The removed edge per source does not change the spectrum.
  Rng rng(7);
  for (const auto& [a, w] : std::vector<std::pair<CombinatorialGraph, WeightScheme>>{
           {complete(5), srw(complete(5))},
           {octahedron(), WeightScheme(octahedron(), fixtures::octahedron_degenerate())},
           {hypercube(3), srw(hypercube(3))}}) {
    const auto base = spectra::cluster_means(spectrum(a, w));
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<Vertex> rem(a.size());
      for (int x = 0; x < a.size(); ++x) {
        const auto nb = a.out_neighbors(x);
        rem[x] = nb[rng.next() % nb.size()];
      }
      v.expect(oracle::spectrum_distance(spectra::cluster_means(spectrum(a, w, rem)), base) <= 1e-8,
               "removal changed the spectrum");
    }
  }

  // Every converged limit is curvature sharp at 10 lim_tolerance.
  int limits = 0;
  for (std::uint64_t seed = 200; seed < 215; ++seed) {
    const auto c = oracle::random_case(seed, 7, false);
    const auto lim = norm_curv_flow_lim(c.a, c.p, limit_options(0.3, 1e-3));
    if (!lim.converged) continue;
    ++limits;
    v.expect(is_curvature_sharp(c.a, lim.limit, 1e-3, 1e-2), "limit of seed " + std::to_string(seed) + " not sharp");
  }
  v.note(std::to_string(limits) + " limits checked for sharpness");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<std::string> known;
  app.add_option("--known-deviation", known, "criterion ids (e.g. AC3) whose failure is documented");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"AC1 random graph flow", ac1},      {"AC2 product of complete graphs", ac2},
      {"AC3 degenerate K6", ac3},          {"AC4 octahedron", ac4},
      {"AC5 dumbbell", ac5},               {"AC6 stability spectra", ac6},
      {"AC7 wedge-sum statistics", ac7},   {"AC8 property suites", ac8},
  };
  int failed = 0, documented = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string id = name.substr(0, name.find(' '));
    const bool is_known = std::find(known.begin(), known.end(), id) != known.end();
    if (!v.passed()) ++(is_known ? documented : failed);
    std::printf("%s %s (%.1fs)%s%s\n", v.passed() ? "PASS" : "FAIL", name.c_str(), secs,
                v.passed() || !is_known ? "" : " [documented deviation]", v.summary().c_str());
    std::fflush(stdout);
  }
  std::printf("%d failed, %d failed as documented deviations\n", failed, documented);
  return failed;
}
