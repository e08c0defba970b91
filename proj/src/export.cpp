#include "curvflow/export.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "curvflow/errors.hpp"

namespace curvflow {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {
std::string fixed(double v, int decimals) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals) << v;
  return os.str();
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}
}  // namespace

std::string export_graph_dot(const CombinatorialGraph& a, const WeightScheme& p,
                             const DotOptions& opt) {
  if (!a.is_unmixed())
    fail(ErrorKind::UnsupportedInput, "rendering needs a graph without one-sided edges");
  if (a.size() != p.size()) fail(ErrorKind::InvalidArgument, "graph and scheme sizes differ");
  const int n = a.size();
  std::ostringstream os;
  os << "digraph G {\n";
  if (!opt.title.empty()) os << "  label=" << quoted(opt.title) << ";\n  labelloc=t;\n";
  os << "  node [shape=circle];\n";
  const double radius = std::max(1.5, 0.5 * n);
  for (int v = 0; v < n; ++v) {
    const double phi = 2.0 * std::numbers::pi * v / std::max(n, 1);
    os << "  " << v << " [label=\"v" << v << "\", pos=\"" << fixed(radius * std::cos(phi), 3)
       << ',' << fixed(radius * std::sin(phi), 3) << "!\"";
    if (opt.show_laziness) os << ", xlabel=\"" << fixed(p(v, v), opt.decimals) << '"';
    os << "];\n";
  }
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      if (!a.has_edge(x, y)) continue;
      const bool fwd = p(x, y) >= opt.threshold;
      const bool bwd = p(y, x) >= opt.threshold;
      int s = x, t = y;
      std::string style;
      if (fwd && bwd) {
        style = "style=solid, color=green, dir=none";
      } else if (fwd || bwd) {
        if (bwd) std::swap(s, t);
        style = "style=dashed, color=red, dir=forward";
      } else {
        style = "style=dotted, color=black, dir=none";
      }
      os << "  " << s << " -> " << t << " [" << style << ", taillabel=\""
         << fixed(p(s, t), opt.decimals) << "\", headlabel=\"" << fixed(p(t, s), opt.decimals)
         << "\"];\n";
    }
  os << "}\n";
  return os.str();
}

void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj, int k) {
  if (k < 1) fail(ErrorKind::InvalidArgument, "stride k must be >= 1");
  const auto& a = traj.graph;
  std::vector<std::pair<int, int>> cols;
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < a.size(); ++y)
      if (a.has_edge(x, y)) cols.emplace_back(x, y);
  out << 't';
  for (auto [x, y] : cols) out << ",p_" << x << '_' << y;
  out << '\n';
  for (std::size_t i = 0; i < traj.schemes.size(); i += static_cast<std::size_t>(k)) {
    out << format_double(traj.time(i));
    for (auto [x, y] : cols) out << ',' << format_double(traj.schemes[i](x, y));
    out << '\n';
  }
  if (!out) fail(ErrorKind::Io, "failed writing trajectory CSV");
}

void write_series_csv(std::ostream& out, const CurvatureSeries& series, bool reference_bounds) {
  const std::size_t n = series.values.empty() ? 0 : series.values.front().size();
  out << 't';
  for (std::size_t v = 0; v < n; ++v) out << ",v" << v;
  if (reference_bounds) out << ",lower,upper";
  out << '\n';
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out << format_double(series.times[i]);
    for (double val : series.values[i]) out << ',' << format_double(val);
    if (reference_bounds) out << ",-1,2";
    out << '\n';
  }
  if (!out) fail(ErrorKind::Io, "failed writing series CSV");
}

void write_curvature_csv(std::ostream& out, const std::vector<CurvatureRow>& rows, Dimension n) {
  out << "vertex,K_N,K_upper,N,sphere_mismatch\n";
  for (const auto& r : rows)
    out << r.vertex << ',' << format_double(r.k) << ',' << format_double(r.k_upper) << ','
        << format_double(n.value()) << ',' << (r.sphere_mismatch ? 1 : 0) << '\n';
  if (!out) fail(ErrorKind::Io, "failed writing curvature CSV");
}

}  // namespace curvflow
