#pragma once

#include <iosfwd>
#include <string>

#include "curvflow/bakry_emery.hpp"
#include "curvflow/flow.hpp"
#include "curvflow/graph.hpp"
#include "curvflow/weights.hpp"

namespace curvflow {

struct DotOptions {
  double threshold = 1e-3;
  std::string title;
  int decimals = 2;
  bool show_laziness = false;
};

/// Graphviz document. Edges alive in both directions are solid green, edges
/// alive one way are dashed red with an arrow, dead edges are dotted black.
/// Each rate p_xy is printed at the x end of its edge. Vertices sit on a
/// circle so the layout is stable under neato -n.
std::string export_graph_dot(const CombinatorialGraph& a, const WeightScheme& p,
                             const DotOptions& opt = {});

/// Header `t,p_0_1,...` with one column per directed edge of the graph.
void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj, int k = 1);

/// Header `t,v0,...`; with `reference_bounds` two constant columns -1 and 2.
void write_series_csv(std::ostream& out, const CurvatureSeries& series,
                      bool reference_bounds = false);

/// Header `vertex,K_N,K_upper,N,sphere_mismatch`.
void write_curvature_csv(std::ostream& out, const std::vector<CurvatureRow>& rows, Dimension n);

/// Shortest text that parses back to the same double ("inf", "nan" for specials).
std::string format_double(double v);

}  // namespace curvflow
