#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "curvflow/graph.hpp"

namespace curvflow::cli {

/// Runs one command line. `args` excludes the program name. Data goes to
/// `out`; prompts, notices and error JSON go to `err`; prompt answers are
/// read from `in`. Returns 0 on success, 1 on runtime errors, 2 on usage
/// errors.
int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
             std::ostream& err);

/// Graph spec grammar:
///   complete:N | path:N | cycle:N | hypercube:D | octahedron
///   random:N:P[:connected] | file:PATH
///   cart(A,B) | wedge(A,B,I,J) | bridge(A,B,I,J)
CombinatorialGraph parse_graph_spec(const std::string& spec, std::uint64_t seed);

}  // namespace curvflow::cli
