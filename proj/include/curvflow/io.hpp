#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "curvflow/experiment.hpp"
#include "curvflow/flow.hpp"
#include "curvflow/graph.hpp"
#include "curvflow/stability.hpp"
#include "curvflow/weights.hpp"

namespace curvflow {

using nlohmann::json;

json graph_to_json(const CombinatorialGraph& a);
CombinatorialGraph graph_from_json(const json& j);

json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j);

json scheme_to_json(const WeightScheme& p);
WeightScheme scheme_from_json(const json& j);

json limit_to_json(const LimitResult& r);
LimitResult limit_from_json(const json& j);

json report_to_json(const EquilibriumReport& r);

json checkpoint_to_json(const LimitCheckpoint& c);
LimitCheckpoint checkpoint_from_json(const json& j);

json summary_to_json(const BatchSummary& s, bool include_runs = false);

/// Whole file as text; io error with the path on failure.
std::string read_text(const std::filesystem::path& path);

/// Writes through a temporary file and a rename so readers never see a
/// half-written file.
void write_text(const std::filesystem::path& path, const std::string& text);

json read_json(const std::filesystem::path& path);

}  // namespace curvflow
