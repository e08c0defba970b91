#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curvflow/flow.hpp"
#include "curvflow/graph.hpp"
#include "curvflow/weights.hpp"

namespace curvflow {

struct Component {
  std::string label;
  std::vector<Vertex> vertices;
};

inline const std::string kTotallyDegenerate = "totally-degenerate";

/// Vertices incident to an edge with rates >= threshold in both directions.
std::vector<Vertex> nondegenerate_vertices(const CombinatorialGraph& a, const WeightScheme& p,
                                           double threshold);

/// Label of the single component that contains every non-degenerate vertex.
/// Otherwise the labels of all touched components joined by '+', with
/// "unlabeled" appended when some vertex lies in no component.
std::string classify_limit(const CombinatorialGraph& a, const WeightScheme& p,
                           const std::vector<Component>& components, double threshold);

enum class SchemeSource { Random, RandomLazy, Srw, SrwLazy, Fixed };

struct ExperimentConfig {
  CombinatorialGraph graph;
  SchemeSource source = SchemeSource::Random;
  std::optional<WeightScheme> fixed;  // for SchemeSource::Fixed
  double dt = 0.3;
  bool stoch_corr = true;
  ToleranceConfig tol;
  double t_lim = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Initial scheme of run `index` under `config`.
WeightScheme initial_scheme(const ExperimentConfig& config, std::uint64_t index);

struct RunOutcome {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  double t_conv = 0;
  std::string label;  // empty unless converged
  std::string error;  // non-empty if the run failed
};

struct ClassStats {
  std::size_t count = 0;
  double share = 0;
  double mean_t_conv = 0;
};

struct BatchSummary {
  std::size_t runs = 0;
  std::size_t classified = 0;
  std::size_t non_converged = 0;
  std::size_t failed = 0;
  std::map<std::string, ClassStats> classes;
  std::vector<std::uint64_t> anomalous_seeds;  // failed or non-converged runs
  std::vector<RunOutcome> outcomes;            // in index order
};

/// Runs `count` independent limit searches. Every run gets
/// derive_seed(config.seed, index), so results do not depend on the number
/// of worker threads. Failures are recorded, not thrown.
BatchSummary run_batch(const ExperimentConfig& config, std::size_t count,
                       const std::vector<Component>& components);

}  // namespace curvflow
