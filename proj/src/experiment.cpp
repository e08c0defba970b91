#include "curvflow/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "curvflow/errors.hpp"
#include "curvflow/rng.hpp"

namespace curvflow {

std::vector<Vertex> nondegenerate_vertices(const CombinatorialGraph& a, const WeightScheme& p,
                                           double threshold) {
  std::set<Vertex> w;
  for (int x = 0; x < a.size(); ++x)
    for (int y = x + 1; y < a.size(); ++y)
      if (a.has_edge(x, y) && a.has_edge(y, x) && p(x, y) >= threshold && p(y, x) >= threshold) {
        w.insert(x);
        w.insert(y);
      }
  return {w.begin(), w.end()};
}

std::string classify_limit(const CombinatorialGraph& a, const WeightScheme& p,
                           const std::vector<Component>& components, double threshold) {
  const auto w = nondegenerate_vertices(a, p, threshold);
  if (w.empty()) return kTotallyDegenerate;
  auto contains = [](const Component& c, Vertex v) {
    return std::find(c.vertices.begin(), c.vertices.end(), v) != c.vertices.end();
  };
  const Component* owner = nullptr;
  int owners = 0;
  for (const auto& c : components)
    if (std::all_of(w.begin(), w.end(), [&](Vertex v) { return contains(c, v); })) {
      owner = &c;
      ++owners;
    }
  if (owners == 1) return owner->label;

  std::string label;
  for (const auto& c : components)
    if (std::any_of(w.begin(), w.end(), [&](Vertex v) { return contains(c, v); }))
      label += (label.empty() ? "" : "+") + c.label;
  const bool stray = std::any_of(w.begin(), w.end(), [&](Vertex v) {
    return std::none_of(components.begin(), components.end(),
                        [&](const Component& c) { return contains(c, v); });
  });
  if (stray) label += (label.empty() ? "" : "+") + std::string("unlabeled");
  return label;
}

WeightScheme initial_scheme(const ExperimentConfig& config, std::uint64_t index) {
  const std::uint64_t seed = derive_seed(config.seed, index);
  switch (config.source) {
    case SchemeSource::Random: return randomizer(config.graph, config.tol.threshold, false, seed);
    case SchemeSource::RandomLazy: return randomizer(config.graph, config.tol.threshold, true, seed);
    case SchemeSource::Srw: return srw(config.graph, false);
    case SchemeSource::SrwLazy: return srw(config.graph, true);
    case SchemeSource::Fixed:
      if (!config.fixed) fail(ErrorKind::InvalidArgument, "fixed scheme source without a scheme");
      return *config.fixed;
  }
  fail(ErrorKind::InvalidArgument, "unknown scheme source");
}

BatchSummary run_batch(const ExperimentConfig& config, std::size_t count,
                       const std::vector<Component>& components) {
  if (count < 1) fail(ErrorKind::InvalidArgument, "batch needs at least one run");
  config.tol.validate();
  window_steps(config.dt);

  std::vector<RunOutcome> outcomes(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      RunOutcome& out = outcomes[i];
      out.index = i;
      out.seed = derive_seed(config.seed, i);
      try {
        LimitOptions opt;
        opt.dt = config.dt;
        opt.stoch_corr = config.stoch_corr;
        opt.norm_tolerance = config.tol.norm_tolerance;
        opt.lim_tolerance = config.tol.lim_tolerance;
        opt.t_lim = config.t_lim;
        opt.checkpoint_every = 0;
        const auto res = norm_curv_flow_lim(config.graph, initial_scheme(config, i), opt);
        out.converged = res.converged;
        out.t_conv = res.t_conv;
        if (res.converged)
          out.label = classify_limit(config.graph, res.limit, components, config.tol.threshold);
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  };
  unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  BatchSummary s;
  s.runs = count;
  for (const auto& o : outcomes) {
    if (!o.error.empty()) {
      ++s.failed;
      s.anomalous_seeds.push_back(o.seed);
    } else if (!o.converged) {
      ++s.non_converged;
      s.anomalous_seeds.push_back(o.seed);
    } else {
      ++s.classified;
      auto& c = s.classes[o.label];
      ++c.count;
      c.mean_t_conv += o.t_conv;
    }
  }
  for (auto& [label, c] : s.classes) {
    c.mean_t_conv /= static_cast<double>(c.count);
    c.share = static_cast<double>(c.count) / static_cast<double>(s.classified);
  }
  for (const auto& c : components) s.classes.try_emplace(c.label);
  s.outcomes = std::move(outcomes);
  return s;
}

}  // namespace curvflow
