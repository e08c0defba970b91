#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <istream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "curvflow/bakry_emery.hpp"
#include "curvflow/errors.hpp"
#include "curvflow/experiment.hpp"
#include "curvflow/export.hpp"
#include "curvflow/flow.hpp"
#include "curvflow/io.hpp"
#include "curvflow/rng.hpp"
#include "curvflow/stability.hpp"

namespace curvflow::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("expected an integer for " + what + ", got '" + s + "'");
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("expected a number for " + what + ", got '" + s + "'");
}

// Splits "a,b,c" at top-level commas.
std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<std::string> split_colon(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  return parts;
}

}  // namespace

CombinatorialGraph parse_graph_spec(const std::string& spec, std::uint64_t seed) {
  if (spec.rfind("file:", 0) == 0) return graph_from_json(read_json(spec.substr(5)));
  const auto open = spec.find('(');
  if (open != std::string::npos) {
    if (spec.back() != ')') throw UsageError("unbalanced graph spec '" + spec + "'");
    const std::string op = spec.substr(0, open);
    const auto parts = split_args(spec.substr(open + 1, spec.size() - open - 2));
    if (op == "cart") {
      if (parts.size() != 2) throw UsageError("cart(A,B) takes two graphs");
      return cart_prod(parse_graph_spec(parts[0], seed), parse_graph_spec(parts[1], seed + 1));
    }
    if (op == "wedge" || op == "bridge") {
      if (parts.size() != 4) throw UsageError(op + "(A,B,i,j) takes four arguments");
      const auto a = parse_graph_spec(parts[0], seed);
      const auto b = parse_graph_spec(parts[1], seed + 1);
      const int i = to_int(parts[2], op + " vertex i");
      const int j = to_int(parts[3], op + " vertex j");
      return op == "wedge" ? wedge_sum(a, b, i, j) : bridge_at(a, b, i, j);
    }
    throw UsageError("unknown graph operation '" + op + "'");
  }
  const auto parts = split_colon(spec);
  if (parts.empty()) throw UsageError("empty graph spec");
  const std::string& name = parts[0];
  auto arg = [&](std::size_t k) -> const std::string& {
    if (parts.size() <= k) throw UsageError("graph spec '" + spec + "' is missing arguments");
    return parts[k];
  };
  if (name == "octahedron") return octahedron();
  if (name == "complete") return complete(to_int(arg(1), "complete:n"));
  if (name == "path") return path(to_int(arg(1), "path:n"));
  if (name == "cycle") return cycle(to_int(arg(1), "cycle:n"));
  if (name == "hypercube") return hypercube(to_int(arg(1), "hypercube:d"));
  if (name == "random") {
    const bool connected = parts.size() > 3 && parts[3] == "connected";
    if (parts.size() > 3 && !connected) throw UsageError("random:n:p[:connected]");
    return rand_adj_mat(to_int(arg(1), "random:n"), to_double(arg(2), "random:p"), connected, seed);
  }
  throw UsageError("unknown graph '" + name + "'");
}

namespace {

struct Common {
  std::string graph;
  std::string weights = "srw";
  std::uint64_t seed = 0;
  bool seed_given = false;
  double threshold = 1e-3;
  double norm_tol = 1e-3;
  double lim_tol = 1e-3;
  double dt = 0.3;
  double t_lim = 10000;
  bool stoch_corr = true;
  std::string output;
  std::string out_dir;
};

WeightScheme load_weights(const Common& c, const CombinatorialGraph& a) {
  const std::string& w = c.weights;
  if (w.rfind("file:", 0) == 0) {
    WeightScheme p = scheme_from_json(read_json(w.substr(5)));
    validate_support(a, p.matrix());
    return p;
  }
  if (w == "srw") return srw(a, false);
  if (w == "srw-lazy") return srw(a, true);
  if (w == "random") return randomizer(a, c.threshold, false, derive_seed(c.seed, 0));
  if (w == "random-lazy") return randomizer(a, c.threshold, true, derive_seed(c.seed, 0));
  throw UsageError("unknown weights '" + w + "' (srw, srw-lazy, random, random-lazy, file:PATH)");
}

class Runner {
 public:
  Runner(std::istream& in, std::ostream& out, std::ostream& err) : in_(in), out_(out), err_(err) {}

  fs::path resolve(const Common& c, const std::string& name) const {
    fs::path p(name);
    if (p.is_relative() && !c.out_dir.empty()) p = fs::path(c.out_dir) / p;
    return p;
  }

  // Writes to -o if given, else to stdout.
  void emit(const Common& c, const std::string& text) {
    if (c.output.empty()) {
      out_ << text;
      return;
    }
    const fs::path p = resolve(c, c.output);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    write_text(p, text);
  }

  CorrectionHandler interactive() {
    CorrectionHandler h;
    h.decide = [this](double t) {
      for (;;) {
        err_ << "`norm_tolerance' has been exceeded at one or more vertices, at time t = " << t
             << ". Would you like to:\n"
             << "A = Stop calculation and return list of P-matrices so far\n"
             << "B = Apply manual normalization now, and apply it again when necessary without "
                "asking (you will still be notified when it is applied)\n"
             << "C = Apply manual normalization now, and ask again before reapplying it\n"
             << "Please enter A, B or C here: " << std::flush;
        std::string answer;
        if (!std::getline(in_, answer)) return CorrectionDecision::Stop;
        if (answer == "A" || answer == "a") return CorrectionDecision::Stop;
        if (answer == "B" || answer == "b") return CorrectionDecision::CorrectAlways;
        if (answer == "C" || answer == "c") return CorrectionDecision::CorrectOnce;
      }
    };
    h.notify = [this](double t) {
      err_ << "Transition rates have been artificially normalized at time t = " << t << "\n";
    };
    return h;
  }

  std::istream& in_;
  std::ostream& out_;
  std::ostream& err_;
};

void add_common(CLI::App* sub, Common& c, bool needs_graph) {
  auto* g = sub->add_option("--graph,-g", c.graph, "graph spec, e.g. complete:4 or file:g.json");
  if (needs_graph) g->required();
  sub->add_option("--weights,-w", c.weights, "srw | srw-lazy | random | random-lazy | file:PATH");
  sub->add_option("--seed", c.seed, "RNG seed (default: time based)")
      ->each([&c](const std::string&) { c.seed_given = true; });
  sub->add_option("--threshold", c.threshold, "numerical zero for rates");
  sub->add_option("--norm-tol", c.norm_tol, "allowed row-sum deviation");
  sub->add_option("-o,--output", c.output, "output file (default: stdout)");
}

void add_flow_opts(CLI::App* sub, Common& c) {
  sub->add_option("--dt", c.dt, "RK4 step size");
  sub->add_flag("--stoch-corr,!--no-stoch-corr", c.stoch_corr,
                "automatic stochastic correction (default on)");
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
             std::ostream& err) {
  Runner run(in, out, err);
  Common c;
  if (const char* dir = std::getenv("CURVFLOW_OUT_DIR")) c.out_dir = dir;

  CLI::App app{"Bakry-Emery curvature and curvature flow on weighted graphs", "curvflow"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  app.add_option("--out-dir", c.out_dir, "directory for relative output paths");

  std::string gen_spec;
  auto* gen = app.add_subcommand("gen", "build a graph and print it as JSON");
  gen->add_option("spec", gen_spec, "graph spec")->required();
  gen->add_option("--seed", c.seed)->each([&c](const std::string&) { c.seed_given = true; });
  gen->add_option("-o,--output", c.output);

  auto* weights = app.add_subcommand("weights", "build a weighting scheme and print it as JSON");
  add_common(weights, c, true);

  double t_max = 10;
  int stride = 1;
  bool unnormalized = false;
  std::string curv_out;
  std::string dim_text = "inf";
  auto* flow = app.add_subcommand("flow", "integrate the flow on [0, t_max] and write CSV");
  add_common(flow, c, true);
  add_flow_opts(flow, c);
  flow->add_option("--t-max", t_max, "final time")->required();
  flow->add_option("--stride,-k", stride, "keep every k-th snapshot");
  flow->add_flag("--unnormalized", unnormalized, "use C = 0 instead of the Markov normalization");
  flow->add_option("--curvature-out", curv_out, "also write curvature series CSV");
  flow->add_option("--dim,-N", dim_text, "dimension for the curvature series");

  std::string checkpoint;
  bool resume = false;
  auto* limit = app.add_subcommand("limit", "run the normalized flow to its numerical limit");
  add_common(limit, c, true);
  add_flow_opts(limit, c);
  limit->add_option("--lim-tol", c.lim_tol, "flow-limit tolerance");
  limit->add_option("--t-lim", c.t_lim, "give up after this time");
  limit->add_option("--checkpoint", checkpoint, "checkpoint file, refreshed every 50 time units");
  limit->add_flag("--resume", resume, "continue from --checkpoint if it exists");

  auto* curv = app.add_subcommand("curvature", "per-vertex curvature and upper bound as CSV");
  add_common(curv, c, true);
  curv->add_option("--dim,-N", dim_text, "dimension N (number or inf)");

  auto* sharp = app.add_subcommand("sharp", "check curvature sharpness");
  add_common(sharp, c, true);

  bool want_jac = false;
  bool no_eig = false;
  auto* stab = app.add_subcommand("stability", "classify an equilibrium by its Jacobian spectrum");
  add_common(stab, c, true);
  stab->add_flag("--jacobian", want_jac, "include the reduced Jacobian");
  stab->add_flag("--no-eigenvalues", no_eig, "omit the eigenvalues");

  std::size_t count = 100;
  unsigned threads = 0;
  std::vector<std::string> comp_specs;
  bool per_run = false;
  auto* batch = app.add_subcommand("batch", "many seeded limit searches, classified by component");
  add_common(batch, c, true);
  add_flow_opts(batch, c);
  batch->add_option("--lim-tol", c.lim_tol);
  batch->add_option("--t-lim", c.t_lim);
  batch->add_option("--count,-n", count, "number of runs");
  batch->add_option("--threads", threads, "worker threads (0: all cores)");
  batch->add_option("--component", comp_specs, "LABEL:v,v,... (repeatable)");
  batch->add_flag("--runs", per_run, "include per-run outcomes in the summary");

  std::string title;
  int decimals = 2;
  bool laziness = false;
  auto* render = app.add_subcommand("render", "Graphviz DOT drawing of a weighted graph");
  add_common(render, c, true);
  render->add_option("--title", title);
  render->add_option("--decimals", decimals);
  render->add_flag("--laziness", laziness, "label vertices with their laziness");

  auto error_json = [&](std::string_view kind, const std::string& msg) {
    err << json{{"error", kind}, {"message", msg}}.dump() << "\n";
  };

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    error_json("usage", e.what());
    return 2;
  }

  if (!c.seed_given)
    c.seed = static_cast<std::uint64_t>(
        std::chrono::system_clock::now().time_since_epoch().count());

  try {
    ToleranceConfig tol;
    tol.threshold = c.threshold;
    tol.norm_tolerance = c.norm_tol;
    tol.lim_tolerance = c.lim_tol;
    tol.validate();

    if (*gen) {
      run.emit(c, graph_to_json(parse_graph_spec(gen_spec, c.seed)).dump() + "\n");
      return 0;
    }
    const CombinatorialGraph a = parse_graph_spec(c.graph, c.seed);
    const WeightScheme p = load_weights(c, a);

    if (*weights) {
      run.emit(c, scheme_to_json(p).dump() + "\n");
    } else if (*flow) {
      FlowTrajectory traj;
      if (unnormalized) {
        traj = curv_flow(a, p, t_max, c.dt);
      } else {
        NormFlowOptions opt;
        opt.dt = c.dt;
        opt.stoch_corr = c.stoch_corr;
        opt.norm_tolerance = c.norm_tol;
        opt.handler = run.interactive();
        traj = norm_curv_flow(a, p, t_max, opt);
      }
      std::ostringstream csv;
      write_trajectory_csv(csv, traj, stride);
      run.emit(c, csv.str());
      if (!curv_out.empty()) {
        const Dimension n = parse_dimension(dim_text);
        std::ostringstream cs;
        const bool markov = !unnormalized && is_markovian(p, c.norm_tol);
        write_series_csv(cs, calc_curvatures(traj, n, stride),
                         markov && (n.is_infinite() || n.value() >= 2));
        write_text(run.resolve(c, curv_out), cs.str());
      }
    } else if (*limit) {
      LimitOptions opt;
      opt.dt = c.dt;
      opt.stoch_corr = c.stoch_corr;
      opt.norm_tolerance = c.norm_tol;
      opt.lim_tolerance = c.lim_tol;
      opt.t_lim = c.t_lim;
      opt.handler = run.interactive();
      std::optional<LimitCheckpoint> state;
      fs::path cp;
      if (!checkpoint.empty()) {
        cp = run.resolve(c, checkpoint);
        if (resume && fs::exists(cp)) {
          state = checkpoint_from_json(read_json(cp).at("checkpoint"));
          opt.resume = &*state;
        }
        opt.on_checkpoint = [&cp](const LimitCheckpoint& s) {
          LimitResult partial{WeightScheme(s.window.back()), s.dt * static_cast<double>(s.step),
                              false, s.corrections};
          json j = limit_to_json(partial);
          j["checkpoint"] = checkpoint_to_json(s);
          write_text(cp, j.dump());
        };
      } else if (resume) {
        throw UsageError("--resume needs --checkpoint");
      }
      const LimitResult res = norm_curv_flow_lim(a, p, opt);
      if (!res.converged)
        err << "no numerical limit before t_lim = " << c.t_lim << "\n";
      run.emit(c, limit_to_json(res).dump() + "\n");
    } else if (*curv) {
      const Dimension n = parse_dimension(dim_text);
      std::ostringstream csv;
      write_curvature_csv(csv, curvature_report(a, p, n, tol), n);
      run.emit(c, csv.str());
    } else if (*sharp) {
      const bool ok = is_curvature_sharp(a, p, c.norm_tol, c.threshold);
      json j = {{"sharp", ok}, {"defect", sharpness_defect(p.matrix())}};
      run.emit(c, j.dump() + "\n");
    } else if (*stab) {
      const auto report = equilibrium_type(a, p, !no_eig, want_jac, c.norm_tol, c.threshold);
      run.emit(c, report_to_json(report).dump() + "\n");
    } else if (*batch) {
      ExperimentConfig cfg;
      cfg.graph = a;
      if (c.weights == "random") cfg.source = SchemeSource::Random;
      else if (c.weights == "random-lazy") cfg.source = SchemeSource::RandomLazy;
      else if (c.weights == "srw") cfg.source = SchemeSource::Srw;
      else if (c.weights == "srw-lazy") cfg.source = SchemeSource::SrwLazy;
      else {
        cfg.source = SchemeSource::Fixed;
        cfg.fixed = p;
      }
      cfg.dt = c.dt;
      cfg.stoch_corr = c.stoch_corr;
      cfg.tol = tol;
      cfg.t_lim = c.t_lim;
      cfg.seed = c.seed;
      cfg.threads = threads;
      std::vector<Component> comps;
      for (const auto& s : comp_specs) {
        const auto colon = s.find(':');
        if (colon == std::string::npos) throw UsageError("component must look like LABEL:v,v,...");
        Component comp{s.substr(0, colon), {}};
        for (const auto& v : split_args(s.substr(colon + 1)))
          comp.vertices.push_back(to_int(v, "component vertex"));
        comps.push_back(std::move(comp));
      }
      const auto summary = run_batch(cfg, count, comps);
      json j = summary_to_json(summary, per_run);
      j["seed"] = c.seed;
      run.emit(c, j.dump(2) + "\n");
    } else if (*render) {
      DotOptions opt;
      opt.threshold = c.threshold;
      opt.title = title;
      opt.decimals = decimals;
      opt.show_laziness = laziness;
      run.emit(c, export_graph_dot(a, p, opt));
    }
    return 0;
  } catch (const UsageError& e) {
    error_json("usage", e.what());
    return 2;
  } catch (const Error& e) {
    const bool usage = e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::Parse;
    error_json(to_string(e.kind()), e.what());
    return usage ? 2 : 1;
  } catch (const std::exception& e) {
    error_json("internal", e.what());
    return 1;
  }
}

}  // namespace curvflow::cli
