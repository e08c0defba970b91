#include "curvflow/io.hpp"

#include <fstream>
#include <sstream>

#include "curvflow/errors.hpp"

namespace curvflow {

namespace {
template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    fail(ErrorKind::Parse, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string("bad field '") + key + "': " + e.what());
  }
}
}  // namespace

json graph_to_json(const CombinatorialGraph& a) { return {{"n", a.size()}, {"adj", a.rows()}}; }

CombinatorialGraph graph_from_json(const json& j) {
  const int n = field<int>(j, "n");
  auto rows = field<std::vector<std::vector<int>>>(j, "adj");
  if (static_cast<int>(rows.size()) != n) fail(ErrorKind::Parse, "graph 'n' does not match 'adj'");
  return CombinatorialGraph::from_rows(rows);
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array()) fail(ErrorKind::Parse, "matrix must be an array of rows");
  const auto r = static_cast<Eigen::Index>(j.size());
  const auto c = r ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != c)
      fail(ErrorKind::Parse, "matrix rows must have equal length");
    for (Eigen::Index k = 0; k < c; ++k) {
      if (!j[i][k].is_number()) fail(ErrorKind::Parse, "matrix entries must be numbers");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

json scheme_to_json(const WeightScheme& p) {
  return {{"n", p.size()}, {"P", matrix_to_json(p.matrix())}};
}

WeightScheme scheme_from_json(const json& j) {
  const int n = field<int>(j, "n");
  if (!j.contains("P")) fail(ErrorKind::Parse, "missing field 'P'");
  Eigen::MatrixXd m = matrix_from_json(j.at("P"));
  if (m.rows() != n || m.cols() != n) fail(ErrorKind::Parse, "scheme 'n' does not match 'P'");
  return WeightScheme(std::move(m));
}

json limit_to_json(const LimitResult& r) {
  json j = {{"converged", r.converged}, {"t_conv", r.t_conv}, {"P", matrix_to_json(r.limit.matrix())}};
  if (!r.corrections.empty()) j["corrections"] = r.corrections;
  return j;
}

LimitResult limit_from_json(const json& j) {
  LimitResult r;
  r.converged = field<bool>(j, "converged");
  r.t_conv = field<double>(j, "t_conv");
  if (!j.contains("P")) fail(ErrorKind::Parse, "missing field 'P'");
  r.limit = WeightScheme(matrix_from_json(j.at("P")));
  if (j.contains("corrections")) r.corrections = field<std::vector<double>>(j, "corrections");
  return r;
}

json report_to_json(const EquilibriumReport& r) {
  json j;
  j["kind"] = r.kind ? json(*r.kind) : json(nullptr);
  if (r.eigenvalues) {
    json ev = json::array();
    for (const auto& e : *r.eigenvalues) ev.push_back({e.real(), e.imag()});
    j["eigenvalues"] = std::move(ev);
  } else {
    j["eigenvalues"] = nullptr;
  }
  j["jacobian"] = r.jacobian ? matrix_to_json(*r.jacobian) : json(nullptr);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json checkpoint_to_json(const LimitCheckpoint& c) {
  json window = json::array();
  for (const auto& m : c.window) window.push_back(matrix_to_json(m));
  return {{"dt", c.dt},
          {"step", c.step},
          {"always_correct", c.always_correct},
          {"corrections", c.corrections},
          {"window", std::move(window)}};
}

LimitCheckpoint checkpoint_from_json(const json& j) {
  LimitCheckpoint c;
  c.dt = field<double>(j, "dt");
  c.step = field<std::size_t>(j, "step");
  c.always_correct = field<bool>(j, "always_correct");
  c.corrections = field<std::vector<double>>(j, "corrections");
  if (!j.contains("window") || !j.at("window").is_array())
    fail(ErrorKind::Parse, "missing field 'window'");
  for (const auto& m : j.at("window")) c.window.push_back(matrix_from_json(m));
  if (c.window.empty()) fail(ErrorKind::Parse, "checkpoint window is empty");
  return c;
}

json summary_to_json(const BatchSummary& s, bool include_runs) {
  json classes = json::object();
  for (const auto& [label, c] : s.classes)
    classes[label] = {{"count", c.count},
                      {"share", c.share},
                      {"mean_t_conv", c.count ? json(c.mean_t_conv) : json(nullptr)}};
  json j = {{"runs", s.runs},
            {"classified", s.classified},
            {"non_converged", s.non_converged},
            {"failed", s.failed},
            {"classes", std::move(classes)},
            {"anomalous_seeds", s.anomalous_seeds}};
  if (include_runs) {
    json runs = json::array();
    for (const auto& o : s.outcomes) {
      json r = {{"index", o.index}, {"seed", o.seed}, {"converged", o.converged}};
      if (o.converged) {
        r["t_conv"] = o.t_conv;
        r["label"] = o.label;
      }
      if (!o.error.empty()) r["error"] = o.error;
      runs.push_back(std::move(r));
    }
    j["outcomes"] = std::move(runs);
  }
  return j;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorKind::Io, "failed reading '" + path.string() + "'");
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write '" + tmp.string() + "'");
    out << text;
    if (!out) fail(ErrorKind::Io, "failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::Io, "cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, "'" + path.string() + "': " + e.what());
  }
}

}  // namespace curvflow
