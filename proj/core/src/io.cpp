#include "defvar/io.hpp"

#include <cstdio>
#include <fstream>

#include "defvar/render.hpp"
#include "defvar/simplify.hpp"

namespace defvar::io {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DefvarError("cannot open '" + path + "' for writing");
  return out;
}

nlohmann::json expr_json(const Expr& e) {
  return {{"plain", render(e, Format::Plain)},
          {"latex", render(e, Format::Latex)},
          {"sexpr", render(e, Format::Sexpr)}};
}

nlohmann::json params_json(const std::map<std::string, double>& params) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : params) j[k] = v;
  return j;
}

nlohmann::json meta_json(const std::map<std::string, std::string>& meta) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : meta) j[k] = v;
  return j;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const num::Trajectory& t) {
  auto out = open_out(path);
  for (size_t c = 0; c < t.columns.size(); ++c)
    out << (c ? "," : "") << t.columns[c];
  out << "\n";
  for (size_t r = 0; r < t.rows(); ++r) {
    for (size_t c = 0; c < t.data.size(); ++c)
      out << (c ? "," : "") << fmt(t.data[c][r]);
    out << "\n";
  }
}

void write_fieldgrid_csv(const std::string& path, const num::FieldGrid& g,
                         const std::string& value_name) {
  auto out = open_out(path);
  out << "t,x," << value_name << "\n";
  for (size_t s = 0; s < g.snapshots.size(); ++s)
    for (size_t i = 0; i < g.snapshots[s].size(); ++i)
      out << fmt(g.times[s]) << "," << fmt(g.x_at(i % g.points)) << ","
          << fmt(g.snapshots[s][i]) << "\n";
}

void write_ensemble_csv(const std::string& path, const num::EnsembleStats& s) {
  auto out = open_out(path);
  out << "t,msd,msd_stderr,mean_x,mean_v2\n";
  for (size_t i = 0; i < s.t.size(); ++i)
    out << fmt(s.t[i]) << "," << fmt(s.msd[i]) << "," << fmt(s.msd_stderr[i])
        << "," << fmt(s.mean_x[i]) << "," << fmt(s.mean_v2[i]) << "\n";
}

nlohmann::json manifest_json(const num::Trajectory& t) {
  nlohmann::json j;
  j["kind"] = "trajectory";
  j["t0"] = t.t0;
  j["dt"] = t.dt;
  j["rows"] = t.rows();
  j["columns"] = t.columns;
  j["params"] = params_json(t.params);
  j["meta"] = meta_json(t.meta);
  return j;
}

nlohmann::json manifest_json(const num::FieldGrid& g) {
  nlohmann::json j;
  j["kind"] = "field";
  j["x0"] = g.x0;
  j["dx"] = g.dx;
  j["points"] = g.points;
  j["boundary"] = num::to_string(g.boundary);
  j["snapshots"] = g.times.size();
  j["params"] = params_json(g.params);
  j["meta"] = meta_json(g.meta);
  nlohmann::json inv = nlohmann::json::object();
  for (const auto& [name, series] : g.conserved) {
    if (series.empty()) continue;
    double drift = 0.0;
    for (double v : series) drift = std::max(drift, std::abs(v - series.front()));
    inv[name] = {{"initial", series.front()},
                 {"final", series.back()},
                 {"max_drift", drift}};
  }
  j["invariants"] = inv;
  return j;
}

nlohmann::json manifest_json(const num::EnsembleStats& s) {
  nlohmann::json j;
  j["kind"] = "ensemble";
  j["ensemble"] = s.ensemble;
  j["seed"] = s.seed;
  j["checkpoints"] = s.t.size();
  j["params"] = params_json(s.params);
  j["meta"] = meta_json(s.meta);
  return j;
}

nlohmann::json to_json(const ELResult& r, const std::string& system) {
  nlohmann::json j;
  j["system"] = system;
  j["variable"] = r.variable;
  j["pre_limit"] = expr_json(r.pre_limit);
  j["post_limit"] = expr_json(r.post_limit);
  j["dropped_terms"] = nlohmann::json::array();
  for (const Expr& d : r.dropped_terms) j["dropped_terms"].push_back(expr_json(d));
  j["limits_applied"] = r.limits_applied;
  return j;
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["system"] = r.system;
  j["verdict"] = to_string(r.verdict);
  j["printed_mode"] = r.printed_mode;
  j["notes"] = r.notes;
  if (!r.error.empty()) j["error"] = r.error;
  j["results"] = nlohmann::json::array();
  for (const auto& res : r.results) j["results"].push_back(to_json(res, r.system));
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json cj;
    cj["label"] = c.label;
    cj["verdict"] = to_string(c.verdict);
    cj["derived"] = expr_json(c.derived);
    cj["target"] = expr_json(c.target);
    if (c.diff) cj["diff"] = expr_json(*c.diff);
    j["checks"].push_back(cj);
  }
  return j;
}

nlohmann::json systems_json() {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : list_systems())
    arr.push_back({{"id", s.id}, {"section", s.section},
                   {"description", s.description}});
  return arr;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace defvar::io
