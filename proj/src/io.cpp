#include "owk/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "owk/errors.hpp"

namespace owk {

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) { row(header); }

CsvWriter& CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw ValidationError("CsvWriter: row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    out_ += cells[i];
  }
  out_ += '\n';
  return *this;
}

json to_json(const LatticePoint& p) { return json::array({p.v1, p.v2}); }

json to_json(const EstimateWithError& e) {
  return {{"value", e.value}, {"std_error", e.std_error}, {"n_samples", e.n_samples}};
}

json to_json(const ProbabilityTable& t) {
  return {{"support", t.support}, {"masses", t.masses}, {"tail_bound", t.tail_bound}, {"total", t.total()}};
}

json to_json(const QuadratureSpec& s) {
  return {{"split", s.split},         {"nodes_singular", s.nodes_singular}, {"nodes_regular", s.nodes_regular},
          {"abs_tol", s.abs_tol},     {"rel_tol", s.rel_tol},               {"max_panels", s.max_panels}};
}

CfForm parse_form(const std::string& s) {
  if (s == "published") return CfForm::published;
  if (s == "lattice") return CfForm::lattice;
  throw ValidationError("unknown form '" + s + "' (published|lattice)");
}

std::string form_name(CfForm f) { return f == CfForm::published ? "published" : "lattice"; }

json to_json(const CfModel& m) { return {{"p", m.p}, {"form", form_name(m.form)}}; }

json to_json(const Orientation& o) {
  switch (o.kind()) {
    case OrientationKind::half_plane_sign:
      return {{"kind", "half-plane-sign"}};
    case OrientationKind::constant:
      return {{"kind", "constant"}, {"sign", o.constant_sign()}};
    case OrientationKind::alternating:
      return {{"kind", "alternating"}};
    case OrientationKind::iid_random:
      return {{"kind", "iid-random"}, {"f", o.fraction()}, {"seed", o.seed()}};
    case OrientationKind::table: {
      json rows = json::object();
      for (const auto& [y, e] : o.rows()) rows[std::to_string(y)] = e;
      return {{"kind", "table"}, {"rows", rows}};
    }
  }
  return {};
}

json to_json(const SingularityEstimate& s) {
  return {{"c", s.c},           {"c_prime", s.c_prime}, {"residual_slope", s.residual_slope},
          {"spread", s.spread}, {"t", s.t},             {"samples", s.samples}};
}

json to_json(const ClosedFormReport& r) {
  return {{"p", r.p},
          {"points", r.points},
          {"max_diff_published", r.max_diff_published},
          {"argmax_published", r.argmax_published},
          {"max_diff_corrected", r.max_diff_corrected},
          {"max_diff_printed_third", r.max_diff_printed_third},
          {"modulus_ratio", r.modulus_ratio},
          {"published_agrees", r.published_agrees},
          {"corrected_agrees", r.corrected_agrees}};
}

json to_json(const MartinReport& r) {
  json sweeps = json::array();
  for (const auto& s : r.sweeps) {
    json kv = json::array(), ft = json::array(), pts = json::array();
    for (const auto& p : s.points) {
      json e = {{"y", to_json(p.y)},
                {"norm", p.norm},
                {"ok", p.ok},
                {"kernel", p.kernel},
                {"first_term", p.first_term},
                {"first_term_se", p.first_term_se},
                {"second_term", p.second_term},
                {"error", p.error}};
      if (p.decomposition) e["decomposition"] = *p.decomposition;
      if (!p.failure.empty()) e["failure"] = p.failure;
      pts.push_back(e);
      if (p.ok) {
        kv.push_back({to_json(p.y), p.kernel});
        ft.push_back({to_json(p.y), p.first_term});
      }
    }
    sweeps.push_back({{"sweep", s.sweep.label()},
                      {"points", pts},
                      {"kernel_values", kv},
                      {"first_term_values", ft},
                      {"sup_deviation", s.sup_deviation},
                      {"deviations_decrease", s.deviations_decrease},
                      {"first_term_decreases", s.first_term_decreases},
                      {"tail_first_term", s.tail_first_term}});
  }
  return {{"x", to_json(r.x)},         {"model", to_json(r.model)},    {"mc_budget", r.mc_budget},
          {"seed", r.seed},            {"sup_deviation", r.sup_deviation}, {"episodes", r.episodes},
          {"truncated", r.truncated},  {"sweeps", sweeps}};
}

std::string martin_csv(const MartinReport& r) {
  CsvWriter w({"sweep", "y1", "y2", "K", "first_term", "err"});
  for (const auto& s : r.sweeps)
    for (const auto& p : s.points)
      w.row({s.sweep.label(), std::to_string(p.y.v1), std::to_string(p.y.v2), fmt17(p.ok ? p.kernel : std::nan("")),
             fmt17(p.first_term), fmt17(p.error)});
  return w.str();
}

LatticePoint parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ValidationError("point '" + text + "' is not of the form x1,x2");
  auto part = [&](const std::string& s) -> std::int64_t {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(s, &used);
      if (used != s.size()) throw ValidationError("");
      return v;
    } catch (...) {
      throw ValidationError("point '" + text + "' has a non-integer coordinate");
    }
  };
  return {part(text.substr(0, comma)), part(text.substr(comma + 1))};
}

Orientation orientation_from_json(const json& j) {
  const std::string kind = j.value("kind", "half-plane-sign");
  if (kind == "half-plane-sign") return Orientation::half_plane();
  if (kind == "constant") return Orientation::constant(j.value("sign", 1));
  if (kind == "alternating") return Orientation::alternating();
  if (kind == "iid-random") return Orientation::iid_random(j.value("f", 0.5), j.value("seed", std::uint64_t{0}));
  if (kind == "table") {
    std::map<std::int64_t, int> rows;
    if (j.contains("rows"))
      for (const auto& [k, v] : j.at("rows").items()) rows[std::stoll(k)] = v.get<int>();
    return Orientation::table(rows);
  }
  throw ValidationError("unknown orientation kind '" + kind + "'");
}

std::optional<DriftProfile> drift_from_json(const json& j) {
  if (!j.contains("drift")) return std::nullopt;
  DriftProfile d;
  if (j.contains("drift_default")) {
    const auto& f = j.at("drift_default");
    d.fallback = {f.value("p", 1.0 / 3.0), f.value("q", 1.0 / 3.0)};
  }
  for (const auto& row : j.at("drift")) d.rows[row.at("y").get<std::int64_t>()] = {row.at("p").get<double>(), row.at("q").get<double>()};
  d.validate();
  return d;
}

void RunConfig::validate() const {
  check_p(model.p);
  walk.validate();
  spec.validate();
  if (format != "json" && format != "csv") throw ValidationError("format must be json or csv");
}

json RunConfig::to_json() const {
  json j = {{"p", model.p},
            {"form", form_name(model.form)},
            {"orientation", owk::to_json(orientation)},
            {"zero_row", walk.zero_row == ZeroRowRule::no_edge ? "no-edge" : "self-loop"},
            {"quadrature", owk::to_json(spec)},
            {"seed", seed},
            {"output", output},
            {"format", format}};
  if (walk.drift) {
    json rows = json::array();
    for (const auto& [y, d] : walk.drift->rows) rows.push_back({{"y", y}, {"p", d.horizontal}, {"q", d.up}});
    j["drift"] = rows;
    j["drift_default"] = {{"p", walk.drift->fallback.horizontal}, {"q", walk.drift->fallback.up}};
  }
  return j;
}

void RunConfig::merge(const json& j) {
  try {
    if (j.contains("p")) model.p = j.at("p").get<double>();
    if (j.contains("form")) model.form = parse_form(j.at("form").get<std::string>());
    if (j.contains("orientation")) orientation = orientation_from_json(j.at("orientation"));
    if (j.contains("zero_row")) {
      const auto z = j.at("zero_row").get<std::string>();
      if (z != "no-edge" && z != "self-loop") throw ValidationError("zero_row must be no-edge or self-loop");
      walk.zero_row = z == "no-edge" ? ZeroRowRule::no_edge : ZeroRowRule::self_loop;
    }
    if (auto d = drift_from_json(j)) walk.drift = d;
    if (j.contains("quadrature")) {
      const auto& q = j.at("quadrature");
      spec.split = q.value("split", spec.split);
      spec.nodes_singular = q.value("nodes_singular", spec.nodes_singular);
      spec.nodes_regular = q.value("nodes_regular", spec.nodes_regular);
      spec.abs_tol = q.value("abs_tol", spec.abs_tol);
      spec.rel_tol = q.value("rel_tol", spec.rel_tol);
      spec.max_panels = q.value("max_panels", spec.max_panels);
    }
    if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output")) output = j.at("output").get<std::string>();
    if (j.contains("format")) format = j.at("format").get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  walk.p = model.p;
}

json RunManifest::to_json() const {
  return {{"command", command},
          {"tool_version", tool_version},
          {"config", config},
          {"wall_seconds", wall_seconds},
          {"diagnostics", diagnostics}};
}

void emit(const std::string& path, const std::string& content, const RunManifest& manifest) {
  const std::string m = manifest.to_json().dump(2) + "\n";
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
    std::cerr << m;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << content;
  std::ofstream man(path + ".manifest.json", std::ios::binary);
  if (!man) throw ValidationError("cannot write " + path + ".manifest.json");
  man << m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace owk
