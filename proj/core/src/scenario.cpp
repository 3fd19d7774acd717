#include "mincurv/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>

#include "mincurv/catalogue.hpp"
#include "mincurv/error.hpp"
#include "mincurv/expression.hpp"
#include "mincurv/geometry.hpp"

namespace mincurv {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

int integer_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

SurfaceSpec parse_surface(const json& j) {
  require_object(j, "surface");
  reject_unknown(j, "surface", {"kind", "name", "params", "exprs", "n"});
  SurfaceSpec s;
  if (j.contains("kind")) s.kind = string_at(j.at("kind"), "surface.kind");
  if (s.kind != "catalogue" && s.kind != "graph" && s.kind != "parametric")
    fail("surface.kind", "expected catalogue, graph or parametric");
  if (j.contains("name")) s.name = string_at(j.at("name"), "surface.name");
  if (j.contains("params")) s.params = j.at("params");
  if (j.contains("n")) s.n = integer_at(j.at("n"), "surface.n");
  if (s.n < 1 || s.n > 3) fail("surface.n", "must be 1, 2 or 3");
  if (j.contains("exprs")) {
    const json& e = j.at("exprs");
    if (!e.is_array()) fail("surface.exprs", "expected an array of strings");
    for (std::size_t k = 0; k < e.size(); ++k) s.exprs.push_back(string_at(e[k], "surface.exprs[" + std::to_string(k) + "]"));
  }
  if (s.kind == "catalogue") {
    if (s.name.empty()) fail("surface.name", "required for catalogue surfaces");
    if (!s.exprs.empty()) fail("surface.exprs", "not used for catalogue surfaces");
  } else {
    if (s.exprs.empty()) fail("surface.exprs", "expected at least one expression");
    if (s.kind == "parametric" && static_cast<int>(s.exprs.size()) <= s.n)
      fail("surface.exprs", "a parametric surface needs more than n components");
  }
  return s;
}

GridConfig parse_grid(const json& j) {
  require_object(j, "grid");
  reject_unknown(j, "grid", {"ranges", "counts", "mask"});
  GridConfig g;
  if (!j.contains("ranges") || !j.at("ranges").is_array() || j.at("ranges").empty())
    fail("grid.ranges", "expected an array of [lo, hi] pairs");
  const json& r = j.at("ranges");
  for (std::size_t k = 0; k < r.size(); ++k) {
    const std::string p = "grid.ranges[" + std::to_string(k) + "]";
    if (!r[k].is_array() || r[k].size() != 2) fail(p, "expected [lo, hi]");
    const double lo = number_at(r[k][0], p + "[0]");
    const double hi = number_at(r[k][1], p + "[1]");
    if (!(hi > lo)) fail(p, "expected lo < hi");
    g.ranges.emplace_back(lo, hi);
  }
  if (!j.contains("counts")) fail("grid.counts", "required");
  const json& c = j.at("counts");
  if (c.is_number_integer()) {
    g.counts.assign(g.ranges.size(), c.get<int>());
  } else if (c.is_array()) {
    for (std::size_t k = 0; k < c.size(); ++k) g.counts.push_back(integer_at(c[k], "grid.counts[" + std::to_string(k) + "]"));
  } else {
    fail("grid.counts", "expected an integer or an array of integers");
  }
  if (g.counts.size() != g.ranges.size()) fail("grid.counts", "expected one count per range");
  for (std::size_t k = 0; k < g.counts.size(); ++k)
    if (g.counts[k] < 2) fail("grid.counts[" + std::to_string(k) + "]", "must be >= 2");
  if (j.contains("mask") && !j.at("mask").is_null()) {
    const json& m = j.at("mask");
    require_object(m, "grid.mask");
    reject_unknown(m, "grid.mask", {"kind", "radius", "center"});
    g.mask.kind = m.contains("kind") ? string_at(m.at("kind"), "grid.mask.kind") : "extrinsic_ball";
    if (g.mask.kind != "none" && g.mask.kind != "disk" && g.mask.kind != "extrinsic_ball")
      fail("grid.mask.kind", "expected none, disk or extrinsic_ball");
    if (m.contains("radius")) g.mask.radius = number_at(m.at("radius"), "grid.mask.radius");
    if (!(g.mask.radius > 0.0)) fail("grid.mask.radius", "must be positive");
    if (m.contains("center")) {
      const json& ce = m.at("center");
      if (!ce.is_array() || ce.size() != g.ranges.size()) fail("grid.mask.center", "expected one coordinate per range");
      for (std::size_t k = 0; k < ce.size(); ++k)
        g.mask.center.push_back(number_at(ce[k], "grid.mask.center[" + std::to_string(k) + "]"));
    }
  }
  return g;
}

std::vector<CheckSpec> parse_checks(const json& j) {
  std::vector<CheckSpec> out;
  if (j.is_string() && j.get<std::string>() == "all") {
    for (const CheckInfo& info : check_catalogue()) out.push_back(CheckSpec{info.name, {}, {}, json::object()});
    return out;
  }
  if (!j.is_array()) fail("checks", "expected \"all\" or an array of check names or objects");
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string p = "checks[" + std::to_string(k) + "]";
    const json& e = j[k];
    CheckSpec spec;
    if (e.is_string()) {
      spec.name = e.get<std::string>();
    } else if (e.is_object()) {
      if (!e.contains("name")) fail(p + ".name", "required");
      spec.name = string_at(e.at("name"), p + ".name");
    } else {
      fail(p, "expected a check name or an object");
    }
    const CheckInfo* info = find_check(spec.name);
    if (!info) fail(p + ".name", "unknown check '" + spec.name + "'");
    if (e.is_object()) {
      for (const auto& [key, value] : e.items()) {
        if (key == "name") continue;
        if (key == "tol") {
          spec.tol = number_at(value, p + ".tol");
          if (!(*spec.tol > 0.0)) fail(p + ".tol", "must be positive");
        } else if (key == "equality_tol") {
          spec.equality_tol = number_at(value, p + ".equality_tol");
          if (!(*spec.equality_tol > 0.0)) fail(p + ".equality_tol", "must be positive");
        } else if (std::find(info->param_keys.begin(), info->param_keys.end(), key) != info->param_keys.end()) {
          spec.params[key] = value;
        } else {
          fail(p + "." + key, "unknown parameter for check '" + spec.name + "'");
        }
      }
    }
    out.push_back(std::move(spec));
  }
  return out;
}

ProbeParams parse_probe(const json& j) {
  require_object(j, "probe");
  reject_unknown(j, "probe", {"t", "q", "s", "R", "R0", "cells"});
  ProbeParams p;
  if (j.contains("t")) p.t = number_at(j.at("t"), "probe.t");
  if (j.contains("q")) p.q = number_at(j.at("q"), "probe.q");
  if (j.contains("s")) p.s = number_at(j.at("s"), "probe.s");
  if (j.contains("R")) p.R = number_at(j.at("R"), "probe.R");
  if (j.contains("R0")) p.R0 = number_at(j.at("R0"), "probe.R0");
  if (j.contains("cells")) p.cells = integer_at(j.at("cells"), "probe.cells");
  if (p.cells < 0) fail("probe.cells", "must be >= 0");
  (void)p.resolved(2);  // domain checks; cell defaults are resolved per dimension at run time
  return p;
}

OutputSpec parse_output(const json& j) {
  require_object(j, "output");
  reject_unknown(j, "output", {"path", "format", "detail"});
  OutputSpec o;
  if (j.contains("path")) o.path = string_at(j.at("path"), "output.path");
  if (j.contains("format")) o.format = string_at(j.at("format"), "output.format");
  if (o.format != "json" && o.format != "csv") fail("output.format", "expected json or csv");
  if (j.contains("detail")) {
    if (!j.at("detail").is_boolean()) fail("output.detail", "expected a boolean");
    o.detail = j.at("detail").get<bool>();
  }
  return o;
}

std::vector<SweepAxis> parse_sweep(const json& j) {
  if (!j.is_array()) fail("sweep", "expected an array of {pointer, values}");
  std::vector<SweepAxis> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string p = "sweep[" + std::to_string(k) + "]";
    require_object(j[k], p);
    reject_unknown(j[k], p, {"pointer", "values"});
    SweepAxis axis;
    if (!j[k].contains("pointer")) fail(p + ".pointer", "required");
    axis.pointer = string_at(j[k].at("pointer"), p + ".pointer");
    try {
      (void)json::json_pointer(axis.pointer);
    } catch (const json::exception& e) {
      fail(p + ".pointer", e.what());
    }
    if (axis.pointer.rfind("/sweep", 0) == 0) fail(p + ".pointer", "cannot target the sweep itself");
    if (!j[k].contains("values") || !j[k].at("values").is_array()) fail(p + ".values", "expected an array");
    for (const json& v : j[k].at("values")) axis.values.push_back(v);
    out.push_back(std::move(axis));
  }
  return out;
}

Expr parse_expr_at(const std::string& text, int n, const std::string& path) {
  try {
    return parse_expression(text, n);
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

}  // namespace

ScenarioConfig parse_scenario(const json& document) {
  require_object(document, "(root)");
  reject_unknown(document, "", {"name", "description", "surface", "grid", "reference_frame", "checks", "probe", "output", "sweep"});
  ScenarioConfig c;
  c.source = document;
  c.name = document.contains("name") ? string_at(document.at("name"), "name") : "scenario";
  if (!document.contains("surface")) fail("surface", "required");
  c.surface = parse_surface(document.at("surface"));
  if (!document.contains("grid")) fail("grid", "required");
  c.grid = parse_grid(document.at("grid"));
  if (document.contains("reference_frame")) {
    c.reference_frame = document.at("reference_frame");
    const json& r = c.reference_frame;
    const bool ok = r.is_null() || (r.is_string() && (r == "coordinate" || r == "tangent")) || r.is_array();
    if (!ok) fail("reference_frame", "expected \"coordinate\", \"tangent\" or an array of rows");
  }
  c.checks = document.contains("checks") ? parse_checks(document.at("checks")) : std::vector<CheckSpec>{};
  if (document.contains("probe")) c.probe = parse_probe(document.at("probe"));
  if (document.contains("output")) c.output = parse_output(document.at("output"));
  if (document.contains("sweep")) c.sweep = parse_sweep(document.at("sweep"));
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_scenario(doc);
}

Immersion build_immersion(const SurfaceSpec& spec) {
  if (spec.kind == "catalogue") return catalogue_lookup(spec.name, spec.params);
  std::vector<Expr> exprs;
  for (std::size_t k = 0; k < spec.exprs.size(); ++k)
    exprs.push_back(parse_expr_at(spec.exprs[k], spec.n, "surface.exprs[" + std::to_string(k) + "]"));
  const std::string name = spec.name.empty() ? spec.kind : spec.name;
  try {
    if (spec.kind == "graph") return build_graph_immersion(std::move(exprs), spec.n, name);
    return build_parametric_immersion(std::move(exprs), spec.n, name);
  } catch (const ShapeError& e) {
    fail("surface.exprs", e.what());
  }
}

GridSpec build_grid(const GridConfig& config, const Immersion& imm) {
  if (static_cast<int>(config.ranges.size()) != imm.dim())
    fail("grid.ranges", "expected " + std::to_string(imm.dim()) + " ranges for this surface");
  GridSpec g;
  for (std::size_t k = 0; k < config.ranges.size(); ++k)
    g.axes.push_back({config.ranges[k].first, config.ranges[k].second, config.counts[k]});
  const MaskSpec& m = config.mask;
  if (m.kind == "none") return g;
  const std::vector<double> center = m.center.empty() ? g.center() : m.center;
  const double r2 = m.radius * m.radius;
  if (m.kind == "disk") {
    g.mask = [center, r2](std::span<const double> u) {
      double d = 0.0;
      for (std::size_t k = 0; k < u.size(); ++k) d += (u[k] - center[k]) * (u[k] - center[k]);
      return d <= r2;
    };
  } else {
    std::vector<double> F0;
    try {
      F0 = imm.evaluate(center);
    } catch (const Error& e) {
      fail("grid.mask.center", e.what());
    }
    g.mask = [imm, F0, r2](std::span<const double> u) {
      try {
        const std::vector<double> F = imm.evaluate(u);
        double d = 0.0;
        for (std::size_t k = 0; k < F.size(); ++k) d += (F[k] - F0[k]) * (F[k] - F0[k]);
        return d <= r2;
      } catch (const Error&) {
        return false;
      }
    };
  }
  return g;
}

Eigen::MatrixXd build_reference_frame(const json& spec, const Immersion& imm, const GridSpec& grid) {
  const int n = imm.dim();
  const int N = imm.ambient_dim();
  if (spec.is_null()) return default_reference_frame(imm, grid.center());
  if (spec.is_string()) {
    if (spec == "coordinate") return Eigen::MatrixXd::Identity(n, N);
    if (spec != "tangent") fail("reference_frame", "expected \"coordinate\", \"tangent\" or an array of rows");
    try {
      return point_geometry_at(imm, grid.center()).tangent_frame;
    } catch (const Error& e) {
      fail("reference_frame", std::string("tangent plane at the grid center: ") + e.what());
    }
  }
  if (!spec.is_array() || static_cast<int>(spec.size()) != n) fail("reference_frame", "expected " + std::to_string(n) + " rows");
  Eigen::MatrixXd A(n, N);
  for (int i = 0; i < n; ++i) {
    const json& row = spec[static_cast<std::size_t>(i)];
    const std::string p = "reference_frame[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != N) fail(p, "expected " + std::to_string(N) + " entries");
    for (int k = 0; k < N; ++k) A(i, k) = number_at(row[static_cast<std::size_t>(k)], p + "[" + std::to_string(k) + "]");
  }
  try {
    validate_reference_frame(A, n, N);
  } catch (const ShapeError& e) {
    fail("reference_frame", e.what());
  }
  return A;
}

Verdict overall_verdict(const std::vector<CheckResult>& checks) {
  bool any_pass = false;
  for (const CheckResult& r : checks) {
    if (r.verdict == Verdict::Fail) return Verdict::Fail;
    any_pass = any_pass || r.verdict == Verdict::Pass;
  }
  return any_pass ? Verdict::Pass : Verdict::NotApplicable;
}

Report run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Immersion imm = build_immersion(config.surface);
  CheckContext ctx;
  ctx.immersion = &imm;
  ctx.grid = build_grid(config.grid, imm);
  ctx.reference_frame = build_reference_frame(config.reference_frame, imm, ctx.grid);
  ctx.probe = config.probe;
  ctx.jobs = std::max(1, options.jobs);
  ctx.detail = options.detail.value_or(config.output.detail);

  Report report;
  report.name = config.name;
  report.scenario = config.source;
  for (std::size_t k = 0; k < config.checks.size(); ++k) {
    try {
      report.checks.push_back(run_check(config.checks[k], ctx));
    } catch (const ConfigError& e) {
      throw ConfigError("checks[" + std::to_string(k) + "]." + e.what());
    }
  }
  report.overall = overall_verdict(report.checks);
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SweepResult run_sweep(const ScenarioConfig& config, const RunOptions& options) {
  SweepResult out;
  std::vector<std::vector<json>> tuples{{}};
  for (const SweepAxis& axis : config.sweep) {
    std::vector<std::vector<json>> next;
    for (const auto& t : tuples)
      for (const json& v : axis.values) {
        auto u = t;
        u.push_back(v);
        next.push_back(std::move(u));
      }
    tuples = std::move(next);
  }
  for (const auto& tuple : tuples) {
    json doc = config.source;
    doc.erase("sweep");
    json values = json::object();
    for (std::size_t k = 0; k < tuple.size(); ++k) {
      const std::string p = "sweep[" + std::to_string(k) + "]";
      try {
        doc[json::json_pointer(config.sweep[k].pointer)] = tuple[k];
      } catch (const json::exception& e) {
        throw ConfigError(p + ".pointer: " + e.what());
      }
      values[config.sweep[k].pointer] = tuple[k];
    }
    Report report = run_scenario(parse_scenario(doc), options);
    if (!config.sweep.empty()) report.sweep_values = values;
    for (const CheckResult& r : report.checks) {
      json row;
      row["values"] = values;
      row["check"] = r.name;
      row["verdict"] = std::string(to_string(r.verdict));
      row["worst"] = r.worst;
      row["stats"] = r.stats;
      out.table.push_back(std::move(row));
    }
    out.reports.push_back(std::move(report));
  }
  return out;
}

}  // namespace mincurv
