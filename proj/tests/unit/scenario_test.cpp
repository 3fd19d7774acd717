#include <gtest/gtest.h>

#include "mincurv/error.hpp"
#include "mincurv/report.hpp"
#include "mincurv/scenario.hpp"

namespace mincurv {
namespace {

using nlohmann::json;

json minimal_doc() {
  return json::parse(R"({
    "name": "t",
    "surface": {"kind": "catalogue", "name": "catenoid", "params": {"m": 1}},
    "grid": {"ranges": [[-1, 1], [-1, 1]], "counts": 5},
    "checks": ["minimality", "gauss_equation"]
  })");
}

std::string config_error(const json& doc) {
  try {
    build_immersion(parse_scenario(doc).surface);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

TEST(ScenarioParse, Minimal) {
  const ScenarioConfig c = parse_scenario(minimal_doc());
  EXPECT_EQ(c.name, "t");
  EXPECT_EQ(c.grid.counts, (std::vector<int>{5, 5}));
  ASSERT_EQ(c.checks.size(), 2u);
  EXPECT_EQ(c.checks[1].name, "gauss_equation");
  EXPECT_EQ(c.output.format, "json");
}

TEST(ScenarioParse, ErrorsCarryFieldPaths) {
  json d = minimal_doc();
  d["checks"] = {"minimality", "bogus"};
  EXPECT_TRUE(starts_with(config_error(d), "checks[1].name")) << config_error(d);

  d = minimal_doc();
  d["checks"] = json::array({json{{"name", "minimality"}, {"tol", -1}}});
  EXPECT_TRUE(starts_with(config_error(d), "checks[0].tol")) << config_error(d);

  d = minimal_doc();
  d["checks"] = json::array({json{{"name", "minimality"}, {"radii", {1}}}});
  EXPECT_TRUE(starts_with(config_error(d), "checks[0].radii")) << config_error(d);

  d = minimal_doc();
  d["grid"]["counts"] = {5, 1};
  EXPECT_TRUE(starts_with(config_error(d), "grid.counts")) << config_error(d);

  d = minimal_doc();
  d["surface"]["name"] = "sphere";
  EXPECT_TRUE(starts_with(config_error(d), "surface.name")) << config_error(d);

  d = minimal_doc();
  d["extra"] = 1;
  EXPECT_TRUE(starts_with(config_error(d), "extra")) << config_error(d);

  d = minimal_doc();
  d["probe"] = {{"t", 2}};
  EXPECT_TRUE(starts_with(config_error(d), "probe.t")) << config_error(d);

  d = minimal_doc();
  d["output"] = {{"format", "xml"}};
  EXPECT_TRUE(starts_with(config_error(d), "output.format")) << config_error(d);

  d = minimal_doc();
  d["grid"]["mask"] = {{"kind", "hexagon"}};
  EXPECT_TRUE(starts_with(config_error(d), "grid.mask")) << config_error(d);
}

TEST(ScenarioParse, GraphAndParametricSurfaces) {
  json d = minimal_doc();
  d["surface"] = {{"kind", "graph"}, {"exprs", {"x^2 - y^2", "2*x*y"}}, {"n", 2}};
  const ScenarioConfig c = parse_scenario(d);
  const Immersion imm = build_immersion(c.surface);
  EXPECT_TRUE(imm.is_graph());
  EXPECT_EQ(imm.ambient_dim(), 4);

  d["surface"] = {{"kind", "graph"}, {"exprs", {"x^2 - (y"}}, {"n", 2}};
  EXPECT_TRUE(starts_with(config_error(d), "surface.exprs[0]")) << config_error(d);
}

TEST(ScenarioGrid, DiskMask) {
  json d = minimal_doc();
  d["grid"]["mask"] = {{"kind", "disk"}, {"radius", 1.0}};
  const ScenarioConfig c = parse_scenario(d);
  const Immersion imm = build_immersion(c.surface);
  EXPECT_EQ(build_grid(c.grid, imm).points().size(), 13u);
}

TEST(ScenarioRun, OverallVerdict) {
  const Report r = run_scenario(parse_scenario(minimal_doc()));
  EXPECT_EQ(r.overall, Verdict::Pass);
  ASSERT_EQ(r.checks.size(), 2u);
  EXPECT_EQ(r.checks[0].points, 25);

  CheckResult na;
  na.verdict = Verdict::NotApplicable;
  CheckResult fail;
  fail.verdict = Verdict::Fail;
  EXPECT_EQ(overall_verdict({na}), Verdict::NotApplicable);
  EXPECT_EQ(overall_verdict({r.checks[0], na}), Verdict::Pass);
  EXPECT_EQ(overall_verdict({r.checks[0], fail}), Verdict::Fail);
}

TEST(ScenarioRun, ConfigErrorsFromChecksArePrefixed) {
  json d = minimal_doc();
  d["checks"] = json::array({"minimality", json{{"name", "isothermal"}, {"b", -1}}});
  try {
    run_scenario(parse_scenario(d));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_TRUE(starts_with(e.what(), "checks[1].")) << e.what();
  }
}

TEST(Sweep, EmptyValueListRunsNothing) {
  json d = minimal_doc();
  d["sweep"] = json::array({json{{"pointer", "/probe/t"}, {"values", json::array()}}});
  const SweepResult s = run_sweep(parse_scenario(d));
  EXPECT_TRUE(s.reports.empty());
  EXPECT_TRUE(s.table.empty());
  EXPECT_EQ(render_csv(s.reports), "run,check,index,u1,u2,u3,status,verdict,residuals,values\n");
}

TEST(Sweep, CartesianProduct) {
  json d = minimal_doc();
  d["checks"] = {"minimality"};
  d["sweep"] = json::array({json{{"pointer", "/grid/counts"}, {"values", {3, 4}}},
                            json{{"pointer", "/surface/params/m"}, {"values", {1, 2, 3}}}});
  const SweepResult s = run_sweep(parse_scenario(d));
  ASSERT_EQ(s.reports.size(), 6u);
  EXPECT_EQ(s.reports[5].checks[0].points, 16);
  EXPECT_EQ(s.reports[5].sweep_values.at("/surface/params/m"), 3);
  EXPECT_EQ(s.table.size(), 6u);
}

TEST(Sweep, BadPointerIsAConfigError) {
  json d = minimal_doc();
  d["sweep"] = json::array({json{{"pointer", "no-slash"}, {"values", {1}}}});
  EXPECT_THROW(run_sweep(parse_scenario(d)), ConfigError);
}

TEST(Report, JsonRoundTripAndDeterminism) {
  const ScenarioConfig c = parse_scenario(minimal_doc());
  RunOptions one;
  one.jobs = 1;
  RunOptions four;
  four.jobs = 4;
  const std::string a = render_json(run_scenario(c, one));
  const std::string b = render_json(run_scenario(c, four));
  EXPECT_EQ(a, b);
  const json back = json::parse(a);
  EXPECT_EQ(back.at("overall"), "pass");
  EXPECT_TRUE(back.at("checks")[0].contains("worst"));
  EXPECT_FALSE(back.contains("elapsed_seconds"));
}

TEST(Report, CsvRows) {
  RunOptions opts;
  opts.detail = true;
  const Report r = run_scenario(parse_scenario(minimal_doc()), opts);
  const std::string csv = render_csv({r});
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  EXPECT_EQ(lines, 1u + 25u + 25u);
  EXPECT_NE(csv.find("\n0,minimality,0,-1,-1,,ok,pass,"), std::string::npos) << csv.substr(0, 200);

  const Report summary = run_scenario(parse_scenario(minimal_doc()));
  const std::string s = render_csv({summary});
  EXPECT_NE(s.find("0,minimality,,,,,summary,pass,"), std::string::npos) << s;
  EXPECT_THROW(report_format_from_string("yaml"), ConfigError);
}

}  // namespace
}  // namespace mincurv
