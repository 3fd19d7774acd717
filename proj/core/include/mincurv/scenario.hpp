#pragma once

// Scenario configs: one JSON document describing a surface, a grid, a reference frame, the
// checks to run and where to write the report.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "mincurv/check_result.hpp"
#include "mincurv/checks.hpp"
#include "mincurv/growth.hpp"
#include "mincurv/immersion.hpp"

namespace mincurv {

struct SurfaceSpec {
  std::string kind = "catalogue";  // catalogue | graph | parametric
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  std::vector<std::string> exprs;  // graph: height functions f^1..f^m; parametric: all components
  int n = 2;
};

struct MaskSpec {
  std::string kind = "none";  // none | disk | extrinsic_ball
  double radius = 1.0;
  std::vector<double> center;  // parameter coordinates; empty = grid center
};

struct GridConfig {
  std::vector<std::pair<double, double>> ranges;
  std::vector<int> counts;
  MaskSpec mask;
};

struct OutputSpec {
  std::string path;
  std::string format = "json";  // json | csv
  bool detail = false;
};

/// One sweep axis: the value at JSON pointer `pointer` takes each entry of `values`.
struct SweepAxis {
  std::string pointer;
  std::vector<nlohmann::json> values;
};

struct ScenarioConfig {
  std::string name;
  nlohmann::json source;  // the validated document, echoed in reports
  SurfaceSpec surface;
  GridConfig grid;
  nlohmann::json reference_frame;  // null, "coordinate", "tangent" or an n x (n+m) array
  std::vector<CheckSpec> checks;
  ProbeParams probe;
  OutputSpec output;
  std::vector<SweepAxis> sweep;
};

/// Validates a config document. ConfigError messages start with the offending field path,
/// e.g. "checks[2].name: unknown check 'foo'".
ScenarioConfig parse_scenario(const nlohmann::json& document);
ScenarioConfig load_scenario(const std::filesystem::path& path);

Immersion build_immersion(const SurfaceSpec& spec);
GridSpec build_grid(const GridConfig& config, const Immersion& imm);
Eigen::MatrixXd build_reference_frame(const nlohmann::json& spec, const Immersion& imm, const GridSpec& grid);

struct Report {
  std::string name;
  nlohmann::json scenario;
  nlohmann::json sweep_values;  // pointer -> value for sweep members, null otherwise
  std::vector<CheckResult> checks;
  Verdict overall = Verdict::NotApplicable;
  double elapsed_seconds = 0.0;  // not serialized so reports stay byte-identical
};

struct RunOptions {
  int jobs = 1;
  std::optional<bool> detail;  // overrides output.detail
};

/// Overall verdict is pass iff every check that is not not-applicable passes.
Verdict overall_verdict(const std::vector<CheckResult>& checks);

Report run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

struct SweepResult {
  std::vector<Report> reports;
  /// One row per (sweep tuple, check): the sweep values, verdict, worst and stats.
  nlohmann::json table = nlohmann::json::array();
};

/// Expands the cartesian product of `sweep` axes (an axis with no values yields no runs).
/// A config without sweep axes runs once.
SweepResult run_sweep(const ScenarioConfig& config, const RunOptions& options = {});

}  // namespace mincurv
