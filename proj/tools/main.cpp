// mincurv: scenario runner. Exit codes: 0 overall pass, 1 some check failed, 2 usage or config error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mincurv/catalogue.hpp"
#include "mincurv/checks.hpp"
#include "mincurv/error.hpp"
#include "mincurv/report.hpp"
#include "mincurv/scenario.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct RunFlags {
  std::string config;
  std::string out;
  std::string format;
  int jobs = 0;
  bool detail = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("config", flags.config, "scenario JSON file")->required();
  cmd->add_option("--out", flags.out, "report path; default output.path from the config, else stdout");
  cmd->add_option("--format", flags.format, "json or csv; default output.format from the config")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--jobs", flags.jobs, "worker threads; default = available cores")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--detail", flags.detail, "include per-point records");
}

struct Resolved {
  mincurv::ScenarioConfig config;
  mincurv::RunOptions options;
  mincurv::ReportFormat format;
  std::string path;
};

Resolved resolve(const RunFlags& flags) {
  Resolved r{mincurv::load_scenario(flags.config), {}, mincurv::ReportFormat::Json, {}};
  r.format = mincurv::report_format_from_string(flags.format.empty() ? r.config.output.format : flags.format);
  r.path = flags.out.empty() ? r.config.output.path : flags.out;
  r.options.jobs = flags.jobs > 0 ? flags.jobs : mincurv::default_jobs();
  // CSV rows are per point, so CSV output always carries details
  if (flags.detail || r.format == mincurv::ReportFormat::Csv) r.options.detail = true;
  return r;
}

void summarize(const mincurv::Report& report) {
  std::fprintf(stderr, "%s: %s (%.2fs)\n", report.name.c_str(), std::string(mincurv::to_string(report.overall)).c_str(),
               report.elapsed_seconds);
  for (const auto& c : report.checks) {
    std::fprintf(stderr, "  %-20s %-15s worst %.3e tol %.1e  points %d skipped %d errors %d%s%s\n", c.name.c_str(),
                 std::string(mincurv::to_string(c.verdict)).c_str(), c.worst, c.tol, c.points, c.skipped, c.errors,
                 c.note.empty() ? "" : "  ", c.note.c_str());
  }
}

int run_check_command(const RunFlags& flags) {
  const Resolved r = resolve(flags);
  const mincurv::Report report = mincurv::run_scenario(r.config, r.options);
  mincurv::emit_report(report, r.format, r.path);
  summarize(report);
  return report.overall == mincurv::Verdict::Fail ? kExitFail : kExitPass;
}

int run_sweep_command(const RunFlags& flags) {
  const Resolved r = resolve(flags);
  const mincurv::SweepResult sweep = mincurv::run_sweep(r.config, r.options);
  mincurv::emit_sweep(sweep, r.format, r.path);
  bool failed = false;
  for (const auto& report : sweep.reports) {
    summarize(report);
    failed = failed || report.overall == mincurv::Verdict::Fail;
  }
  std::fprintf(stderr, "%zu run(s)\n", sweep.reports.size());
  return failed ? kExitFail : kExitPass;
}

void list_surfaces() {
  for (const auto& e : mincurv::catalogue_entries())
    std::cout << e.name << "\t" << e.params << "\t" << e.description << "\n";
}

void list_checks() {
  for (const auto& c : mincurv::check_catalogue()) {
    std::cout << c.name << "\ttol=" << c.default_tol;
    if (c.default_equality_tol) std::cout << " equality_tol=" << *c.default_equality_tol;
    if (!c.param_keys.empty()) {
      std::cout << " params=";
      for (std::size_t k = 0; k < c.param_keys.size(); ++k) std::cout << (k ? "," : "") << c.param_keys[k];
    }
    std::cout << "\t" << c.description << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for minimal submanifolds with G-rank at most 2"};
  app.require_subcommand(1);
  RunFlags check_flags;
  RunFlags sweep_flags;
  CLI::App* check = app.add_subcommand("check", "run one scenario");
  add_run_flags(check, check_flags);
  CLI::App* sweep = app.add_subcommand("sweep", "run the cartesian product of the scenario's sweep axes");
  add_run_flags(sweep, sweep_flags);
  CLI::App* surfaces = app.add_subcommand("list-surfaces", "print the surface catalogue");
  CLI::App* checks = app.add_subcommand("list-checks", "print the available checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (check->parsed()) return run_check_command(check_flags);
    if (sweep->parsed()) return run_sweep_command(sweep_flags);
    if (surfaces->parsed()) list_surfaces();
    if (checks->parsed()) list_checks();
    return kExitPass;
  } catch (const mincurv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mincurv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
