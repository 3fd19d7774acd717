#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mincurv/scenario.hpp"

namespace mincurv {

enum class ReportFormat { Json, Csv };

/// Throws ConfigError for anything other than "json" or "csv".
ReportFormat report_format_from_string(std::string_view text);

nlohmann::json check_to_json(const CheckResult& result);
nlohmann::json report_to_json(const Report& report);

/// Deterministic text: sorted keys, shortest round-trip doubles, no timing fields.
std::string render_json(const Report& report);
std::string render_json(const SweepResult& sweep);

/// Columns: run, check, index, u1..u3, status, verdict, residuals, values. Doubles use %.17g.
/// Rows come from per-point details; a check without details contributes a single summary
/// row with an empty index. An empty check list gives the header alone.
std::string render_csv(const std::vector<Report>& reports);

/// Writes to `path`, or to stdout when `path` is empty or "-". Throws Error on I/O failure.
void emit_report(const Report& report, ReportFormat format, const std::filesystem::path& path);
void emit_sweep(const SweepResult& sweep, ReportFormat format, const std::filesystem::path& path);

}  // namespace mincurv
