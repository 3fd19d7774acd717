#include "mincurv/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mincurv/error.hpp"

namespace mincurv {

namespace {

using nlohmann::json;

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Quotes fields containing separators, quotes or newlines.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string pairs_text(const std::vector<std::pair<std::string, double>>& pairs) {
  std::string out;
  for (const auto& [k, v] : pairs) {
    if (!out.empty()) out += ';';
    out += k + "=" + g17(v);
  }
  return out;
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw Error(path.string() + ": write failed");
}

}  // namespace

ReportFormat report_format_from_string(std::string_view text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  throw ConfigError("output.format: expected json or csv, got '" + std::string(text) + "'");
}

json check_to_json(const CheckResult& r) {
  json j;
  j["name"] = r.name;
  j["verdict"] = std::string(to_string(r.verdict));
  j["worst"] = r.worst;
  j["tol"] = r.tol;
  j["points"] = r.points;
  j["skipped"] = r.skipped;
  j["errors"] = r.errors;
  j["note"] = r.note;
  j["stats"] = r.stats;
  json parts = json::array();
  for (const CheckPart& p : r.parts) {
    parts.push_back({{"name", p.name},
                     {"inequality", p.inequality},
                     {"tol", p.tol},
                     {"worst", p.worst},
                     {"points", p.points},
                     {"verdict", std::string(to_string(p.verdict))}});
  }
  j["parts"] = std::move(parts);
  if (!r.details.empty()) {
    json details = json::array();
    for (const PointRecord& d : r.details) {
      json rec;
      rec["point"] = d.point;
      rec["status"] = d.status;
      rec["pass"] = d.pass;
      json values = json::object();
      for (const auto& [k, v] : d.values) values[k] = v;
      json residuals = json::object();
      for (const auto& [k, v] : d.residuals) residuals[k] = v;
      rec["values"] = std::move(values);
      rec["residuals"] = std::move(residuals);
      details.push_back(std::move(rec));
    }
    j["details"] = std::move(details);
  }
  return j;
}

json report_to_json(const Report& report) {
  json j;
  j["name"] = report.name;
  j["scenario"] = report.scenario;
  if (!report.sweep_values.is_null()) j["sweep_values"] = report.sweep_values;
  json checks = json::array();
  for (const CheckResult& r : report.checks) checks.push_back(check_to_json(r));
  j["checks"] = std::move(checks);
  j["overall"] = std::string(to_string(report.overall));
  return j;
}

std::string render_json(const Report& report) { return report_to_json(report).dump(2) + "\n"; }

std::string render_json(const SweepResult& sweep) {
  json j;
  json reports = json::array();
  for (const Report& r : sweep.reports) reports.push_back(report_to_json(r));
  j["reports"] = std::move(reports);
  j["table"] = sweep.table;
  return j.dump(2) + "\n";
}

std::string render_csv(const std::vector<Report>& reports) {
  std::ostringstream out;
  out << "run,check,index,u1,u2,u3,status,verdict,residuals,values\n";
  for (std::size_t run = 0; run < reports.size(); ++run) {
    for (const CheckResult& r : reports[run].checks) {
      if (r.details.empty()) {
        out << run << ',' << csv_field(r.name) << ",,,,," << csv_field(r.note.empty() ? "summary" : "summary: " + r.note)
            << ',' << to_string(r.verdict) << ',' << csv_field("worst=" + g17(r.worst) + ";tol=" + g17(r.tol)) << ",\n";
        continue;
      }
      for (std::size_t k = 0; k < r.details.size(); ++k) {
        const PointRecord& d = r.details[k];
        out << run << ',' << csv_field(r.name) << ',' << k;
        for (std::size_t c = 0; c < 3; ++c) {
          out << ',';
          if (c < d.point.size()) out << g17(d.point[c]);
        }
        const bool skipped = d.status.rfind("skipped", 0) == 0;
        const std::string_view verdict = !d.pass ? "fail" : (skipped ? "not-applicable" : "pass");
        out << ',' << csv_field(d.status) << ',' << verdict << ',' << csv_field(pairs_text(d.residuals))
            << ',' << csv_field(pairs_text(d.values)) << '\n';
      }
    }
  }
  return out.str();
}

void emit_report(const Report& report, ReportFormat format, const std::filesystem::path& path) {
  write_text(format == ReportFormat::Json ? render_json(report) : render_csv({report}), path);
}

void emit_sweep(const SweepResult& sweep, ReportFormat format, const std::filesystem::path& path) {
  write_text(format == ReportFormat::Json ? render_json(sweep) : render_csv(sweep.reports), path);
}

}  // namespace mincurv
