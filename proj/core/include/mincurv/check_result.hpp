#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mincurv {

enum class Verdict { Pass, Fail, NotApplicable };

std::string_view to_string(Verdict v) noexcept;

/// One residual series of a check. Inequality parts hold signed residuals (positive = violation).
struct CheckPart {
  std::string name;
  bool inequality = false;
  double tol = 0.0;
  double worst = 0.0;
  int points = 0;
  Verdict verdict = Verdict::NotApplicable;
};

struct PointRecord {
  std::vector<double> point;
  std::string status;  // "ok", "skipped: ...", "error: ..."
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::pair<std::string, double>> residuals;
  bool pass = true;
};

struct CheckResult {
  std::string name;
  int points = 0;    // points where at least one residual was evaluated
  int skipped = 0;   // hypothesis not met or excluded (e.g. |B| = 0)
  int errors = 0;    // evaluation failures
  double worst = 0.0;
  double tol = 0.0;
  Verdict verdict = Verdict::NotApplicable;
  std::string note;
  std::vector<CheckPart> parts;
  std::vector<PointRecord> details;
  std::map<std::string, double> stats;

  const CheckPart* part(std::string_view name) const;
};

/// Outcome of evaluating one check at one point.
struct PointOutcome {
  enum class Status { Ok, Skipped, Error };
  Status status = Status::Ok;
  std::string note;
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::optional<double>> residuals;  // one per part
  std::map<std::string, double> counters;        // summed into CheckResult::stats

  static PointOutcome skipped(std::string why);
  static PointOutcome error(std::string why);
};

/// Folds per-point outcomes (in grid order) into a result. Part verdicts follow
/// worst <= tol; the check fails if any part fails or every point errored.
CheckResult aggregate(std::string name, std::vector<CheckPart> parts, const std::vector<std::vector<double>>& points,
                      const std::vector<PointOutcome>& outcomes, bool keep_details);

/// Recomputes the top-level worst/tol/verdict from the parts.
void finalize(CheckResult& result);

/// Runs fn(0..count-1) on up to `jobs` threads; results are returned in index order.
template <class T>
std::vector<T> parallel_map(std::size_t count, int jobs, const std::function<T(std::size_t)>& fn);

/// Number of hardware threads, at least 1.
int default_jobs() noexcept;

}  // namespace mincurv

#include "mincurv/detail/parallel_map.hpp"
