#include "mincurv/check_result.hpp"

#include <cmath>
#include <limits>
#include <thread>

namespace mincurv {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotApplicable: return "not-applicable";
  }
  return "?";
}

const CheckPart* CheckResult::part(std::string_view part_name) const {
  for (const auto& p : parts)
    if (p.name == part_name) return &p;
  return nullptr;
}

PointOutcome PointOutcome::skipped(std::string why) {
  PointOutcome o;
  o.status = Status::Skipped;
  o.note = std::move(why);
  return o;
}

PointOutcome PointOutcome::error(std::string why) {
  PointOutcome o;
  o.status = Status::Error;
  o.note = std::move(why);
  return o;
}

int default_jobs() noexcept {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

bool exceeds(double worst, double tol) { return !(worst <= tol); }

}  // namespace

CheckResult aggregate(std::string name, std::vector<CheckPart> parts, const std::vector<std::vector<double>>& points,
                      const std::vector<PointOutcome>& outcomes, bool keep_details) {
  CheckResult r;
  r.name = std::move(name);
  r.parts = std::move(parts);
  std::vector<bool> seen(r.parts.size(), false);
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const PointOutcome& o = outcomes[k];
    PointRecord rec;
    if (keep_details) rec.point = points[k];
    if (o.status == PointOutcome::Status::Error) {
      ++r.errors;
      rec.status = "error: " + o.note;
      rec.pass = false;
    } else if (o.status == PointOutcome::Status::Skipped) {
      ++r.skipped;
      rec.status = "skipped: " + o.note;
    } else {
      bool any = false;
      for (std::size_t p = 0; p < r.parts.size() && p < o.residuals.size(); ++p) {
        if (!o.residuals[p]) continue;
        const double v = *o.residuals[p];
        CheckPart& part = r.parts[p];
        // NaN is sticky so a non-finite residual always fails the part
        if (!seen[p]) {
          part.worst = v;
        } else if (!std::isnan(part.worst) && (std::isnan(v) || v > part.worst)) {
          part.worst = v;
        }
        seen[p] = true;
        ++part.points;
        any = true;
        if (exceeds(v, part.tol)) rec.pass = false;
        if (keep_details) rec.residuals.emplace_back(part.name, v);
      }
      if (any) {
        ++r.points;
        rec.status = o.note.empty() ? "ok" : "ok: " + o.note;
      } else {
        ++r.skipped;
        rec.status = o.note.empty() ? "skipped" : "skipped: " + o.note;
      }
    }
    for (const auto& [key, value] : o.counters) r.stats[key] += value;
    if (keep_details) {
      rec.values = o.values;
      r.details.push_back(std::move(rec));
    }
  }
  r.stats["points_total"] = static_cast<double>(outcomes.size());
  finalize(r);
  if (r.errors > 0 && r.points == 0 && r.skipped == 0) {
    r.verdict = Verdict::Fail;
    r.note = "every point failed to evaluate";
    for (const PointOutcome& o : outcomes)
      if (o.status == PointOutcome::Status::Error) {
        r.note += " (first: " + o.note + ")";
        break;
      }
  } else if (r.errors > 0) {
    r.note = std::to_string(r.errors) + " point(s) failed to evaluate";
  }
  return r;
}

void finalize(CheckResult& r) {
  bool any_fail = false;
  bool any_pass = false;
  for (CheckPart& p : r.parts) {
    if (p.points == 0) {
      p.verdict = Verdict::NotApplicable;
      p.worst = 0.0;
      continue;
    }
    p.verdict = exceeds(p.worst, p.tol) ? Verdict::Fail : Verdict::Pass;
    any_fail = any_fail || p.verdict == Verdict::Fail;
    any_pass = any_pass || p.verdict == Verdict::Pass;
  }
  r.verdict = any_fail ? Verdict::Fail : (any_pass ? Verdict::Pass : Verdict::NotApplicable);

  std::vector<const CheckPart*> active;
  for (const CheckPart& p : r.parts)
    if (p.verdict != Verdict::NotApplicable) active.push_back(&p);
  if (active.empty()) {
    r.worst = 0.0;
    r.tol = r.parts.size() == 1 ? r.parts.front().tol : 1.0;
  } else if (r.parts.size() == 1) {
    r.worst = active.front()->worst;
    r.tol = active.front()->tol;
  } else {
    // composite: worst of residual / tolerance, so tol = 1
    double worst = -std::numeric_limits<double>::infinity();
    for (const CheckPart* p : active) {
      const double scaled = p->tol > 0.0 ? p->worst / p->tol : (p->worst <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
      if (std::isnan(scaled) || scaled > worst) worst = scaled;
      if (std::isnan(worst)) break;
    }
    r.worst = worst;
    r.tol = 1.0;
  }
}

}  // namespace mincurv
