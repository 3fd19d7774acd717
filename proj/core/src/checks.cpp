#include "mincurv/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "mincurv/error.hpp"

namespace mincurv {

namespace {

constexpr double kMinimalTol = 1e-7;
// Simons equality and G-conformality detectors are compared outside this band factor; the
// two scale-free quantities differ by a factor in [1, 2] analytically.
constexpr double kCouplingBand = 3.0;

enum class Kind { Identity, Equality, Count };

struct PartDef {
  const char* name;
  bool inequality;
  Kind kind;
  double tol;
};

struct CheckDef {
  CheckInfo info;
  std::vector<PartDef> parts;
};

CheckDef def(std::string name, std::string description, std::vector<PartDef> parts,
             std::optional<double> equality_tol = std::nullopt, std::vector<std::string> keys = {}) {
  CheckDef d;
  d.info.name = std::move(name);
  d.info.description = std::move(description);
  d.info.default_tol = 0.5;
  for (const PartDef& p : parts)
    if (p.kind == Kind::Identity) {
      d.info.default_tol = p.tol;
      break;
    }
  d.info.default_equality_tol = equality_tol;
  d.info.param_keys = std::move(keys);
  d.parts = std::move(parts);
  return d;
}

const std::vector<CheckDef>& definitions() {
  static const std::vector<CheckDef> defs = [] {
    std::vector<CheckDef> v;
    v.push_back(def("minimality", "|H| at every point", {{"H", false, Kind::Identity, 1e-7}}));
    v.push_back(def("minimal_system", "residual of the minimal surface system for 2-dimensional graphs",
                    {{"system", false, Kind::Identity, 1e-7}}));
    v.push_back(def("pluecker", "Pluecker relation among replaced pairings, Gram-Schmidt and canonical frames",
                    {{"frames", false, Kind::Identity, 1e-12}, {"canonical", false, Kind::Identity, 1e-12}}));
    v.push_back(def("w_formulas", "gradient and Laplacian of w: jets against pairing formulas",
                    {{"grad", false, Kind::Identity, 1e-6},
                     {"lap", false, Kind::Identity, 1e-6},
                     {"lap_general", false, Kind::Identity, 1e-6},
                     {"w_consistency", false, Kind::Identity, 1e-10}}));
    v.push_back(def("dlogw", "Delta log w <= -|B|^2, with equality for 2-dimensional graphs",
                    {{"inequality", true, Kind::Identity, 1e-6},
                     {"equality", false, Kind::Identity, 1e-6},
                     {"formula", false, Kind::Identity, 1e-6}}));
    v.push_back(def("simons", "Simons inequality, inner term identities, ratio range and equality coupling",
                    {{"inequality", true, Kind::Identity, 1e-4},
                     {"inner", false, Kind::Identity, 1e-4},
                     {"canonical_terms", false, Kind::Identity, 1e-4},
                     {"ratio_range", true, Kind::Identity, 1e-4},
                     {"equality", false, Kind::Equality, 1e-3},
                     {"coupling", false, Kind::Count, 0.5}},
                    1e-3));
    v.push_back(def("kato", "|nabla B|^2 >= 2 |nabla |B||^2 and the zeta characterization of equality",
                    {{"inequality", true, Kind::Identity, 1e-6}, {"p10", false, Kind::Identity, 1e-6}}, 1e-5));
    v.push_back(def("si2", "Delta |B|^2 >= 4 |nabla |B||^2 - 3 |B|^4", {{"inequality", true, Kind::Identity, 1e-6}}));
    v.push_back(def("g_conformal", "agreement of the G-conformality criteria mu1 = mu2, <B_ww, B_ww> = 0, omega = 0",
                    {{"agreement", false, Kind::Count, 0.5}, {"corollary", false, Kind::Count, 0.5}}, 1e-6));
    v.push_back(def("jacobian_identities", "singular values of Df against 2x2 minors and det g",
                    {{"minors", false, Kind::Identity, 1e-7}, {"volume", false, Kind::Identity, 1e-7}}));
    v.push_back(def("isothermal", "metric in u1 = x1, u2 = a x1 + b x2 is conformal",
                    {{"g11_g22", false, Kind::Identity, 1e-7},
                     {"g12", false, Kind::Identity, 1e-7},
                     {"v1", false, Kind::Identity, 1e-7}},
                    std::nullopt, {"a", "b"}));
    v.push_back(def("growth", "extrinsic-ball volume growth table of a graph",
                    {{"monotone", false, Kind::Count, 0.5}, {"volume_bound", true, Kind::Identity, 0.01}},
                    std::nullopt, {"radii", "cells"}));
    v.push_back(def("probe", "implied constants of the integral and mean value estimates, subharmonicity on the grid",
                    {{"es3", true, Kind::Identity, 1e-6}}));
    v.push_back(def("subharmonic", "Delta(|B|^(2s) v^q) >= (q - 3s) |B|^(2s+2) v^q",
                    {{"es3", true, Kind::Identity, 1e-6}}, std::nullopt, {"s", "q"}));
    v.push_back(def("codazzi", "symmetry of h_{alpha,ijk} in j, k and the trace identity",
                    {{"symmetry", false, Kind::Identity, 1e-8}, {"trace", false, Kind::Identity, 1e-8}}));
    v.push_back(def("gauss_equation", "Brioschi curvature against the Gauss equation",
                    {{"intrinsic", false, Kind::Identity, 1e-6}, {"minimal_identity", false, Kind::Identity, 1e-6}}));
    v.push_back(def("g_rank", "G-rank does not exceed max_rank", {{"rank", false, Kind::Count, 0.5}}, std::nullopt,
                    {"max_rank", "rank_tol"}));
    v.push_back(def("frames", "orthonormality of frames, symmetry of h, |B|^2 in the canonical frame",
                    {{"tangent", false, Kind::Identity, 1e-10},
                     {"normal", false, Kind::Identity, 1e-10},
                     {"mixed", false, Kind::Identity, 1e-10},
                     {"h_symmetry", false, Kind::Identity, 1e-10},
                     {"canonical_normB2", false, Kind::Identity, 1e-8}}));
    return v;
  }();
  return defs;
}

const CheckDef& definition(std::string_view name) {
  for (const CheckDef& d : definitions())
    if (d.info.name == name) return d;
  throw ConfigError("name: unknown check '" + std::string(name) + "'");
}

double scale1(double x) { return std::max(1.0, std::abs(x)); }

bool is_minimal(const PointGeometry& pg) {
  return pg.mean_curvature.norm() <= kMinimalTol * std::max(1.0, std::sqrt(pg.normB2));
}

double number_param(const nlohmann::json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (!v.is_number()) throw ConfigError(std::string(key) + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string(key) + ": must be finite");
  return x;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Resolved {
  std::vector<CheckPart> parts;
  double eq_tol = 0.0;
};

Resolved resolve(const CheckDef& d, const CheckSpec& spec) {
  if (spec.tol && !(*spec.tol > 0.0)) throw ConfigError("tol: must be positive");
  if (spec.equality_tol && !(*spec.equality_tol > 0.0)) throw ConfigError("equality_tol: must be positive");
  const nlohmann::json& params = spec.params.is_null() ? nlohmann::json::object() : spec.params;
  if (!params.is_object()) throw ConfigError("params: expected an object");
  for (const auto& [key, value] : params.items()) {
    (void)value;
    if (std::find(d.info.param_keys.begin(), d.info.param_keys.end(), key) == d.info.param_keys.end())
      throw ConfigError(key + ": unknown parameter for check '" + d.info.name + "'");
  }
  Resolved r;
  r.eq_tol = spec.equality_tol.value_or(d.info.default_equality_tol.value_or(spec.tol.value_or(d.info.default_tol)));
  for (const PartDef& p : d.parts) {
    CheckPart part;
    part.name = p.name;
    part.inequality = p.inequality;
    switch (p.kind) {
      case Kind::Identity: part.tol = spec.tol.value_or(p.tol); break;
      case Kind::Equality: part.tol = r.eq_tol; break;
      case Kind::Count: part.tol = p.tol; break;
    }
    r.parts.push_back(std::move(part));
  }
  return r;
}

using PointFn = std::function<PointOutcome(std::span<const double>)>;

CheckResult grid_check(const std::string& name, std::vector<CheckPart> parts, const CheckContext& ctx,
                       const PointFn& fn, std::vector<PointOutcome>* keep = nullptr) {
  const std::vector<std::vector<double>> points = ctx.grid.points();
  const std::size_t nparts = parts.size();
  const std::function<PointOutcome(std::size_t)> eval = [&](std::size_t k) {
    PointOutcome o;
    try {
      o = fn(points[k]);
    } catch (const Error& e) {
      o = PointOutcome::error(e.what());
    }
    o.residuals.resize(nparts);
    return o;
  };
  std::vector<PointOutcome> outcomes = parallel_map<PointOutcome>(points.size(), ctx.jobs, eval);
  CheckResult r = aggregate(name, std::move(parts), points, outcomes, ctx.detail);
  if (keep) *keep = std::move(outcomes);
  return r;
}

CheckResult not_applicable(const std::string& name, std::vector<CheckPart> parts, std::string why) {
  CheckResult r;
  r.name = name;
  r.parts = std::move(parts);
  finalize(r);
  r.verdict = Verdict::NotApplicable;
  r.note = std::move(why);
  return r;
}

Eigen::MatrixXd resolve_reference(const CheckContext& ctx) {
  if (ctx.reference_frame.size() > 0) {
    validate_reference_frame(ctx.reference_frame, ctx.immersion->dim(), ctx.immersion->ambient_dim());
    return ctx.reference_frame;
  }
  return default_reference_frame(*ctx.immersion, ctx.grid.center());
}

PointOutcome skip(std::string why) { return PointOutcome::skipped(std::move(why)); }

// Scratch wrapper that names values and residuals as they are set.
struct Outcome {
  PointOutcome o;
  void value(std::string key, double v) { o.values.emplace_back(std::move(key), v); }
  void residual(std::size_t part, double v) {
    if (o.residuals.size() <= part) o.residuals.resize(part + 1);
    o.residuals[part] = v;
  }
  void count(const std::string& key, double v = 1.0) { o.counters[key] += v; }
};

// ---- individual checks --------------------------------------------------------------------

PointFn minimality_fn(const Immersion& imm) {
  return [&imm](std::span<const double> x) {
    const PointGeometry pg = point_geometry_at(imm, x);
    Outcome out;
    const double H = pg.mean_curvature.norm();
    out.value("H", H);
    out.residual(0, H);
    return out.o;
  };
}

PointFn minimal_system_fn(const Immersion& imm) {
  return [&imm](std::span<const double> x) {
    const PointGeometry pg = point_geometry_at(imm, x);
    const int m = pg.m;
    const Eigen::VectorXd fx = pg.dF.col(0).tail(m);
    const Eigen::VectorXd fy = pg.dF.col(1).tail(m);
    const Eigen::VectorXd r = (1.0 + fy.squaredNorm()) * pg.d2F[0].tail(m) - 2.0 * fx.dot(fy) * pg.d2F[1].tail(m) +
                              (1.0 + fx.squaredNorm()) * pg.d2F[3].tail(m);
    Outcome out;
    out.value("system_norm", r.norm());
    out.residual(0, r.norm());
    return out.o;
  };
}

PointFn pluecker_fn(const Immersion& imm, const Eigen::MatrixXd& ref) {
  return [&imm, &ref](std::span<const double> x) {
    const PointGeometry pg = point_geometry_at(imm, x);
    if (pg.n < 2 || pg.m < 2) return skip("needs n >= 2 and codimension >= 2");
    const WedgePack wp = w_pack_at(imm, pg, ref);
    const int n = pg.n;
    const int m = pg.m;
    auto p2 = [&](int j, int a, int k, int b) {
      return wp.pairings2[static_cast<std::size_t>(((j * m + a) * n + k) * m + b)];
    };
    const double gs = wp.w_frames * p2(0, 0, 1, 1) - wp.pairings1(0, 0) * wp.pairings1(1, 1) +
                      wp.pairings1(0, 1) * wp.pairings1(1, 0);
    Outcome out;
    out.value("pluecker_frames", gs);
    out.residual(0, std::abs(gs));
    if (wp.pluecker) {
      out.value("pluecker_canonical", *wp.pluecker);
      out.residual(1, std::abs(*wp.pluecker));
    }
    return out.o;
  };
}

PointFn w_formulas_fn(const Immersion& imm, const Eigen::MatrixXd& ref) {
  return [&imm, &ref](std::span<const double> x) {
    const PointGeometry pg = point_geometry_at(imm, x);
    if (!is_minimal(pg)) return skip("not minimal");
    const WedgePack wp = w_pack_at(imm, pg, ref);
    Outcome out;
    out.value("w", wp.w);
    out.value("lap_w_numeric", wp.lap_w_numeric);
    out.residual(0, (wp.grad_w_frame - wp.grad_w_formula).norm() / std::max(1.0, wp.grad_w_frame.norm()));
    if (wp.lap_w_formula) {
      out.value("lap_w_formula", *wp.lap_w_formula);
      out.residual(1, std::abs(wp.lap_w_numeric - *wp.lap_w_formula) / scale1(wp.lap_w_numeric));
    }
    out.value("lap_w_general", wp.lap_w_general);
    out.residual(2, std::abs(wp.lap_w_numeric - wp.lap_w_general) / scale1(wp.lap_w_numeric));
    out.residual(3, std::abs(wp.w - wp.w_frames));
    return out.o;
  };
}

PointFn dlogw_fn(const Immersion& imm, const Eigen::MatrixXd& ref) {
  return [&imm, &ref](std::span<const double> x) {
    const PointGeometry pg = point_geometry_at(imm, x);
    if (!is_minimal(pg)) return skip("not minimal");
    const WedgePack wp = w_pack_at(imm, pg, ref);
    if (!(wp.w > 0.0)) return skip("w <= 0");
    const double lap = laplace_beltrami(pg, scalar_field_jet(imm, x, Field::LogW, 2, &ref));
    Outcome out;
    out.value("lap_logw", lap);
    out.value("normB2", pg.normB2);
    const double r = (lap + pg.normB2) / scale1(pg.normB2);
    out.residual(0, r);
    if (pg.n == 2 && imm.is_graph()) out.residual(1, std::abs(r));
    if (wp.lap_logw_formula) {
      out.value("lap_logw_formula", *wp.lap_logw_formula);
      out.residual(2, std::abs(lap - *wp.lap_logw_formula) / scale1(lap));
    }
    return out.o;
  };
}

PointFn simons_fn(const Immersion& imm, double eq_tol) {
  return [&imm, eq_tol](std::span<const double> x) {
    const PointGeometry pg = point_geometry_at(imm, x);
    if (!is_minimal(pg)) return skip("not minimal");
    const SimonsReport s = simons_report_at(imm, x);
    const double B4 = s.normB2 * s.normB2;
    Outcome out;
    out.value("lapB2", s.lapB2);
    out.value("nablaB2", s.nablaB2);
    out.value("inner_term_numeric", s.inner_term_numeric);
    out.residual(0, (2.0 * s.nablaB2 - 3.0 * B4 - s.lapB2) / scale1(B4));
    out.residual(1, std::abs(s.inner_term_numeric + s.tilde_term + s.under_term) / scale1(B4));
    if (s.inner_term_formula) {
      const double m1 = *s.mu1 * *s.mu1;
      const double m2 = *s.mu2 * *s.mu2;
      out.residual(2, (std::abs(s.tilde_term - 4.0 * (m1 * m1 + m2 * m2)) + std::abs(s.under_term - 16.0 * m1 * m2)) /
                          scale1(B4));
    }
    if (!s.ratio) {
      out.count("excluded_B0");
      return out.o;
    }
    const double ratio = *s.ratio;
    out.value("ratio", ratio);
    out.residual(3, std::max(1.0 - ratio, ratio - 1.5));
    const double simons_gap = std::sqrt(2.0 * std::abs(1.5 - ratio));
    if (simons_gap <= eq_tol) out.count("simons_equality_points");
    if (s.mu1 && s.mu2) {
      const double sum = *s.mu1 + *s.mu2;
      const double delta = sum > 0.0 ? std::abs(*s.mu1 - *s.mu2) / sum : 0.0;
      out.value("mu1", *s.mu1);
      out.value("mu2", *s.mu2);
      const bool conformal = delta <= eq_tol;
      if (conformal) {
        out.count("conformal_points");
        out.residual(4, std::abs(ratio - 1.5));
      }
      const bool disagree = (conformal && simons_gap > kCouplingBand * eq_tol) ||
                            (simons_gap <= eq_tol && delta > kCouplingBand * eq_tol);
      out.residual(5, disagree ? 1.0 : 0.0);
    }
    return out.o;
  };
}

PointFn kato_fn(const Immersion& imm, double eq_tol, double tol, double rank_tol) {
  return [&imm, eq_tol, tol, rank_tol](std::span<const double> x) {
    const PointGeometry pg = point_geometry_at(imm, x);
    if (!is_minimal(pg)) return skip("not minimal");
    if (pg.n >= 2 && gauss_rank_at(pg, rank_tol).rank > 2) return skip("G-rank > 2");
    if (std::sqrt(pg.normB2) <= rank_tol) {
      PointOutcome o = skip("|B| = 0");
      o.counters["excluded_B0"] = 1.0;
      return o;
    }
    const KatoReport k = kato_report_at(imm, x);
    Outcome out;
    out.value("nablaB2", k.nablaB2);
    out.value("grad_normB2", *k.grad_normB2);
    out.value("gap", *k.gap);
    const double scale = scale1(k.nablaB2);
    out.residual(0, -*k.gap / scale);
    const bool equality = std::abs(*k.gap) / scale <= eq_tol;
    if (equality) out.count("equality_points");
    if (pg.n != 2) return out.o;
    const ComplexPack cp = complex_pack_at(pg);
    if (!cp.isothermal) {
      out.count("p10_skipped_non_isothermal");
      return out.o;
    }
    const double zscale = std::max(1.0, cp.nablaB_www.norm());
    const double zres = cp.zeta_residual ? *cp.zeta_residual / zscale : cp.nablaB_www.norm() / zscale;
    out.value("zeta_residual", zres);
    if (equality) {
      out.residual(1, zres);
    } else if (zres <= tol) {
      // converse direction of the zeta characterization is recorded only
      out.count("p10_converse_exceptions");
    }
    return out.o;
  };
}

PointFn si2_fn(const Immersion& imm, double rank_tol) {
  return [&imm, rank_tol](std::span<const double> x) {
    const PointGeometry pg = point_geometry_at(imm, x);
    if (!is_minimal(pg)) return skip("not minimal");
    if (pg.n >= 2 && gauss_rank_at(pg, rank_tol).rank > 2) return skip("G-rank > 2");
    if (std::sqrt(pg.normB2) <= rank_tol) return skip("|B| = 0");
    const SimonsReport s = simons_report_at(imm, x, rank_tol);
    const KatoReport k = kato_report_at(imm, x);
    const double B4 = s.normB2 * s.normB2;
    Outcome out;
    out.value("lapB2", s.lapB2);
    out.value("grad_normB2", *k.grad_normB2);
    out.residual(0, (4.0 * *k.grad_normB2 - 3.0 * B4 - s.lapB2) / scale1(B4));
    return out.o;
  };
}

PointFn g_conformal_fn(const Immersion& imm, double tol, double rank_tol) {
  return [&imm, tol, rank_tol](std::span<const double> x) {
    const PointGeometry pg = point_geometry_at(imm, x);
    if (pg.n < 2) return skip("n < 2");
    if (!is_minimal(pg)) return skip("not minimal");
    Outcome out;
    std::vector<bool> verdicts;
    if (std::sqrt(pg.normB2) <= rank_tol) {
      verdicts.push_back(true);  // B = 0 counts as G-conformal
    } else {
      CanonicalFrame cf;
      try {
        cf = canonical_frame_at(pg, rank_tol);
      } catch (const HypothesisError&) {
        return skip("G-rank > 2");
      }
      const bool b = std::abs(cf.mu1 - cf.mu2) <= tol * (cf.mu1 + cf.mu2 + tol);
      out.value("b", b ? 1.0 : 0.0);
      verdicts.push_back(b);
    }
    if (pg.n == 2) {
      const ComplexPack cp = complex_pack_at(pg);
      if (cp.isothermal) {
        const bool c = std::abs(cp.Bww_square) <= tol * (cp.Bww.squaredNorm() + tol);
        const bool d = std::abs(cp.omega_coeff) <= tol;
        out.value("c", c ? 1.0 : 0.0);
        out.value("d", d ? 1.0 : 0.0);
        out.value("omega_abs", std::abs(cp.omega_coeff));
        verdicts.push_back(c);
        verdicts.push_back(d);
        out.count("isothermal_points");
        if (d) out.count("omega_zero_points");
      }
    }
    const bool all = std::all_of(verdicts.begin(), verdicts.end(), [](bool v) { return v; });
    const bool none = std::none_of(verdicts.begin(), verdicts.end(), [](bool v) { return v; });
    if (verdicts.front()) out.count("conformal_points");
    out.residual(0, all || none ? 0.0 : 1.0);
    return out.o;
  };
}

PointFn jacobian_fn(const Immersion& imm) {
  return [&imm](std::span<const double> x) {
    const PointGeometry pg = point_geometry_at(imm, x);
    const int m = pg.m;
    const Eigen::MatrixXd Df = pg.dF.bottomRows(m);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(Df);
    const Eigen::VectorXd sv = svd.singularValues();
    const double s1 = sv.size() > 0 ? sv(0) : 0.0;
    const double s2 = sv.size() > 1 ? sv(1) : 0.0;
    double minors = 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        const double d = Df(a, 0) * Df(b, 1) - Df(a, 1) * Df(b, 0);
        minors += d * d;
      }
    const double prod = s1 * s1 * s2 * s2;
    const double v2 = (1.0 + s1 * s1) * (1.0 + s2 * s2);
    Outcome out;
    out.value("sigma1", s1);
    out.value("sigma2", s2);
    out.value("minors", minors);
    out.value("v", std::sqrt(pg.det_g()));
    out.residual(0, std::abs(prod - minors) / scale1(minors));
    out.residual(1, std::abs(pg.det_g() - v2) / scale1(v2));
    return out.o;
  };
}

PointFn isothermal_fn(const Immersion& imm, double a, double b) {
  return [&imm, a, b](std::span<const double> x) {
    const PointGeometry pg = point_geometry_at(imm, x);
    Eigen::Matrix2d J;
    J << 1.0, 0.0, -a / b, 1.0 / b;
    const Eigen::Matrix2d gu = J.transpose() * pg.g.topLeftCorner<2, 2>() * J;
    const double v = std::sqrt(pg.det_g());
    const double lambda2 = 0.5 * (gu(0, 0) + gu(1, 1));
    Outcome out;
    out.value("g11u", gu(0, 0));
    out.value("g22u", gu(1, 1));
    out.value("g12u", gu(0, 1));
    out.value("lambda2", lambda2);
    out.residual(0, std::abs(gu(0, 0) - gu(1, 1)) / scale1(gu(0, 0)));
    out.residual(1, std::abs(gu(0, 1)) / scale1(gu(0, 0)));
    out.residual(2, std::abs(v - lambda2 * b) / scale1(v));
    return out.o;
  };
}

PointFn subharmonic_fn(const Immersion& imm, const Eigen::MatrixXd& ref, double s, double q, double rank_tol) {
  return [&imm, &ref, s, q, rank_tol](std::span<const double> x) {
    const PointGeometry pg = point_geometry_at(imm, x);
    if (!is_minimal(pg)) return skip("not minimal");
    if (pg.n >= 2 && gauss_rank_at(pg, rank_tol).rank > 2) return skip("G-rank > 2");
    const SubharmonicValue sv = subharmonic_at(imm, x, ref, s, q);
    Outcome out;
    out.value("laplacian", sv.laplacian);
    out.value("bound", sv.bound);
    out.residual(0, sv.residual / std::max({1.0, std::abs(sv.laplacian), std::abs(sv.bound)}));
    return out.o;
  };
}

PointFn codazzi_fn(const Immersion& imm) {
  return [&imm](std::span<const double> x) {
    const PointGeometry pg = point_geometry_at(imm, x);
    const int n = pg.n;
    double sym = 0.0;
    double trace = 0.0;
    for (int al = 0; al < pg.m; ++al)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) sym = std::max(sym, std::abs(pg.h3_at(al, i, j, k) - pg.h3_at(al, i, k, j)));
    for (int al = 0; al < pg.m; ++al)
      for (int k = 0; k < n; ++k) {
        double t = 0.0;
        for (int i = 0; i < n; ++i) t += pg.h3_at(al, i, i, k);
        trace = std::max(trace, std::abs(t));
      }
    Outcome out;
    out.value("symmetry", sym);
    out.residual(0, sym / (1.0 + std::sqrt(pg.nablaB2)));
    if (is_minimal(pg)) {
      out.value("trace", trace);
      out.residual(1, trace);
    }
    return out.o;
  };
}

PointFn gauss_equation_fn(const Immersion& imm) {
  return [&imm](std::span<const double> x) {
    const PointGeometry pg = point_geometry_at(imm, x);
    const CurvaturePack k = curvature_pack_at(imm, x);
    Outcome out;
    out.value("K_intrinsic", k.K_intrinsic);
    out.value("K_extrinsic", k.K_extrinsic);
    out.residual(0, std::abs(k.K_intrinsic - k.K_extrinsic) / scale1(k.K_extrinsic));
    if (is_minimal(pg)) out.residual(1, std::abs(k.K_extrinsic + 0.5 * pg.normB2) / scale1(pg.normB2));
    return out.o;
  };
}

PointFn g_rank_fn(const Immersion& imm, int max_rank, double rank_tol) {
  return [&imm, max_rank, rank_tol](std::span<const double> x) {
    const PointGeometry pg = point_geometry_at(imm, x);
    const GaussRank gr = gauss_rank_at(pg, rank_tol);
    Outcome out;
    out.value("rank", gr.rank);
    for (std::size_t k = 0; k < gr.singular_values.size(); ++k)
      out.value("sigma" + std::to_string(k + 1), gr.singular_values[k]);
    out.count("rank_" + std::to_string(gr.rank));
    out.residual(0, std::max(0, gr.rank - max_rank));
    return out.o;
  };
}

PointFn frames_fn(const Immersion& imm, double rank_tol) {
  return [&imm, rank_tol](std::span<const double> x) {
    const PointGeometry pg = point_geometry_at(imm, x);
    const int n = pg.n;
    const Eigen::MatrixXd& T = pg.tangent_frame;
    const Eigen::MatrixXd& N = pg.normal_frame;
    Outcome out;
    out.residual(0, (T * T.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
    if (pg.m > 0) {
      out.residual(1, (N * N.transpose() - Eigen::MatrixXd::Identity(pg.m, pg.m)).cwiseAbs().maxCoeff());
      out.residual(2, (T * N.transpose()).cwiseAbs().maxCoeff());
    }
    double sym = 0.0;
    for (int al = 0; al < pg.m; ++al)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) sym = std::max(sym, std::abs(pg.h_at(al, a, b) - pg.h_at(al, b, a)));
    out.residual(3, sym);
    if (n >= 2 && is_minimal(pg)) {
      try {
        const CanonicalFrame cf = canonical_frame_at(pg, rank_tol);
        const double mu = 2.0 * cf.mu1 * cf.mu1 + 2.0 * cf.mu2 * cf.mu2;
        out.residual(4, std::abs(pg.normB2 - mu) / scale1(pg.normB2));
      } catch (const HypothesisError&) {
        out.count("rank_above_2");
      }
    }
    return out.o;
  };
}

// ---- non-grid checks ----------------------------------------------------------------------

CheckResult growth_check(const CheckDef& d, Resolved r, const CheckSpec& spec, const CheckContext& ctx) {
  const Immersion& imm = *ctx.immersion;
  if (!imm.is_graph()) return not_applicable(d.info.name, std::move(r.parts), "needs a graph immersion");
  std::vector<double> radii{1.0, 2.0, 4.0};
  if (spec.params.is_object() && spec.params.contains("radii")) {
    const auto& js = spec.params.at("radii");
    if (!js.is_array()) throw ConfigError("radii: expected an array of numbers");
    radii.clear();
    for (std::size_t k = 0; k < js.size(); ++k) {
      if (!js[k].is_number()) throw ConfigError("radii[" + std::to_string(k) + "]: expected a number");
      radii.push_back(js[k].get<double>());
    }
  }
  GrowthOptions go;
  go.jobs = ctx.jobs;
  const double cells = number_param(spec.params.is_null() ? nlohmann::json::object() : spec.params, "cells", 0.0);
  if (cells < 0.0 || cells != std::floor(cells)) throw ConfigError("cells: expected a non-negative integer");
  go.cells = static_cast<int>(cells);

  CheckResult res;
  res.name = d.info.name;
  res.parts = std::move(r.parts);
  GrowthTable table;
  try {
    table = growth_table(imm, radii, go);
  } catch (const HypothesisError& e) {
    res.errors = 1;
    finalize(res);
    res.verdict = Verdict::Fail;
    res.note = e.what();
    return res;
  }
  CheckPart& mono = res.parts[0];
  CheckPart& bound = res.parts[1];
  mono.points = static_cast<int>(table.rows.size());
  mono.worst = table.monotone ? 0.0 : 1.0;
  bound.points = static_cast<int>(table.rows.size());
  bound.worst = -std::numeric_limits<double>::infinity();
  for (const GrowthRow& row : table.rows) {
    bound.worst = std::max(bound.worst, (row.volume - row.disk_bound) / row.disk_bound);
    const std::string tag = "R=" + format_number(row.R) + ".";
    res.stats[tag + "V"] = row.volume;
    res.stats[tag + "V_half"] = row.volume_half;
    res.stats[tag + "ratio"] = row.ratio;
    res.stats[tag + "max_v"] = row.max_v;
    res.stats[tag + "delta_f"] = row.delta_f;
    res.stats[tag + "max_v_over_R23"] = row.max_v_over_R23;
    res.stats[tag + "disk_bound"] = row.disk_bound;
    res.stats[tag + "cells_inside"] = row.cells_inside;
    if (ctx.detail) {
      PointRecord rec;
      rec.point = {row.R};
      rec.status = "ok";
      rec.values = {{"R", row.R}, {"V", row.volume}, {"V_half", row.volume_half}, {"max_v", row.max_v}};
      rec.residuals = {{"volume_bound", (row.volume - row.disk_bound) / row.disk_bound}};
      rec.pass = row.volume <= row.disk_bound * (1.0 + bound.tol);
      res.details.push_back(std::move(rec));
    }
  }
  res.points = static_cast<int>(table.rows.size());
  if (table.exponent) res.stats["exponent"] = *table.exponent;
  if (table.max_v_exponent) res.stats["max_v_exponent"] = *table.max_v_exponent;
  res.stats["monotone"] = table.monotone;
  res.stats["volume_bound"] = table.volume_bound;
  res.stats["max_v_o_R23"] = table.max_v_o_R23;
  res.stats["max_v_increasing_vs_R23"] = table.max_v_increasing_vs_R23;
  res.stats["delta_f_sublinear"] = table.delta_f_sublinear;
  finalize(res);
  return res;
}

std::vector<double> probe_base_point(const CheckContext& ctx) {
  const auto n = static_cast<std::size_t>(ctx.immersion->dim());
  if (ctx.immersion->is_graph()) {
    bool inside = true;
    for (const auto& a : ctx.grid.axes) inside = inside && a.lo <= 0.0 && 0.0 <= a.hi;
    if (inside) return std::vector<double>(n, 0.0);
  }
  return ctx.grid.center();
}

CheckResult probe_check(const CheckDef& d, Resolved r, const CheckContext& ctx, const Eigen::MatrixXd& ref) {
  const Immersion& imm = *ctx.immersion;
  const ProbeParams p = ctx.probe.resolved(imm.dim());
  const std::vector<double> base = probe_base_point(ctx);
  const ProbeRecord rec = estimate_probe(imm, ref, base, ctx.grid, p, ctx.jobs);
  if (!rec.applicable) return not_applicable(d.info.name, std::move(r.parts), rec.not_applicable);
  CheckResult res = grid_check(d.info.name, std::move(r.parts), ctx, subharmonic_fn(imm, ref, *p.s, *p.q, kDefaultRankTol));
  res.stats["t"] = p.t;
  res.stats["q"] = *p.q;
  res.stats["s"] = *p.s;
  res.stats["R"] = p.R;
  res.stats["R0"] = p.R0;
  res.stats["cells"] = p.cells;
  res.stats["cells_inside"] = rec.cells_inside;
  res.stats["ball_truncated"] = rec.ball_truncated;
  res.stats["es2_lhs"] = rec.es2_lhs;
  res.stats["es2_rhs"] = rec.es2_rhs;
  res.stats["C3"] = rec.C3;
  res.stats["es4_lhs"] = rec.es4_lhs;
  res.stats["volume"] = rec.volume;
  res.stats["volume_half"] = rec.volume_half;
  res.stats["max_v"] = rec.max_v;
  res.stats["C4"] = rec.C4;
  return res;
}

}  // namespace

const std::vector<CheckInfo>& check_catalogue() {
  static const std::vector<CheckInfo> infos = [] {
    std::vector<CheckInfo> v;
    for (const CheckDef& d : definitions()) v.push_back(d.info);
    return v;
  }();
  return infos;
}

const CheckInfo* find_check(std::string_view name) {
  for (const CheckInfo& info : check_catalogue())
    if (info.name == name) return &info;
  return nullptr;
}

CheckResult run_check(const CheckSpec& spec, const CheckContext& ctx) {
  if (!ctx.immersion) throw ConfigError("surface: no immersion supplied");
  const CheckDef& d = definition(spec.name);
  Resolved r = resolve(d, spec);
  const nlohmann::json params = spec.params.is_null() ? nlohmann::json::object() : spec.params;
  const Immersion& imm = *ctx.immersion;
  ctx.grid.validate();
  if (static_cast<int>(ctx.grid.axes.size()) != imm.dim())
    throw ConfigError("grid.ranges: expected " + std::to_string(imm.dim()) + " axes");
  const std::string& name = d.info.name;
  const double tol = spec.tol.value_or(d.info.default_tol);
  const bool graph2 = imm.is_graph() && imm.dim() == 2;

  if (name == "minimality") return grid_check(name, std::move(r.parts), ctx, minimality_fn(imm));
  if (name == "minimal_system") {
    if (!graph2) return not_applicable(name, std::move(r.parts), "needs a graph with n = 2");
    return grid_check(name, std::move(r.parts), ctx, minimal_system_fn(imm));
  }
  if (name == "jacobian_identities") {
    if (!graph2) return not_applicable(name, std::move(r.parts), "needs a graph with n = 2");
    return grid_check(name, std::move(r.parts), ctx, jacobian_fn(imm));
  }
  if (name == "isothermal") {
    const double a = number_param(params, "a", 0.0);
    const double b = number_param(params, "b", 1.0);
    if (!(b > 0.0)) throw ConfigError("b: must be positive");
    if (!graph2) return not_applicable(name, std::move(r.parts), "needs a graph with n = 2");
    CheckResult res = grid_check(name, std::move(r.parts), ctx, isothermal_fn(imm, a, b));
    res.stats["a"] = a;
    res.stats["b"] = b;
    return res;
  }
  if (name == "gauss_equation") {
    if (imm.dim() != 2) return not_applicable(name, std::move(r.parts), "needs n = 2");
    return grid_check(name, std::move(r.parts), ctx, gauss_equation_fn(imm));
  }
  if (name == "growth") return growth_check(d, std::move(r), spec, ctx);
  if (name == "codazzi") return grid_check(name, std::move(r.parts), ctx, codazzi_fn(imm));
  if (name == "frames") return grid_check(name, std::move(r.parts), ctx, frames_fn(imm, kDefaultRankTol));
  if (name == "simons") return grid_check(name, std::move(r.parts), ctx, simons_fn(imm, r.eq_tol));
  if (name == "kato") return grid_check(name, std::move(r.parts), ctx, kato_fn(imm, r.eq_tol, tol, kDefaultRankTol));
  if (name == "si2") return grid_check(name, std::move(r.parts), ctx, si2_fn(imm, kDefaultRankTol));
  if (name == "g_rank") {
    const double max_rank = number_param(params, "max_rank", 2.0);
    const double rank_tol = number_param(params, "rank_tol", kDefaultRankTol);
    if (max_rank < 0.0 || max_rank != std::floor(max_rank)) throw ConfigError("max_rank: expected a non-negative integer");
    if (!(rank_tol > 0.0)) throw ConfigError("rank_tol: must be positive");
    std::vector<PointOutcome> outcomes;
    CheckResult res = grid_check(name, std::move(r.parts), ctx, g_rank_fn(imm, static_cast<int>(max_rank), rank_tol), &outcomes);
    double sv3 = 0.0;
    for (const PointOutcome& o : outcomes)
      for (const auto& [key, value] : o.values)
        if (key == "sigma3") sv3 = std::max(sv3, value);
    if (imm.dim() >= 3) res.stats["sv3_max"] = sv3;
    return res;
  }
  if (name == "g_conformal") {
    std::vector<PointOutcome> outcomes;
    CheckResult res = grid_check(name, std::move(r.parts), ctx, g_conformal_fn(imm, r.eq_tol, kDefaultRankTol), &outcomes);
    // omega = 0 on the whole grid iff every point is G-conformal (isothermal n = 2 only)
    const double iso = res.stats["isothermal_points"];
    if (iso > 0 && iso == res.points) {
      const bool omega_all = res.stats["omega_zero_points"] == iso;
      const bool conformal_all = res.stats["conformal_points"] == res.points;
      CheckPart& corollary = res.parts[1];
      corollary.points = 1;
      corollary.worst = omega_all == conformal_all ? 0.0 : 1.0;
      finalize(res);
      if (res.errors > 0 && res.points == 0) res.verdict = Verdict::Fail;
    }
    return res;
  }

  const Eigen::MatrixXd ref = resolve_reference(ctx);
  if (name == "pluecker") return grid_check(name, std::move(r.parts), ctx, pluecker_fn(imm, ref));
  if (name == "w_formulas") return grid_check(name, std::move(r.parts), ctx, w_formulas_fn(imm, ref));
  if (name == "dlogw") return grid_check(name, std::move(r.parts), ctx, dlogw_fn(imm, ref));
  if (name == "subharmonic") {
    const double s = number_param(params, "s", 1.0);
    const double q = number_param(params, "q", 1.0);
    if (s < 1.0) throw ConfigError("s: must satisfy s >= 1");
    if (q < 1.0) throw ConfigError("q: must satisfy q >= 1");
    CheckResult res = grid_check(name, std::move(r.parts), ctx, subharmonic_fn(imm, ref, s, q, kDefaultRankTol));
    res.stats["s"] = s;
    res.stats["q"] = q;
    return res;
  }
  if (name == "probe") return probe_check(d, std::move(r), ctx, ref);
  throw ConfigError("name: unknown check '" + name + "'");
}

// ---- reports ----------------------------------------------------------------------------------

SimonsReport simons_report_at(const Immersion& imm, std::span<const double> point, double rank_tol) {
  const PointGeometry pg = point_geometry_at(imm, point);
  const FieldJets fj = field_jets(imm, point, 2, nullptr);
  SimonsReport s;
  s.normB2 = pg.normB2;
  s.nablaB2 = pg.nablaB2;
  s.lapB2 = laplace_beltrami(pg, fj.normB2);
  s.inner_term_numeric = 0.5 * (s.lapB2 - 2.0 * s.nablaB2);
  std::vector<Eigen::MatrixXd> A;
  for (int al = 0; al < pg.m; ++al) A.push_back(pg.shape_operator(al));
  for (const auto& Aa : A)
    for (const auto& Ab : A) {
      const double tr = (Aa * Ab).trace();
      s.tilde_term += tr * tr;
      const Eigen::MatrixXd C = Aa * Ab - Ab * Aa;
      s.under_term -= (C * C).trace();
    }
  if (pg.n >= 2) {
    try {
      const CanonicalFrame cf = canonical_frame_at(pg, rank_tol);
      s.mu1 = cf.mu1;
      s.mu2 = cf.mu2;
      const double m1 = cf.mu1 * cf.mu1;
      const double m2 = cf.mu2 * cf.mu2;
      s.inner_term_formula = -(4.0 * m1 * m1 + 4.0 * m2 * m2 + 16.0 * m1 * m2);
    } catch (const HypothesisError&) {
    }
  }
  if (std::sqrt(pg.normB2) > rank_tol) s.ratio = -s.inner_term_numeric / (pg.normB2 * pg.normB2);
  return s;
}

KatoReport kato_report_at(const Immersion& imm, std::span<const double> point) {
  const PointGeometry pg = point_geometry_at(imm, point);
  KatoReport k;
  k.normB2 = pg.normB2;
  k.nablaB2 = pg.nablaB2;
  if (pg.normB2 > 0.0) {
    const FieldJets fj = field_jets(imm, point, 1, nullptr);
    // |nabla |B||^2 = |nabla |B|^2|^2 / (4 |B|^2)
    k.grad_normB2 = gradient_norm2(pg, fj.normB2) / (4.0 * pg.normB2);
    k.gap = k.nablaB2 - 2.0 * *k.grad_normB2;
  }
  if (pg.n == 2) {
    const ComplexPack cp = complex_pack_at(pg);
    k.zeta = cp.zeta;
    k.zeta_residual = cp.zeta_residual;
    k.xi1 = cp.xi1;
    k.xi2 = cp.xi2;
  }
  return k;
}

// ---- wrappers -----------------------------------------------------------------------------

namespace {

CheckResult run_wrapped(const char* name, const Immersion& imm, const GridSpec& grid, const CheckOptions& opts,
                        const Eigen::MatrixXd* ref = nullptr, nlohmann::json params = nlohmann::json::object()) {
  CheckSpec spec;
  spec.name = name;
  spec.tol = opts.tol;
  spec.equality_tol = opts.equality_tol;
  spec.params = std::move(params);
  CheckContext ctx;
  ctx.immersion = &imm;
  ctx.grid = grid;
  if (ref) ctx.reference_frame = *ref;
  ctx.jobs = opts.jobs;
  ctx.detail = opts.detail;
  return run_check(spec, ctx);
}

void require_graph2(const Immersion& imm, const char* what) {
  if (!imm.is_graph() || imm.dim() != 2) throw HypothesisError(std::string(what) + " needs a graph with n = 2");
}

}  // namespace

CheckResult check_minimality(const Immersion& imm, const GridSpec& grid, const CheckOptions& opts) {
  return run_wrapped("minimality", imm, grid, opts);
}

CheckResult check_minimal_system(const Immersion& graph, const GridSpec& grid, const CheckOptions& opts) {
  require_graph2(graph, "minimal surface system");
  return run_wrapped("minimal_system", graph, grid, opts);
}

CheckResult check_pluecker(const Immersion& imm, const GridSpec& grid, const Eigen::MatrixXd& reference_frame,
                           const CheckOptions& opts) {
  return run_wrapped("pluecker", imm, grid, opts, &reference_frame);
}

CheckResult check_w_formulas(const Immersion& imm, const GridSpec& grid, const Eigen::MatrixXd& reference_frame,
                             const CheckOptions& opts) {
  return run_wrapped("w_formulas", imm, grid, opts, &reference_frame);
}

CheckResult check_dlogw(const Immersion& imm, const GridSpec& grid, const Eigen::MatrixXd& reference_frame,
                        const CheckOptions& opts) {
  return run_wrapped("dlogw", imm, grid, opts, &reference_frame);
}

CheckResult check_si2(const Immersion& imm, const GridSpec& grid, const CheckOptions& opts) {
  return run_wrapped("si2", imm, grid, opts);
}

CheckResult check_g_conformal(const Immersion& imm, const GridSpec& grid, const CheckOptions& opts) {
  return run_wrapped("g_conformal", imm, grid, opts);
}

CheckResult check_jacobian_identities(const Immersion& graph, const GridSpec& grid, const CheckOptions& opts) {
  require_graph2(graph, "Jacobian identities");
  return run_wrapped("jacobian_identities", graph, grid, opts);
}

CheckResult verify_isothermal(const Immersion& graph, double a, double b, const GridSpec& grid, const CheckOptions& opts) {
  if (!(b > 0.0)) throw ConfigError("b: must be positive");
  require_graph2(graph, "isothermal parameters");
  return run_wrapped("isothermal", graph, grid, opts, nullptr, {{"a", a}, {"b", b}});
}

SimonsCheck check_simons(const Immersion& imm, const GridSpec& grid, const CheckOptions& opts) {
  SimonsCheck out;
  out.result = run_wrapped("simons", imm, grid, opts);
  const std::vector<std::vector<double>> points = grid.points();
  const std::function<std::optional<SimonsReport>(std::size_t)> fn = [&](std::size_t k) -> std::optional<SimonsReport> {
    try {
      return simons_report_at(imm, points[k]);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  out.reports = parallel_map<std::optional<SimonsReport>>(points.size(), opts.jobs, fn);
  return out;
}

KatoCheck check_kato(const Immersion& imm, const GridSpec& grid, const CheckOptions& opts) {
  KatoCheck out;
  out.result = run_wrapped("kato", imm, grid, opts);
  const std::vector<std::vector<double>> points = grid.points();
  const std::function<std::optional<KatoReport>(std::size_t)> fn = [&](std::size_t k) -> std::optional<KatoReport> {
    try {
      return kato_report_at(imm, points[k]);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  out.reports = parallel_map<std::optional<KatoReport>>(points.size(), opts.jobs, fn);
  return out;
}

}  // namespace mincurv
