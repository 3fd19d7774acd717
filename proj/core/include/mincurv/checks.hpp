#pragma once

// Residual-producing checks over sample grids.
//
// Every check evaluates independent per-point outcomes and folds them in grid order, so
// results do not depend on the number of worker threads. Residuals of inequality parts are
// signed (positive = violation); identity parts are non-negative. Relative residuals divide
// by max(1, |scale|).

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "mincurv/check_result.hpp"
#include "mincurv/geometry.hpp"
#include "mincurv/growth.hpp"
#include "mincurv/immersion.hpp"

namespace mincurv {

/// Static description of a check.
struct CheckInfo {
  std::string name;
  std::string description;
  double default_tol = 0.0;
  std::optional<double> default_equality_tol;
  std::vector<std::string> param_keys;  // accepted keys in CheckSpec::params
};

const std::vector<CheckInfo>& check_catalogue();
const CheckInfo* find_check(std::string_view name);

struct CheckSpec {
  std::string name;
  std::optional<double> tol;           // overrides every identity/inequality part
  std::optional<double> equality_tol;  // overrides equality detectors
  nlohmann::json params = nlohmann::json::object();
};

struct CheckContext {
  const Immersion* immersion = nullptr;
  GridSpec grid;
  Eigen::MatrixXd reference_frame;  // empty = default_reference_frame at the grid center
  ProbeParams probe;
  int jobs = 1;
  bool detail = false;
};

/// Throws ConfigError for unknown names, non-positive tolerances or unknown params.
CheckResult run_check(const CheckSpec& spec, const CheckContext& context);

// ---- per-point reports -----------------------------------------------------------------------

struct SimonsReport {
  double lapB2 = 0.0;
  double nablaB2 = 0.0;
  double normB2 = 0.0;
  double inner_term_numeric = 0.0;  // (Delta|B|^2 - 2|nabla B|^2) / 2
  std::optional<double> inner_term_formula;  // -(4 mu1^4 + 4 mu2^4 + 16 mu1^2 mu2^2), G-rank <= 2
  std::optional<double> ratio;               // -inner_term_numeric / |B|^4, |B| > 0
  double tilde_term = 0.0;  // sum_{alpha,beta} tr(A^alpha A^beta)^2
  double under_term = 0.0;  // -sum_{alpha,beta} tr([A^alpha, A^beta]^2)
  std::optional<double> mu1;
  std::optional<double> mu2;
};

/// Needs order-4 jets of F. Throws on evaluation errors only.
SimonsReport simons_report_at(const Immersion& imm, std::span<const double> point, double rank_tol = kDefaultRankTol);

struct KatoReport {
  double nablaB2 = 0.0;
  double normB2 = 0.0;
  std::optional<double> grad_normB2;  // |nabla |B||^2, needs |B| > 0
  std::optional<double> gap;          // |nabla B|^2 - 2 |nabla |B||^2
  std::optional<std::complex<double>> zeta;
  std::optional<double> zeta_residual;
  double xi1 = 0.0;
  double xi2 = 0.0;
};

KatoReport kato_report_at(const Immersion& imm, std::span<const double> point);

// ---- convenience wrappers --------------------------------------------------------------------

struct CheckOptions {
  std::optional<double> tol;
  std::optional<double> equality_tol;
  int jobs = 1;
  bool detail = false;
};

CheckResult check_minimality(const Immersion& imm, const GridSpec& grid, const CheckOptions& opts = {});
CheckResult check_minimal_system(const Immersion& graph, const GridSpec& grid, const CheckOptions& opts = {});
CheckResult check_pluecker(const Immersion& imm, const GridSpec& grid, const Eigen::MatrixXd& reference_frame,
                           const CheckOptions& opts = {});
CheckResult check_w_formulas(const Immersion& imm, const GridSpec& grid, const Eigen::MatrixXd& reference_frame,
                             const CheckOptions& opts = {});
CheckResult check_dlogw(const Immersion& imm, const GridSpec& grid, const Eigen::MatrixXd& reference_frame,
                        const CheckOptions& opts = {});
CheckResult check_si2(const Immersion& imm, const GridSpec& grid, const CheckOptions& opts = {});
CheckResult check_g_conformal(const Immersion& imm, const GridSpec& grid, const CheckOptions& opts = {});
CheckResult check_jacobian_identities(const Immersion& graph, const GridSpec& grid, const CheckOptions& opts = {});
/// Throws ConfigError unless b > 0.
CheckResult verify_isothermal(const Immersion& graph, double a, double b, const GridSpec& grid,
                              const CheckOptions& opts = {});

struct SimonsCheck {
  CheckResult result;
  std::vector<std::optional<SimonsReport>> reports;  // grid order; empty where evaluation failed
};
SimonsCheck check_simons(const Immersion& imm, const GridSpec& grid, const CheckOptions& opts = {});

struct KatoCheck {
  CheckResult result;
  std::vector<std::optional<KatoReport>> reports;
};
KatoCheck check_kato(const Immersion& imm, const GridSpec& grid, const CheckOptions& opts = {});

}  // namespace mincurv
