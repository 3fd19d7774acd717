#pragma once

// Extrinsic-ball volume growth of graphs and quadrature probes of the curvature estimates.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mincurv/immersion.hpp"

namespace mincurv {

struct GrowthRow {
  double R = 0.0;
  double volume = 0.0;       // V(R) = integral of v over Omega_R
  double volume_half = 0.0;  // V(R / 2)
  double ratio = 0.0;        // V(R) / V(R / 2)
  double max_v = 0.0;
  double delta_f = 0.0;      // slope of f; equals max_v for graphs
  double max_v_over_R23 = 0.0;
  double disk_bound = 0.0;   // max_v * vol(D^n(R))
  int cells_inside = 0;
};

struct GrowthTable {
  std::vector<GrowthRow> rows;
  std::optional<double> exponent;        // least-squares slope of log V against log R
  std::optional<double> max_v_exponent;  // same for max_v
  // Both flags allow 1% relative quadrature slack.
  bool monotone = true;                  // V nondecreasing in R
  bool volume_bound = true;              // V(R) <= max_v * vol(D^n(R)) at every R
  bool max_v_o_R23 = false;              // max_v / R^(2/3) strictly decreasing along the radii
  bool max_v_increasing_vs_R23 = false;  // max_v / R^(2/3) strictly increasing
  bool delta_f_sublinear = false;        // fitted max_v exponent < 1
};

struct GrowthOptions {
  int cells = 0;  // fine cells per axis; 0 = 256 for n = 2, 48 for n = 3
  int jobs = 1;
};

/// Midpoint quadrature over Omega_R = {x : |x|^2 + |f(x) - f(0)|^2 <= R^2} for each radius.
/// Throws ConfigError on non-increasing radii and HypothesisError for non-graphs or when
/// fewer than 8 cells fall inside Omega_R.
GrowthTable growth_table(const Immersion& graph, std::span<const double> radii, const GrowthOptions& options = {});

struct ProbeParams {
  double t = 3.0;
  std::optional<double> q;  // default 3t/2
  std::optional<double> s;  // default (t - 1)/2
  double R = 1.0;
  double R0 = 0.5;
  int cells = 0;            // per axis; 0 = 128 for n = 2, 24 for n = 3

  /// Fills defaults and enforces t >= 3, q > (3t - 3)/2, s >= 1, 0 <= R0 < R.
  /// Throws ConfigError with a "probe.<field>" path.
  ProbeParams resolved(int n) const;
};

struct ProbeRecord {
  ProbeParams params;
  std::vector<double> base_point;
  bool applicable = false;
  std::string not_applicable;
  bool ball_truncated = false;  // D_R reaches the edge of the sampled parameter box
  int cells_inside = 0;
  // integral estimate: || |B|^2 v^(2q/t) ||_{L^t(D_R0)} and || v^(2q/t) ||_{L^t(D_R)}
  double es2_lhs = 0.0;
  double es2_rhs = 0.0;
  double C3 = 0.0;
  // mean value estimate: (|B|^2 v^3)(p0), V(R), V(R/2), max over D_R of v
  double es4_lhs = 0.0;
  double volume = 0.0;
  double volume_half = 0.0;
  double max_v = 0.0;
  double C4 = 0.0;
};

/// Quadrature over the parameter box of `domain` restricted to extrinsic balls around F(base_point).
ProbeRecord estimate_probe(const Immersion& imm, const Eigen::MatrixXd& reference_frame,
                           std::span<const double> base_point, const GridSpec& domain, const ProbeParams& params,
                           int jobs = 1);

struct SubharmonicValue {
  double laplacian = 0.0;  // Delta(|B|^(2s) v^q)
  double bound = 0.0;      // (q - 3s) |B|^(2s+2) v^q
  double residual = 0.0;   // bound - laplacian; positive = violation
};

/// Throws SingularInputError where w <= 0 or where a non-integer power of |B|^2 = 0 is needed.
SubharmonicValue subharmonic_at(const Immersion& imm, std::span<const double> point,
                                const Eigen::MatrixXd& reference_frame, double s, double q);

}  // namespace mincurv
