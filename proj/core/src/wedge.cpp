#include <cmath>
#include <utility>

#include "mincurv/error.hpp"
#include "mincurv/geometry.hpp"

namespace mincurv {

void validate_reference_frame(const Eigen::MatrixXd& frame, int n, int ambient) {
  if (frame.rows() != n || frame.cols() != ambient)
    throw ShapeError("reference frame must be " + std::to_string(n) + " x " + std::to_string(ambient));
  const double err = (frame * frame.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(err <= 1e-10)) throw ShapeError("reference frame rows are not orthonormal");
}

Eigen::MatrixXd default_reference_frame(const Immersion& imm, std::span<const double> base_point) {
  if (imm.is_graph()) return Eigen::MatrixXd::Identity(imm.dim(), imm.ambient_dim());
  return point_geometry_at(imm, base_point).tangent_frame;
}

double replaced_pairing(const Eigen::MatrixXd& tangent, const Eigen::MatrixXd& reference,
                        std::span<const std::pair<int, Eigen::VectorXd>> replacements) {
  Eigen::MatrixXd rows = tangent;
  for (const auto& [row, vec] : replacements) rows.row(row) = vec.transpose();
  return (rows * reference.transpose()).determinant();
}

namespace {

double pairing1(const Eigen::MatrixXd& tangent, const Eigen::MatrixXd& reference, int j, const Eigen::VectorXd& nu) {
  const std::pair<int, Eigen::VectorXd> r[] = {{j, nu}};
  return replaced_pairing(tangent, reference, r);
}

double pairing2(const Eigen::MatrixXd& tangent, const Eigen::MatrixXd& reference, int j, const Eigen::VectorXd& nu_a,
                int k, const Eigen::VectorXd& nu_b) {
  const std::pair<int, Eigen::VectorXd> r[] = {{j, nu_a}, {k, nu_b}};
  return replaced_pairing(tangent, reference, r);
}

}  // namespace

WedgePack w_pack_at(const Immersion& imm, const PointGeometry& pg, const Eigen::MatrixXd& reference_frame,
                    const WedgeOptions& options) {
  const int n = pg.n;
  const int m = pg.m;
  validate_reference_frame(reference_frame, n, pg.ambient());
  WedgePack wp;
  wp.reference_frame = reference_frame;

  const FieldJets fj = field_jets(imm, pg.point, 2, &reference_frame);
  const Jet& wj = fj.w;
  wp.w = wj.value();
  wp.w_frames = (pg.tangent_frame * reference_frame.transpose()).determinant();
  Eigen::VectorXd dw(n);
  for (int k = 0; k < n; ++k) dw(k) = wj.gradient(k);
  wp.grad_w_frame = pg.frame_coeffs * dw;
  wp.grad_w_norm2 = gradient_norm2(pg, wj);
  wp.lap_w_numeric = laplace_beltrami(pg, wj);

  const Eigen::MatrixXd& T = pg.tangent_frame;
  wp.pairings1.resize(n, m);
  for (int b = 0; b < n; ++b)
    for (int alpha = 0; alpha < m; ++alpha)
      wp.pairings1(b, alpha) = pairing1(T, reference_frame, b, pg.normal_frame.row(alpha).transpose());

  wp.grad_w_formula = Eigen::VectorXd::Zero(n);
  for (int a = 0; a < n; ++a)
    for (int alpha = 0; alpha < m; ++alpha)
      for (int b = 0; b < n; ++b) wp.grad_w_formula(a) += pg.h_at(alpha, a, b) * wp.pairings1(b, alpha);

  const auto un = static_cast<std::size_t>(n);
  const auto um = static_cast<std::size_t>(m);
  wp.pairings2.assign(un * um * un * um, 0.0);
  auto p2 = [&](int j, int alpha, int k, int beta) -> double& {
    return wp.pairings2[static_cast<std::size_t>(((j * m + alpha) * n + k) * m + beta)];
  };
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      for (int alpha = 0; alpha < m; ++alpha)
        for (int beta = 0; beta < m; ++beta) {
          if (alpha == beta) continue;
          p2(j, alpha, k, beta) = pairing2(T, reference_frame, j, pg.normal_frame.row(alpha).transpose(), k,
                                           pg.normal_frame.row(beta).transpose());
        }
    }
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (j == k) continue;
        for (int alpha = 0; alpha < m; ++alpha)
          for (int beta = 0; beta < m; ++beta)
            if (alpha != beta) sum += pg.h_at(alpha, i, j) * pg.h_at(beta, i, k) * p2(j, alpha, k, beta);
      }
  wp.lap_w_general = -pg.normB2 * wp.w + sum;

  if (n < 2) {
    wp.not_applicable = "n < 2";
    return wp;
  }
  const double normB = std::sqrt(pg.normB2);
  if (pg.mean_curvature.norm() > options.minimal_tol * std::max(1.0, normB)) {
    wp.not_applicable = "not minimal";
    return wp;
  }
  CanonicalFrame cf;
  try {
    cf = canonical_frame_at(pg, options.rank_tol);
  } catch (const HypothesisError& e) {
    wp.not_applicable = e.what();
    return wp;
  }
  wp.mu1 = cf.mu1;
  wp.mu2 = cf.mu2;
  const Eigen::MatrixXd& C = cf.tangent_frame;
  CanonicalPairings cp;
  cp.e11 = pairing1(C, reference_frame, 0, cf.nu1);
  cp.e21 = pairing1(C, reference_frame, 1, cf.nu1);
  if (m >= 2) {
    cp.e12 = pairing1(C, reference_frame, 0, cf.nu2);
    cp.e22 = pairing1(C, reference_frame, 1, cf.nu2);
    cp.e11_22 = pairing2(C, reference_frame, 0, cf.nu1, 1, cf.nu2);
  }
  wp.canonical = cp;
  const double mu1 = cf.mu1;
  const double mu2 = cf.mu2;
  const double wc = (C * reference_frame.transpose()).determinant();
  wp.lap_w_formula = -pg.normB2 * wp.w + 4.0 * mu1 * mu2 * cp.e11_22;
  const double g1 = mu1 * cp.e11 + mu2 * cp.e22;
  const double g2 = -mu1 * cp.e21 + mu2 * cp.e12;
  wp.grad_w_norm2_formula = g1 * g1 + g2 * g2;
  wp.pluecker = wc * cp.e11_22 - cp.e11 * cp.e22 + cp.e12 * cp.e21;
  if (wp.w > 0.0) {
    const double t1 = mu1 * cp.e11 - mu2 * cp.e22;
    const double t2 = mu1 * cp.e21 + mu2 * cp.e12;
    wp.lap_logw_formula = -pg.normB2 - (t1 * t1 + t2 * t2) / (wp.w * wp.w);
  }
  return wp;
}

WedgePack w_pack_at(const Immersion& imm, std::span<const double> point, const Eigen::MatrixXd& reference_frame,
                    const WedgeOptions& options) {
  return w_pack_at(imm, point_geometry_at(imm, point), reference_frame, options);
}

}  // namespace mincurv
