#include "mincurv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mincurv/error.hpp"
#include "surface_jets.hpp"

namespace mincurv {

namespace detail {

Jet dot(const JetVector& a, const JetVector& b) {
  Jet out = a[0] * b[0];
  for (std::size_t k = 1; k < a.size(); ++k) out += a[k] * b[k];
  return out;
}

Jet determinant(std::span<const Jet> m, int n) {
  switch (n) {
    case 1:
      return m[0];
    case 2:
      return m[0] * m[3] - m[1] * m[2];
    case 3:
      return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
             m[2] * (m[3] * m[7] - m[4] * m[6]);
    default:
      throw ShapeError("jet determinant supports n <= 3");
  }
}

std::vector<Jet> inverse(std::span<const Jet> m, int n, const Jet& det) {
  const Jet r = recip(det);
  switch (n) {
    case 1:
      return {r};
    case 2:
      return {m[3] * r, -m[1] * r, -m[2] * r, m[0] * r};
    case 3: {
      auto cof = [&](int a, int b, int c, int d) { return m[static_cast<std::size_t>(a)] * m[static_cast<std::size_t>(b)] -
                                                          m[static_cast<std::size_t>(c)] * m[static_cast<std::size_t>(d)]; };
      return {cof(4, 8, 5, 7) * r, cof(2, 7, 1, 8) * r, cof(1, 5, 2, 4) * r,
              cof(5, 6, 3, 8) * r, cof(0, 8, 2, 6) * r, cof(2, 3, 0, 5) * r,
              cof(3, 7, 4, 6) * r, cof(1, 6, 0, 7) * r, cof(0, 4, 1, 3) * r};
    }
    default:
      throw ShapeError("jet inverse supports n <= 3");
  }
}

void require_full_rank(std::span<const double> g, int n, std::span<const double> point) {
  Eigen::MatrixXd G(n, n);
  double diag = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) G(i, j) = g[static_cast<std::size_t>(i * n + j)];
    diag *= G(i, i);
  }
  // det g <= eps * prod g_ii (Hadamard bound) means dF is numerically rank deficient
  constexpr double kRankEps = 1e-12;
  const Eigen::LLT<Eigen::MatrixXd> llt(G);
  const bool ok = std::isfinite(diag) && diag > 0.0 && llt.info() == Eigen::Success &&
                  G.determinant() > kRankEps * diag;
  if (!ok) {
    std::ostringstream msg;
    msg << "immersion is not of full rank at (";
    for (std::size_t k = 0; k < point.size(); ++k) msg << (k ? ", " : "") << point[k];
    msg << "): det g = " << G.determinant();
    throw ImmersionRankError(msg.str());
  }
}

SurfaceJets surface_jets(const Immersion& imm, std::span<const double> point, int order) {
  if (order < 0 || order + 2 > kMaxJetOrder) throw ShapeError("field order must be in 0..2");
  SurfaceJets s;
  s.n = imm.dim();
  s.ambient = imm.ambient_dim();
  s.order = order;
  const int n = s.n;
  const auto un = static_cast<std::size_t>(n);
  const auto N = static_cast<std::size_t>(s.ambient);

  const std::vector<Jet> F = evaluate_immersion(imm, point, order + 2);
  s.Fi.assign(un, JetVector(N));
  for (int i = 0; i < n; ++i)
    for (std::size_t A = 0; A < N; ++A) s.Fi[static_cast<std::size_t>(i)][A] = F[A].partial(i);

  s.g_full.resize(un * un);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      s.g_full[static_cast<std::size_t>(i * n + j)] = dot(s.Fi[static_cast<std::size_t>(i)], s.Fi[static_cast<std::size_t>(j)]);
      s.g_full[static_cast<std::size_t>(j * n + i)] = s.g_full[static_cast<std::size_t>(i * n + j)];
    }
  std::vector<double> gv(un * un);
  for (std::size_t k = 0; k < gv.size(); ++k) gv[k] = s.g_full[k].value();
  require_full_rank(gv, n, point);

  std::vector<JetVector> Fi_t(un, JetVector(N));
  for (std::size_t i = 0; i < un; ++i)
    for (std::size_t A = 0; A < N; ++A) Fi_t[i][A] = s.Fi[i][A].truncated(order);
  s.g.resize(un * un);
  for (std::size_t k = 0; k < s.g.size(); ++k) s.g[k] = s.g_full[k].truncated(order);
  s.det_g = determinant(s.g, n);
  s.g_inv = inverse(s.g, n, s.det_g);

  s.Fij.assign(un * un, JetVector(N));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      auto& out = s.Fij[static_cast<std::size_t>(i * n + j)];
      for (std::size_t A = 0; A < N; ++A) out[A] = s.Fi[static_cast<std::size_t>(i)][A].partial(j);
      s.Fij[static_cast<std::size_t>(j * n + i)] = out;
    }

  // Gamma^k_ij = g^{kl} <F_ij, F_l>
  s.gamma.assign(un * un * un, Jet(n, order));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::vector<Jet> c(un);
      for (int l = 0; l < n; ++l) c[static_cast<std::size_t>(l)] = dot(s.Fij[static_cast<std::size_t>(i * n + j)], Fi_t[static_cast<std::size_t>(l)]);
      for (int k = 0; k < n; ++k) {
        Jet acc = s.g_inv[static_cast<std::size_t>(k * n)] * c[0];
        for (int l = 1; l < n; ++l) acc += s.g_inv[static_cast<std::size_t>(k * n + l)] * c[static_cast<std::size_t>(l)];
        s.gamma[static_cast<std::size_t>((k * n + i) * n + j)] = acc;
        s.gamma[static_cast<std::size_t>((k * n + j) * n + i)] = acc;
      }
    }

  s.B.assign(un * un, JetVector(N));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      auto& out = s.B[static_cast<std::size_t>(i * n + j)];
      for (std::size_t A = 0; A < N; ++A) {
        Jet acc = s.Fij[static_cast<std::size_t>(i * n + j)][A];
        for (int k = 0; k < n; ++k) acc -= s.gamma[static_cast<std::size_t>((k * n + i) * n + j)] * Fi_t[static_cast<std::size_t>(k)][A];
        out[A] = acc;
      }
      s.B[static_cast<std::size_t>(j * n + i)] = out;
    }
  return s;
}

}  // namespace detail

namespace {

Eigen::VectorXd values(const detail::JetVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t A = 0; A < v.size(); ++A) out(static_cast<Eigen::Index>(A)) = v[A].value();
  return out;
}

// Completes the orthonormal rows of `basis` with `count` more rows taken from the standard
// basis, always choosing the candidate with the largest residual (lowest index on ties).
Eigen::MatrixXd complete_basis(const Eigen::MatrixXd& basis, int count, int dim) {
  Eigen::MatrixXd rows(basis.rows() + count, dim);
  rows.topRows(basis.rows()) = basis;
  Eigen::Index filled = basis.rows();
  auto project_out = [&](Eigen::VectorXd& r) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index q = 0; q < filled; ++q) r -= rows.row(q).dot(r) * rows.row(q).transpose();
  };
  for (int added = 0; added < count; ++added) {
    std::vector<Eigen::VectorXd> residuals;
    double best = -1.0;
    for (int A = 0; A < dim; ++A) {
      Eigen::VectorXd r = Eigen::VectorXd::Unit(dim, A);
      project_out(r);
      best = std::max(best, r.norm());
      residuals.push_back(std::move(r));
    }
    int pick = 0;
    for (int A = 0; A < dim; ++A) {
      if (residuals[static_cast<std::size_t>(A)].norm() >= best * (1.0 - 1e-12)) {
        pick = A;
        break;
      }
    }
    Eigen::VectorXd r = residuals[static_cast<std::size_t>(pick)] / residuals[static_cast<std::size_t>(pick)].norm();
    project_out(r);
    rows.row(filled++) = r.normalized().transpose();
  }
  return rows;
}

}  // namespace

Eigen::MatrixXd PointGeometry::shape_operator(int alpha) const {
  Eigen::MatrixXd A(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) A(a, b) = h_at(alpha, a, b);
  return A;
}

PointGeometry point_geometry_at(const Immersion& imm, std::span<const double> point) {
  const detail::SurfaceJets s = detail::surface_jets(imm, point, 1);
  PointGeometry pg;
  pg.point.assign(point.begin(), point.end());
  pg.n = s.n;
  pg.m = s.ambient - s.n;
  const int n = pg.n;
  const int m = pg.m;
  const int N = s.ambient;
  const auto un = static_cast<std::size_t>(n);

  pg.metric_jets = s.g_full;
  pg.dF.resize(N, n);
  for (int i = 0; i < n; ++i) pg.dF.col(i) = values(s.F_i(i));
  pg.d2F.resize(un * un);
  for (std::size_t k = 0; k < un * un; ++k) pg.d2F[k] = values(s.Fij[k]);
  pg.g.resize(n, n);
  pg.g_inv.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      pg.g(i, j) = s.g[static_cast<std::size_t>(i * n + j)].value();
      pg.g_inv(i, j) = s.g_inv[static_cast<std::size_t>(i * n + j)].value();
    }
  pg.christoffel.resize(s.gamma.size());
  for (std::size_t k = 0; k < s.gamma.size(); ++k) pg.christoffel[k] = s.gamma[k].value();

  // Cholesky g = L L^T gives the oriented Gram-Schmidt frame e = L^{-1} dF^T.
  const Eigen::LLT<Eigen::MatrixXd> llt(pg.g);
  const Eigen::MatrixXd L = llt.matrixL();
  pg.frame_coeffs = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));
  pg.tangent_frame = pg.frame_coeffs * pg.dF.transpose();
  pg.normal_frame = complete_basis(pg.tangent_frame, m, N).bottomRows(m);

  pg.second_form.resize(un * un);
  for (std::size_t k = 0; k < un * un; ++k) pg.second_form[k] = values(s.B[k]);

  const Eigen::MatrixXd tangent_proj = pg.dF * pg.g_inv * pg.dF.transpose();
  pg.nabla_second_form.resize(un * un * un);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Eigen::VectorXd dB(N);
        for (int A = 0; A < N; ++A) dB(A) = s.B_ij(i, j)[static_cast<std::size_t>(A)].gradient(k);
        Eigen::VectorXd v = dB - tangent_proj * dB;
        for (int l = 0; l < n; ++l) {
          v -= pg.gamma(l, k, i) * pg.second_form[static_cast<std::size_t>(l * n + j)];
          v -= pg.gamma(l, k, j) * pg.second_form[static_cast<std::size_t>(i * n + l)];
        }
        pg.nabla_second_form[static_cast<std::size_t>((i * n + j) * n + k)] = std::move(v);
      }

  // normal components in coordinates, then contract with the frame coefficients
  const Eigen::MatrixXd& E = pg.frame_coeffs;
  std::vector<Eigen::VectorXd> Bn(un * un);
  for (std::size_t k = 0; k < un * un; ++k) Bn[k] = pg.normal_frame * pg.second_form[k];
  pg.h.assign(static_cast<std::size_t>(m) * un * un, 0.0);
  for (int alpha = 0; alpha < m; ++alpha)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) acc += E(a, i) * E(b, j) * Bn[static_cast<std::size_t>(i * n + j)](alpha);
        pg.h[static_cast<std::size_t>((alpha * n + a) * n + b)] = acc;
      }

  std::vector<Eigen::VectorXd> nBn(un * un * un);
  for (std::size_t k = 0; k < nBn.size(); ++k) nBn[k] = pg.normal_frame * pg.nabla_second_form[k];
  pg.h3.assign(static_cast<std::size_t>(m) * un * un * un, 0.0);
  for (int alpha = 0; alpha < m; ++alpha)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          double acc = 0.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k)
                acc += E(a, i) * E(b, j) * E(c, k) * nBn[static_cast<std::size_t>((i * n + j) * n + k)](alpha);
          pg.h3[static_cast<std::size_t>(((alpha * n + a) * n + b) * n + c)] = acc;
        }

  pg.mean_curvature = Eigen::VectorXd::Zero(N);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pg.mean_curvature += pg.g_inv(i, j) * pg.second_form[static_cast<std::size_t>(i * n + j)];
  pg.normB2 = 0.0;
  for (double x : pg.h) pg.normB2 += x * x;
  pg.nablaB2 = 0.0;
  for (double x : pg.h3) pg.nablaB2 += x * x;
  return pg;
}

namespace {

Eigen::MatrixXd gauss_matrix(const PointGeometry& pg) {
  Eigen::MatrixXd M(pg.n, pg.n * pg.m);
  for (int alpha = 0; alpha < pg.m; ++alpha)
    for (int a = 0; a < pg.n; ++a)
      for (int b = 0; b < pg.n; ++b) M(a, alpha * pg.n + b) = pg.h_at(alpha, a, b);
  return M;
}

// Singular values this small are treated as an exactly vanishing Gauss map differential.
constexpr double kZeroSingular = 1e-13;

int numerical_rank(const Eigen::VectorXd& sv, double tol) {
  const double top = sv.size() ? sv(0) : 0.0;
  const double cutoff = tol * (top > kZeroSingular ? top : 1.0);
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) rank += sv(k) > cutoff ? 1 : 0;
  return rank;
}

}  // namespace

GaussRank gauss_rank_at(const PointGeometry& pg, double tol) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(gauss_matrix(pg));
  const Eigen::VectorXd sv = svd.singularValues();
  GaussRank out;
  out.rank = numerical_rank(sv, tol);
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  return out;
}

CanonicalFrame canonical_frame_at(const PointGeometry& pg, double tol) {
  const int n = pg.n;
  const int m = pg.m;
  if (n < 2) throw HypothesisError("canonical frame needs n >= 2");
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(gauss_matrix(pg), Eigen::ComputeFullU);
  const int rank = numerical_rank(svd.singularValues(), tol);
  if (rank > 2) throw HypothesisError("G-rank " + std::to_string(rank) + " exceeds 2");

  // columns: basis of the non-null 2-plane, then the relative nullity, in e-coordinates
  Eigen::MatrixXd D = Eigen::MatrixXd::Identity(n, n);
  if (n > 2) {
    D = svd.matrixU();
    if (D.determinant() < 0) D.col(1) *= -1.0;
  }
  std::vector<Eigen::MatrixXd> A(static_cast<std::size_t>(m));
  for (int alpha = 0; alpha < m; ++alpha) A[static_cast<std::size_t>(alpha)] = pg.shape_operator(alpha);
  auto pair_vector = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    Eigen::VectorXd out(m);
    for (int alpha = 0; alpha < m; ++alpha) out(alpha) = x.dot(A[static_cast<std::size_t>(alpha)] * y);
    return out;
  };

  const Eigen::VectorXd d1 = D.col(0);
  const Eigen::VectorXd d2 = D.col(1);
  const Eigen::VectorXd b11 = pair_vector(d1, d1);
  const Eigen::VectorXd b12 = pair_vector(d1, d2);
  const double G11 = b11.squaredNorm();
  const double G12 = b11.dot(b12);
  const double G22 = b12.squaredNorm();
  // rotating the tangent pair by a rotates (B11, B12) by 2a; this angle maximizes |B_f1f1|
  double phi = 0.5 * std::atan2(2.0 * G12, G11 - G22);
  Eigen::VectorXd f1;
  Eigen::VectorXd f2;
  Eigen::VectorXd X;
  Eigen::VectorXd Y;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const double a = 0.5 * phi;
    f1 = std::cos(a) * d1 + std::sin(a) * d2;
    f2 = -std::sin(a) * d1 + std::cos(a) * d2;
    X = pair_vector(f1, f1);
    Y = pair_vector(f1, f2);
    if (Y.norm() <= X.norm()) break;
    phi += 0.5 * std::numbers::pi;
  }

  CanonicalFrame cf;
  cf.theta = phi;
  cf.mu1 = X.norm();
  cf.mu2 = Y.norm();

  Eigen::MatrixXd R(n, n);
  R.row(0) = f1.transpose();
  R.row(1) = f2.transpose();
  for (int k = 2; k < n; ++k) R.row(k) = D.col(k).transpose();

  const double zero = tol * std::max(1.0, std::sqrt(pg.normB2));
  Eigen::MatrixXd chosen(0, m);
  auto append = [&](const Eigen::VectorXd& v) {
    chosen.conservativeResize(chosen.rows() + 1, Eigen::NoChange);
    chosen.row(chosen.rows() - 1) = v.transpose();
  };
  if (cf.mu1 > zero) append(X / cf.mu1);
  if (m >= 2 && cf.mu2 > zero) {
    Eigen::VectorXd y = Y;
    if (chosen.rows() > 0) y -= chosen.row(0).dot(y) * chosen.row(0).transpose();
    if (y.norm() > zero) append(y.normalized());
  }
  const Eigen::MatrixXd Q = complete_basis(chosen, m - static_cast<int>(chosen.rows()), m);

  cf.tangent_frame = R * pg.tangent_frame;
  cf.normal_frame = Q * pg.normal_frame;
  cf.e1 = cf.tangent_frame.row(0).transpose();
  cf.e2 = cf.tangent_frame.row(1).transpose();
  for (int k = 2; k < n; ++k) cf.kernel_basis.push_back(cf.tangent_frame.row(k).transpose());
  cf.nu1 = cf.normal_frame.row(0).transpose();
  if (m >= 2) cf.nu2 = cf.normal_frame.row(1).transpose();

  cf.h.assign(pg.h.size(), 0.0);
  double residual = 0.0;
  for (int beta = 0; beta < m; ++beta) {
    Eigen::MatrixXd Ab = Eigen::MatrixXd::Zero(n, n);
    for (int alpha = 0; alpha < m; ++alpha) Ab += Q(beta, alpha) * A[static_cast<std::size_t>(alpha)];
    Ab = R * Ab * R.transpose();
    Eigen::MatrixXd target = Eigen::MatrixXd::Zero(n, n);
    if (beta == 0) {
      target(0, 0) = cf.mu1;
      target(1, 1) = -cf.mu1;
      cf.shape1 = Ab.topLeftCorner(2, 2);
    } else if (beta == 1) {
      target(0, 1) = cf.mu2;
      target(1, 0) = cf.mu2;
      cf.shape2 = Ab.topLeftCorner(2, 2);
    }
    residual = std::max(residual, (Ab - target).cwiseAbs().maxCoeff());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) cf.h[static_cast<std::size_t>((beta * n + a) * n + b)] = Ab(a, b);
  }
  cf.residual = residual;
  return cf;
}

CurvaturePack curvature_pack_at(const PointGeometry& pg, double iso_tol) {
  if (pg.n != 2) throw HypothesisError("curvature pack needs n = 2");
  CurvaturePack out;
  for (int alpha = 0; alpha < pg.m; ++alpha) {
    const double h11 = pg.h_at(alpha, 0, 0);
    const double h22 = pg.h_at(alpha, 1, 1);
    const double h12 = pg.h_at(alpha, 0, 1);
    out.K_extrinsic += h11 * h22 - h12 * h12;
  }
  // Brioschi formula
  const Jet& Ej = pg.metric_jets[0];
  const Jet& Fj = pg.metric_jets[1];
  const Jet& Gj = pg.metric_jets[3];
  const double E = Ej.value();
  const double F = Fj.value();
  const double G = Gj.value();
  const double Eu = Ej.gradient(0);
  const double Ev = Ej.gradient(1);
  const double Fu = Fj.gradient(0);
  const double Fv = Fj.gradient(1);
  const double Gu = Gj.gradient(0);
  const double Gv = Gj.gradient(1);
  const double Evv = Ej.hessian(1, 1);
  const double Fuv = Fj.hessian(0, 1);
  const double Guu = Gj.hessian(0, 0);
  Eigen::Matrix3d M1;
  M1 << -0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev,
        Fv - 0.5 * Gu, E, F,
        0.5 * Gv, F, G;
  Eigen::Matrix3d M2;
  M2 << 0.0, 0.5 * Ev, 0.5 * Gu,
        0.5 * Ev, E, F,
        0.5 * Gu, F, G;
  const double det = E * G - F * F;
  out.K_intrinsic = (M1.determinant() - M2.determinant()) / (det * det);
  if (std::abs(E - G) <= iso_tol * std::max(E, G) && std::abs(F) <= iso_tol * std::max(E, G)) out.conformal_factor = E;
  return out;
}

CurvaturePack curvature_pack_at(const Immersion& imm, std::span<const double> point, double iso_tol) {
  if (imm.dim() != 2) throw HypothesisError("curvature pack needs n = 2");
  return curvature_pack_at(point_geometry_at(imm, point), iso_tol);
}

}  // namespace mincurv
