#pragma once

// Per-point extrinsic geometry of an immersion.
//
// Index conventions: i, j, k are coordinate indices; a, b, c index the orthonormal tangent
// frame e_a; alpha indexes the orthonormal normal frame nu_alpha. h(alpha, a, b) is
// <B(e_a, e_b), nu_alpha> and h3(alpha, a, b, c) is <(nabla_{e_c} B)(e_a, e_b), nu_alpha>.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mincurv/immersion.hpp"
#include "mincurv/jet.hpp"

namespace mincurv {

inline constexpr double kDefaultRankTol = 1e-8;

struct PointGeometry {
  std::vector<double> point;
  int n = 0;
  int m = 0;

  std::vector<Jet> metric_jets;  // g_ij as order-2 jets, row-major
  Eigen::MatrixXd dF;            // ambient x n, column i = dF/du^i
  std::vector<Eigen::VectorXd> d2F;  // [i*n+j]
  Eigen::MatrixXd g;
  Eigen::MatrixXd g_inv;
  std::vector<double> christoffel;   // Gamma^k_ij at [(k*n+i)*n+j]

  Eigen::MatrixXd frame_coeffs;   // e_a = sum_i frame_coeffs(a, i) dF/du^i
  Eigen::MatrixXd tangent_frame;  // n x ambient, rows e_a
  Eigen::MatrixXd normal_frame;   // m x ambient, rows nu_alpha

  std::vector<Eigen::VectorXd> second_form;        // B(d_i, d_j) at [i*n+j]
  std::vector<Eigen::VectorXd> nabla_second_form;  // (nabla_k B)(d_i, d_j) at [(i*n+j)*n+k]
  std::vector<double> h;
  std::vector<double> h3;
  Eigen::VectorXd mean_curvature;
  double normB2 = 0.0;
  double nablaB2 = 0.0;

  int ambient() const noexcept { return n + m; }
  double gamma(int k, int i, int j) const { return christoffel[static_cast<std::size_t>((k * n + i) * n + j)]; }
  double h_at(int alpha, int a, int b) const { return h[static_cast<std::size_t>((alpha * n + a) * n + b)]; }
  double h3_at(int alpha, int a, int b, int c) const {
    return h3[static_cast<std::size_t>(((alpha * n + a) * n + b) * n + c)];
  }
  /// Shape operator A^alpha in the tangent frame.
  Eigen::MatrixXd shape_operator(int alpha) const;
  double det_g() const { return g.determinant(); }
};

/// Throws ImmersionRankError when det g is not safely positive, SingularInputError on
/// expression domain errors.
PointGeometry point_geometry_at(const Immersion& imm, std::span<const double> point);

struct GaussRank {
  int rank = 0;
  std::vector<double> singular_values;  // descending, length n
};

/// Numerical rank of the n x (n m) matrix a -> (h_{alpha, ab}).
GaussRank gauss_rank_at(const PointGeometry& pg, double tol = kDefaultRankTol);

struct CanonicalFrame {
  std::vector<Eigen::VectorXd> kernel_basis;  // n - 2 ambient vectors
  Eigen::VectorXd e1;
  Eigen::VectorXd e2;
  Eigen::VectorXd nu1;
  Eigen::VectorXd nu2;                        // empty when m = 1
  Eigen::MatrixXd tangent_frame;              // rows e1, e2, kernel
  Eigen::MatrixXd normal_frame;               // rows nu1, nu2, rest
  double mu1 = 0.0;
  double mu2 = 0.0;
  double theta = 0.0;
  Eigen::Matrix2d shape1 = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d shape2 = Eigen::Matrix2d::Zero();
  /// Largest deviation of all h in the rotated frames from the normal form.
  double residual = 0.0;
  std::vector<double> h;  // h in the rotated frames, same layout as PointGeometry::h
};

/// Requires n >= 2 and G-rank <= 2; throws HypothesisError otherwise.
CanonicalFrame canonical_frame_at(const PointGeometry& pg, double tol = kDefaultRankTol);

struct CurvaturePack {
  double K_intrinsic = 0.0;
  double K_extrinsic = 0.0;
  std::optional<double> conformal_factor;  // g_11 when |g_11 - g_22| and |g_12| are small
};

/// n = 2 only.
CurvaturePack curvature_pack_at(const Immersion& imm, std::span<const double> point, double iso_tol = 1e-10);
CurvaturePack curvature_pack_at(const PointGeometry& pg, double iso_tol = 1e-10);

// ---- scalar fields -----------------------------------------------------------------------

enum class Field { W, LogW, V, NormB2, NormB };

std::string_view to_string(Field f) noexcept;
std::optional<Field> field_from_string(std::string_view name) noexcept;

struct FieldJets {
  Jet w;       // empty (dim 1, order 0) when no reference frame was supplied
  Jet normB2;
  double volume_element = 0.0;  // sqrt(det g) at the point
};

/// w and |B|^2 as jets of the given order (<= 2). w uses det(<dF_j, a_k>) / sqrt(det g).
FieldJets field_jets(const Immersion& imm, std::span<const double> point, int order,
                     const Eigen::MatrixXd* reference_frame);

/// W, LogW and V need `reference_frame` (n x ambient, orthonormal rows).
Jet scalar_field_jet(const Immersion& imm, std::span<const double> point, Field field, int order,
                     const Eigen::MatrixXd* reference_frame = nullptr);

/// g^{ij} (d_i d_j phi - Gamma^k_ij d_k phi) at the expansion point of `phi` (order >= 2).
double laplace_beltrami(const PointGeometry& pg, const Jet& phi);
double laplace_beltrami(const Immersion& imm, std::span<const double> point, Field field,
                        const Eigen::MatrixXd* reference_frame = nullptr);
/// g^{ij} d_i phi d_j phi.
double gradient_norm2(const PointGeometry& pg, const Jet& phi);

// ---- w-function ----------------------------------------------------------------------------

/// Throws ShapeError unless `frame` is n x ambient with orthonormal rows.
void validate_reference_frame(const Eigen::MatrixXd& frame, int n, int ambient);

/// Coordinate n-plane for graphs, otherwise the tangent plane at `base_point`.
Eigen::MatrixXd default_reference_frame(const Immersion& imm, std::span<const double> base_point);

/// <e_1 ^ ... ^ e_n, a_1 ^ ... ^ a_n> with rows of `tangent` replaced by the listed normals.
double replaced_pairing(const Eigen::MatrixXd& tangent, const Eigen::MatrixXd& reference,
                        std::span<const std::pair<int, Eigen::VectorXd>> replacements);

struct CanonicalPairings {
  double e11 = 0.0;  // <e_{11}, A> with e_{j alpha}: e_j replaced by nu_alpha
  double e12 = 0.0;
  double e21 = 0.0;
  double e22 = 0.0;
  double e11_22 = 0.0;
};

struct WedgePack {
  Eigen::MatrixXd reference_frame;
  double w = 0.0;                 // frame-free determinant formula
  double w_frames = 0.0;          // det(<e_a, a_k>) from explicit frames
  Eigen::VectorXd grad_w_frame;   // nabla_{e_a} w from the w jet
  Eigen::VectorXd grad_w_formula; // sum h_{alpha, ab} <e_{b alpha}, A>
  double grad_w_norm2 = 0.0;
  double lap_w_numeric = 0.0;
  double lap_w_general = 0.0;     // -|B|^2 w + sum h h <e_{j alpha, k beta}, A>; minimal only
  Eigen::MatrixXd pairings1;      // (b, alpha) -> <e_{b alpha}, A> in the tangent/normal frames
  std::vector<double> pairings2;  // ((j*m+alpha)*n+k)*m+beta -> <e_{j alpha, k beta}, A>

  // Filled only when minimal and G-rank <= 2; otherwise `not_applicable` explains why.
  std::optional<CanonicalPairings> canonical;
  std::optional<double> lap_w_formula;      // -|B|^2 w + 4 mu1 mu2 <e_{11,22}, A>
  std::optional<double> grad_w_norm2_formula;
  std::optional<double> pluecker;           // w <e_{11,22}> - <e_11><e_22> + <e_12><e_21>
  std::optional<double> lap_logw_formula;   // needs w > 0
  double mu1 = 0.0;
  double mu2 = 0.0;
  std::string not_applicable;
};

struct WedgeOptions {
  double rank_tol = kDefaultRankTol;
  double minimal_tol = 1e-7;  // relative to max(1, |B|)
};

WedgePack w_pack_at(const Immersion& imm, std::span<const double> point, const Eigen::MatrixXd& reference_frame,
                    const WedgeOptions& options = {});
WedgePack w_pack_at(const Immersion& imm, const PointGeometry& pg, const Eigen::MatrixXd& reference_frame,
                    const WedgeOptions& options = {});

// ---- complex pack (surfaces) ------------------------------------------------------------

struct ComplexPack {
  Eigen::VectorXcd Fw;
  Eigen::VectorXcd Fww;
  double conformality_residual = 0.0;  // |<F_w, F_w>|
  bool isothermal = false;
  std::complex<double> omega_coeff;     // <F_ww, F_ww>
  Eigen::VectorXcd Bww;
  std::complex<double> Bww_square;      // <B_ww, B_ww>
  Eigen::VectorXcd nablaB_www;
  std::optional<std::complex<double>> zeta;
  std::optional<double> zeta_residual;
  double xi1 = 0.0;  // zeta = xi1 - i xi2
  double xi2 = 0.0;
};

/// n = 2 only; throws HypothesisError otherwise.
ComplexPack complex_pack_at(const Immersion& imm, std::span<const double> point, double tol = 1e-10);
ComplexPack complex_pack_at(const PointGeometry& pg, double tol = 1e-10);

}  // namespace mincurv
