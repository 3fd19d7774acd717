#include <cmath>

#include "mincurv/error.hpp"
#include "mincurv/geometry.hpp"

namespace mincurv {

namespace {

using cd = std::complex<double>;

cd bilinear(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return (a.array() * b.array()).sum(); }

}  // namespace

ComplexPack complex_pack_at(const PointGeometry& pg, double tol) {
  if (pg.n != 2) throw HypothesisError("complex pack needs n = 2");
  const cd I(0.0, 1.0);
  ComplexPack cp;
  cp.Fw = 0.5 * (pg.dF.col(0).cast<cd>() - I * pg.dF.col(1).cast<cd>());
  cp.Fww = 0.25 * (pg.d2F[0].cast<cd>() - pg.d2F[3].cast<cd>() - 2.0 * I * pg.d2F[1].cast<cd>());
  cp.conformality_residual = std::abs(bilinear(cp.Fw, cp.Fw));
  cp.isothermal = cp.conformality_residual <= tol * cp.Fw.squaredNorm();
  cp.omega_coeff = bilinear(cp.Fww, cp.Fww);

  const auto& B = pg.second_form;
  cp.Bww = 0.25 * (B[0].cast<cd>() - B[3].cast<cd>() - 2.0 * I * B[1].cast<cd>());
  cp.Bww_square = bilinear(cp.Bww, cp.Bww);

  // d/dw = (d_u - i d_v) / 2 in each slot
  const cd c[2] = {1.0, -I};
  cp.nablaB_www = Eigen::VectorXcd::Zero(pg.ambient());
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int k = 0; k < 2; ++k)
        cp.nablaB_www += (c[a] * c[b] * c[k] / 8.0) *
                         pg.nabla_second_form[static_cast<std::size_t>((a * 2 + b) * 2 + k)].cast<cd>();

  const double bww = cp.Bww.norm();
  if (bww > tol * std::max(1.0, std::sqrt(pg.normB2))) {
    // least squares in C^N: zeta = <X, conj Y> / |Y|^2
    const cd zeta = cp.Bww.dot(cp.nablaB_www) / (bww * bww);
    cp.zeta = zeta;
    cp.zeta_residual = (cp.nablaB_www - zeta * cp.Bww).norm();
    cp.xi1 = zeta.real();
    cp.xi2 = -zeta.imag();
  }
  return cp;
}

ComplexPack complex_pack_at(const Immersion& imm, std::span<const double> point, double tol) {
  if (imm.dim() != 2) throw HypothesisError("complex pack needs n = 2");
  return complex_pack_at(point_geometry_at(imm, point), tol);
}

}  // namespace mincurv
