#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "mincurv/catalogue.hpp"
#include "mincurv/error.hpp"
#include "mincurv/geometry.hpp"

namespace mincurv {
namespace {

TEST(ComplexPack, CatenoidOmega) {
  const Immersion imm = catalogue_lookup("catenoid");
  for (const std::vector<double>& p : {std::vector<double>{0.0, 0.0}, std::vector<double>{0.7, -1.2}}) {
    const ComplexPack cp = complex_pack_at(imm, p);
    EXPECT_TRUE(cp.isothermal);
    EXPECT_LE(cp.conformality_residual, 1e-14);
    // <F_ww, F_ww> = 1/4 for (cosh u cos v, cosh u sin v, u) with w = u + i v
    EXPECT_NEAR(cp.omega_coeff.real(), 0.25, 1e-13);
    EXPECT_NEAR(cp.omega_coeff.imag(), 0.0, 1e-13);
  }
}

TEST(ComplexPack, AffineHasNoSecondDerivative) {
  const Immersion imm = catalogue_lookup("affine", {{"n", 2}, {"m", 2}, {"matrix", {{1, 1}, {0, 2}}}});
  const ComplexPack cp = complex_pack_at(imm, std::vector<double>{0.4, 0.4});
  EXPECT_EQ(cp.Fww.norm(), 0.0);
  EXPECT_EQ(cp.Bww.norm(), 0.0);
  EXPECT_FALSE(cp.isothermal);
}

TEST(ComplexPack, HolomorphicCurveIsGConformal) {
  // B_ww is isotropic for holomorphic curves, so <B_ww, B_ww> = 0.
  const Immersion imm = catalogue_lookup("holo-curve", {{"coeffs", {0, 0, 1, 0.5}}});
  const ComplexPack cp = complex_pack_at(imm, std::vector<double>{0.3, -0.4});
  EXPECT_TRUE(cp.isothermal);
  EXPECT_LE(std::abs(cp.Bww_square), 1e-12);
  EXPECT_LE(std::abs(cp.omega_coeff), 1e-12);
}

TEST(ComplexPack, CatenoidZetaSolvesKatoEquation) {
  const Immersion imm = catalogue_lookup("catenoid", {{"m", 1}});
  const ComplexPack cp = complex_pack_at(imm, std::vector<double>{0.5, 0.3});
  ASSERT_TRUE(cp.zeta.has_value());
  ASSERT_TRUE(cp.zeta_residual.has_value());
  EXPECT_LE(*cp.zeta_residual, 1e-10);
  EXPECT_NEAR(cp.xi1, cp.zeta->real(), 0.0);
  EXPECT_NEAR(cp.xi2, -cp.zeta->imag(), 0.0);
}

TEST(ComplexPack, SurfacesOnly) {
  EXPECT_THROW(complex_pack_at(catalogue_lookup("cylinder-over", {{"base", "catenoid"}}), std::vector<double>{0, 0, 0}),
               HypothesisError);
}

}  // namespace
}  // namespace mincurv
