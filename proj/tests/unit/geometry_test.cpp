#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mincurv/catalogue.hpp"
#include "mincurv/error.hpp"
#include "mincurv/geometry.hpp"

namespace mincurv {
namespace {

using nlohmann::json;

Immersion z_squared() { return catalogue_lookup("holo-curve", {{"coeffs", {0, 0, 1}}}); }

TEST(Geometry, ZSquaredAtOrigin) {
  const PointGeometry pg = point_geometry_at(z_squared(), std::vector<double>{0.0, 0.0});
  EXPECT_NEAR(pg.normB2, 16.0, 1e-12);
  EXPECT_NEAR(pg.mean_curvature.norm(), 0.0, 1e-13);
  const GaussRank gr = gauss_rank_at(pg);
  EXPECT_EQ(gr.rank, 2);
  ASSERT_EQ(gr.singular_values.size(), 2u);
  EXPECT_NEAR(gr.singular_values[0], std::sqrt(8.0), 1e-12);
  EXPECT_NEAR(gr.singular_values[1], std::sqrt(8.0), 1e-12);
  const CanonicalFrame cf = canonical_frame_at(pg);
  EXPECT_NEAR(cf.mu1, 2.0, 1e-12);
  EXPECT_NEAR(cf.mu2, 2.0, 1e-12);
  EXPECT_LE(cf.residual, 1e-12);
  const CurvaturePack K = curvature_pack_at(pg);
  EXPECT_NEAR(K.K_intrinsic, -8.0, 1e-9);
  EXPECT_NEAR(K.K_extrinsic, -8.0, 1e-12);
  ASSERT_TRUE(K.conformal_factor.has_value());
  EXPECT_NEAR(*K.conformal_factor, 1.0, 1e-15);
}

TEST(Geometry, ZSquaredNormB2Profile) {
  // |B|^2 = 16 / (1 + 4 r^2)^3 for the graph of z^2
  const Immersion imm = z_squared();
  for (double x : {0.1, 0.5, -0.8}) {
    for (double y : {0.0, 0.3, -0.9}) {
      const double r2 = x * x + y * y;
      const double expected = 16.0 / std::pow(1.0 + 4.0 * r2, 3);
      EXPECT_NEAR(point_geometry_at(imm, std::vector<double>{x, y}).normB2, expected, 1e-12 * expected);
    }
  }
}

TEST(Geometry, CatenoidCurvature) {
  const Immersion imm = catalogue_lookup("catenoid", {{"m", 1}});
  const PointGeometry at1 = point_geometry_at(imm, std::vector<double>{1.0, 0.0});
  EXPECT_NEAR(at1.normB2, 2.0 / std::pow(std::cosh(1.0), 4), 1e-13);
  const PointGeometry at0 = point_geometry_at(imm, std::vector<double>{0.0, 0.0});
  const CanonicalFrame cf = canonical_frame_at(at0);
  EXPECT_NEAR(cf.mu1, 1.0, 1e-12);
  EXPECT_NEAR(cf.mu2, 0.0, 1e-12);
  EXPECT_EQ(cf.nu2.size(), 0);
  const CurvaturePack K = curvature_pack_at(at0);
  EXPECT_NEAR(K.K_intrinsic, -1.0, 1e-8);
  EXPECT_NEAR(K.K_extrinsic, -1.0, 1e-12);
}

TEST(Geometry, AffineIsFlat) {
  const Immersion imm = catalogue_lookup("affine", {{"n", 2}, {"m", 2}, {"matrix", {{1, 1}, {0, 2}}}});
  const PointGeometry pg = point_geometry_at(imm, std::vector<double>{0.3, -0.4});
  EXPECT_EQ(pg.normB2, 0.0);
  EXPECT_EQ(pg.nablaB2, 0.0);
  EXPECT_EQ(gauss_rank_at(pg).rank, 0);
  EXPECT_NEAR(pg.det_g(), 11.0, 1e-13);
}

TEST(Geometry, DegenerateImmersionThrows) {
  const Immersion imm = build_parametric_immersion(
      {parse_expression("u", 2), parse_expression("u", 2), parse_expression("v^2", 2)}, 2, "fold");
  EXPECT_THROW(point_geometry_at(imm, std::vector<double>{0.0, 0.0}), ImmersionRankError);
  EXPECT_NO_THROW(point_geometry_at(imm, std::vector<double>{0.0, 1.0}));
}

TEST(Geometry, FramesAreOrthonormalEverywhere) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<Immersion> surfaces = {
      z_squared(), catalogue_lookup("catenoid"), catalogue_lookup("enneper", {{"m", 1}}),
      catalogue_lookup("helicoid", {{"m", 3}}), catalogue_lookup("cylinder-over", {{"base", "catenoid"}}),
      catalogue_lookup("holo-curve", {{"coeffs", {1, json::array({0, 1}), 0, 0.5}}}),
  };
  for (const Immersion& imm : surfaces) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> p(static_cast<std::size_t>(imm.dim()));
      for (double& c : p) c = u(rng);
      const PointGeometry pg = point_geometry_at(imm, p);
      Eigen::MatrixXd all(pg.ambient(), pg.ambient());
      all << pg.tangent_frame, pg.normal_frame;
      EXPECT_LE((all * all.transpose() - Eigen::MatrixXd::Identity(pg.ambient(), pg.ambient())).norm(), 1e-12)
          << imm.name();
      // e_a = frame_coeffs(a, i) dF_i
      EXPECT_LE((pg.frame_coeffs * pg.dF.transpose() - pg.tangent_frame).norm(), 1e-12) << imm.name();
      EXPECT_LE((pg.normal_frame * pg.dF).norm(), 1e-12) << imm.name();
    }
  }
}

TEST(Geometry, CodazziAndMinimality) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<Immersion> surfaces = {
      z_squared(), catalogue_lookup("catenoid"), catalogue_lookup("enneper"),
      catalogue_lookup("cylinder-over", {{"base", "helicoid"}})};
  for (const Immersion& imm : surfaces) {
    std::vector<double> p(static_cast<std::size_t>(imm.dim()));
    for (double& c : p) c = u(rng);
    const PointGeometry pg = point_geometry_at(imm, p);
    EXPECT_LE(pg.mean_curvature.norm(), 1e-12) << imm.name();
    double worst = 0.0;
    for (int al = 0; al < pg.m; ++al)
      for (int a = 0; a < pg.n; ++a)
        for (int b = 0; b < pg.n; ++b)
          for (int c = 0; c < pg.n; ++c) {
            worst = std::max(worst, std::abs(pg.h3_at(al, a, b, c) - pg.h3_at(al, a, c, b)));
            worst = std::max(worst, std::abs(pg.h3_at(al, a, b, c) - pg.h3_at(al, b, a, c)));
          }
    EXPECT_LE(worst, 1e-9) << imm.name();
  }
}

TEST(Geometry, GaussEquationEnneper) {
  const Immersion imm = catalogue_lookup("enneper", {{"m", 1}});
  for (double x : {-0.7, 0.0, 0.4}) {
    const CurvaturePack K = curvature_pack_at(imm, std::vector<double>{x, 0.5});
    EXPECT_NEAR(K.K_intrinsic, K.K_extrinsic, 1e-7 * std::max(1.0, std::abs(K.K_extrinsic)));
    // -4 / (1 + u^2 + v^2)^4
    EXPECT_NEAR(K.K_extrinsic, -4.0 / std::pow(1.0 + x * x + 0.25, 4), 1e-11);
  }
}

TEST(Geometry, CylinderHasRelativeNullity) {
  const Immersion imm = catalogue_lookup("cylinder-over", {{"base", "helicoid"}});
  const PointGeometry pg = point_geometry_at(imm, std::vector<double>{0.3, 0.2, -0.5});
  const GaussRank gr = gauss_rank_at(pg);
  EXPECT_EQ(gr.rank, 2);
  ASSERT_EQ(gr.singular_values.size(), 3u);
  EXPECT_LE(gr.singular_values[2], 1e-12);
  const CanonicalFrame cf = canonical_frame_at(pg);
  ASSERT_EQ(cf.kernel_basis.size(), 1u);
  EXPECT_NEAR(std::abs(cf.kernel_basis[0](pg.ambient() - 1)), 1.0, 1e-12);
  for (int al = 0; al < pg.m; ++al)
    for (int j = 0; j < 3; ++j) EXPECT_LE(std::abs(cf.h[static_cast<std::size_t>((al * 3 + 2) * 3 + j)]), 1e-10);
}

TEST(Geometry, CanonicalFrameRequiresSurfaceLikeRank) {
  const Immersion imm = catalogue_lookup("catenoid");
  EXPECT_THROW(curvature_pack_at(catalogue_lookup("cylinder-over", {{"base", "catenoid"}}),
                                 std::vector<double>{0.1, 0.1, 0.1}),
               HypothesisError);
  EXPECT_NO_THROW(canonical_frame_at(point_geometry_at(imm, std::vector<double>{0.1, 0.2})));
}

}  // namespace
}  // namespace mincurv
