#include <cmath>

#include <gtest/gtest.h>

#include "mincurv/catalogue.hpp"
#include "mincurv/error.hpp"
#include "mincurv/geometry.hpp"
#include "mincurv/growth.hpp"

namespace mincurv {
namespace {

Immersion z_squared() { return catalogue_lookup("holo-curve", {{"coeffs", {0, 0, 1}}}); }

TEST(GrowthTable, AffinePlaneHasEuclideanArea) {
  // Any affine plane meets an extrinsic ball in a flat disk.
  const Immersion imm = catalogue_lookup("affine", {{"n", 2}, {"m", 2}, {"matrix", {{1, 1}, {0, 2}}}, {"offset", {0, 1}}});
  const std::vector<double> radii = {1.0, 2.0, 4.0};
  const GrowthTable t = growth_table(imm, radii);
  ASSERT_EQ(t.rows.size(), 3u);
  for (const GrowthRow& row : t.rows) {
    EXPECT_NEAR(row.volume, M_PI * row.R * row.R, 0.01 * M_PI * row.R * row.R) << row.R;
    EXPECT_NEAR(row.ratio, 4.0, 0.04);
    EXPECT_NEAR(row.max_v, std::sqrt(11.0), 1e-12);
  }
  EXPECT_TRUE(t.monotone);
  EXPECT_TRUE(t.volume_bound);
  ASSERT_TRUE(t.exponent.has_value());
  EXPECT_NEAR(*t.exponent, 2.0, 0.01);
}

TEST(GrowthTable, ThreeDimensionalAffine) {
  const Immersion imm = catalogue_lookup("affine", {{"n", 3}, {"m", 1}, {"matrix", {{0, 0, 1}}}});
  const std::vector<double> radii = {1.0};
  const GrowthTable t = growth_table(imm, radii);
  EXPECT_NEAR(t.rows[0].volume, 4.0 / 3.0 * M_PI, 0.01 * 4.0 / 3.0 * M_PI);
}

TEST(GrowthTable, ZSquaredIsQuadratic) {
  const std::vector<double> radii = {1.0, 2.0, 4.0};
  const GrowthTable t = growth_table(z_squared(), radii);
  ASSERT_TRUE(t.exponent.has_value());
  EXPECT_NEAR(*t.exponent, 2.0, 0.2);
  EXPECT_TRUE(t.monotone);
  EXPECT_TRUE(t.volume_bound);
}

TEST(GrowthTable, Validation) {
  const Immersion z2 = z_squared();
  const std::vector<double> decreasing = {2.0, 1.0};
  EXPECT_THROW(growth_table(z2, decreasing), ConfigError);
  const std::vector<double> negative = {-1.0};
  EXPECT_THROW(growth_table(z2, negative), ConfigError);
  const std::vector<double> one = {1.0};
  EXPECT_THROW(growth_table(catalogue_lookup("catenoid"), one), HypothesisError);
}

TEST(Probe, ParameterValidation) {
  ProbeParams p;
  EXPECT_EQ(*p.resolved(2).q, 4.5);
  EXPECT_EQ(*p.resolved(2).s, 1.0);
  EXPECT_EQ(p.resolved(2).cells, 128);
  EXPECT_EQ(p.resolved(3).cells, 24);
  p.t = 2.0;
  EXPECT_THROW(p.resolved(2), ConfigError);
  p.t = 3.0;
  p.q = 3.0;
  EXPECT_THROW(p.resolved(2), ConfigError);
  p.q.reset();
  p.s = 0.5;
  EXPECT_THROW(p.resolved(2), ConfigError);
  p.s.reset();
  p.R0 = 2.0;
  EXPECT_THROW(p.resolved(2), ConfigError);
  try {
    p.resolved(2);
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("probe.R0", 0), 0u) << e.what();
  }
}

TEST(Probe, ZSquaredAtOrigin) {
  const Immersion imm = z_squared();
  const std::vector<double> origin = {0.0, 0.0};
  const GridSpec domain = square_grid(2, -1.0, 1.0, 3);
  const ProbeRecord rec = estimate_probe(imm, default_reference_frame(imm, origin), origin, domain, ProbeParams{});
  ASSERT_TRUE(rec.applicable) << rec.not_applicable;
  EXPECT_NEAR(rec.es4_lhs, 16.0, 1e-12);
  EXPECT_GT(rec.C3, 0.0);
  EXPECT_GT(rec.C4, 0.0);
  EXPECT_GT(rec.volume, rec.volume_half);
  EXPECT_GE(rec.max_v, 1.0);
}

TEST(Subharmonic, ZSquaredExponents) {
  const Immersion imm = z_squared();
  const Eigen::MatrixXd A = default_reference_frame(imm, std::vector<double>{0, 0});
  const SubharmonicValue at0 = subharmonic_at(imm, std::vector<double>{0.0, 0.0}, A, 1.0, 1.0);
  EXPECT_NEAR(at0.laplacian, -512.0, 1e-8);
  EXPECT_NEAR(at0.bound, -512.0, 1e-10);
  // q = 3s: |B|^2 v^3 is constant on the graph of z^2
  const SubharmonicValue flat = subharmonic_at(imm, std::vector<double>{0.4, -0.3}, A, 1.0, 3.0);
  EXPECT_NEAR(flat.laplacian, 0.0, 1e-9);
  EXPECT_EQ(flat.bound, 0.0);
}

}  // namespace
}  // namespace mincurv
