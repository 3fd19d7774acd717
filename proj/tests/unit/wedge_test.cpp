#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mincurv/catalogue.hpp"
#include "mincurv/error.hpp"
#include "mincurv/geometry.hpp"

namespace mincurv {
namespace {

Immersion z_squared() { return catalogue_lookup("holo-curve", {{"coeffs", {0, 0, 1}}}); }

TEST(WPack, ZSquaredAtOrigin) {
  const Immersion imm = z_squared();
  const Eigen::MatrixXd A = default_reference_frame(imm, std::vector<double>{0.0, 0.0});
  const WedgePack wp = w_pack_at(imm, std::vector<double>{0.0, 0.0}, A);
  EXPECT_NEAR(wp.w, 1.0, 1e-15);
  EXPECT_NEAR(wp.w_frames, 1.0, 1e-15);
  EXPECT_LE(wp.grad_w_frame.norm(), 1e-14);
  EXPECT_LE(wp.grad_w_formula.norm(), 1e-14);
  ASSERT_TRUE(wp.lap_w_formula.has_value());
  // Delta w = -|B|^2 w at a point where grad w = 0 and w = 1
  EXPECT_NEAR(wp.lap_w_numeric, -16.0, 1e-10);
  EXPECT_NEAR(*wp.lap_w_formula, -16.0, 1e-10);
}

TEST(WPack, AffineAgainstItsOwnPlane) {
  const Immersion imm = catalogue_lookup("affine", {{"n", 2}, {"m", 2}, {"matrix", {{1, 1}, {0, 2}}}, {"offset", {0, 1}}});
  const std::vector<double> p = {0.2, -0.6};
  const Eigen::MatrixXd own = point_geometry_at(imm, p).tangent_frame;
  const WedgePack wp = w_pack_at(imm, p, own);
  EXPECT_NEAR(wp.w, 1.0, 1e-14);
  EXPECT_NEAR(wp.lap_w_numeric, 0.0, 1e-12);
  const WedgePack coord = w_pack_at(imm, p, default_reference_frame(imm, p));
  EXPECT_NEAR(coord.w, 1.0 / std::sqrt(11.0), 1e-14);
}

TEST(WPack, LaplacianFormulasAgreeOffCenter) {
  const Immersion imm = z_squared();
  const std::vector<double> p = {0.5, 0.2};
  const WedgePack wp = w_pack_at(imm, p, default_reference_frame(imm, p));
  ASSERT_TRUE(wp.lap_w_formula.has_value()) << wp.not_applicable;
  EXPECT_NEAR(wp.lap_w_numeric, *wp.lap_w_formula, 1e-8 * std::max(1.0, std::abs(wp.lap_w_numeric)));
  EXPECT_NEAR(wp.lap_w_numeric, wp.lap_w_general, 1e-8 * std::max(1.0, std::abs(wp.lap_w_numeric)));
  EXPECT_LE((wp.grad_w_frame - wp.grad_w_formula).norm(), 1e-10);
  ASSERT_TRUE(wp.pluecker.has_value());
  EXPECT_LE(std::abs(*wp.pluecker), 1e-12);
  ASSERT_TRUE(wp.grad_w_norm2_formula.has_value());
  EXPECT_NEAR(wp.grad_w_norm2, *wp.grad_w_norm2_formula, 1e-10);
  // closed form w = 1 / (1 + 4 r^2)
  EXPECT_NEAR(wp.w, 1.0 / (1.0 + 4.0 * 0.29), 1e-14);
}

TEST(WPack, NotMinimalLeavesCanonicalEmpty) {
  const Immersion imm = build_graph_immersion({parse_expression("x^2 + y^2", 2)}, 2);
  const std::vector<double> p = {0.1, 0.1};
  const WedgePack wp = w_pack_at(imm, p, default_reference_frame(imm, p));
  EXPECT_FALSE(wp.canonical.has_value());
  EXPECT_FALSE(wp.lap_w_formula.has_value());
  EXPECT_FALSE(wp.not_applicable.empty());
  // the general formula drops the nabla H term, so it only holds on minimal immersions
  EXPECT_GT(std::abs(wp.lap_w_numeric - wp.lap_w_general), 1e-3);
}

TEST(WPack, GeneralFormulaInHigherDimension) {
  const Immersion imm = catalogue_lookup("cylinder-over", {{"base", "helicoid"}});
  const std::vector<double> p = {0.3, -0.2, 0.1};
  const Eigen::MatrixXd A = default_reference_frame(imm, std::vector<double>{0.0, 0.0, 0.0});
  const WedgePack wp = w_pack_at(imm, p, A);
  EXPECT_NEAR(wp.lap_w_numeric, wp.lap_w_general, 1e-9);
  ASSERT_TRUE(wp.lap_w_formula.has_value()) << wp.not_applicable;
  EXPECT_NEAR(wp.lap_w_numeric, *wp.lap_w_formula, 1e-9);
}

TEST(ReferenceFrame, Validation) {
  EXPECT_THROW(validate_reference_frame(Eigen::MatrixXd::Identity(2, 3), 2, 4), ShapeError);
  Eigen::MatrixXd skew = Eigen::MatrixXd::Zero(2, 4);
  skew(0, 0) = 1.0;
  skew(1, 0) = 1.0;
  EXPECT_THROW(validate_reference_frame(skew, 2, 4), ShapeError);
  EXPECT_NO_THROW(validate_reference_frame(Eigen::MatrixXd::Identity(2, 4), 2, 4));
}

TEST(ReplacedPairing, DeterminantOfInnerProducts) {
  std::mt19937 rng(17);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd M(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) M(i, j) = g(rng);
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(M).householderQ();
    const Eigen::MatrixXd E = Q.topRows(3);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) M(i, j) = g(rng);
    const Eigen::MatrixXd A = Eigen::HouseholderQR<Eigen::MatrixXd>(M).householderQ();
    const Eigen::MatrixXd ref = A.topRows(3);
    EXPECT_NEAR(replaced_pairing(E, ref, {}), (E * ref.transpose()).determinant(), 1e-13);
    const std::vector<std::pair<int, Eigen::VectorXd>> rep = {{1, Q.row(3).transpose()}};
    Eigen::MatrixXd E2 = E;
    E2.row(1) = Q.row(3);
    EXPECT_NEAR(replaced_pairing(E, ref, rep), (E2 * ref.transpose()).determinant(), 1e-13);
  }
}

}  // namespace
}  // namespace mincurv
