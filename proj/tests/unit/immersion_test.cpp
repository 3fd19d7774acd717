#include <cmath>

#include <gtest/gtest.h>

#include "mincurv/catalogue.hpp"
#include "mincurv/error.hpp"
#include "mincurv/immersion.hpp"

namespace mincurv {
namespace {

using nlohmann::json;

TEST(Immersion, HoloCurveZSquaredJets) {
  const Immersion imm = catalogue_lookup("holo-curve", {{"coeffs", {0, 0, 1}}});
  ASSERT_EQ(imm.dim(), 2);
  ASSERT_EQ(imm.codim(), 2);
  ASSERT_TRUE(imm.is_graph());
  const std::vector<double> p = {1.0, 0.0};
  const std::vector<Jet> F = evaluate_immersion(imm, p, 2);
  ASSERT_EQ(F.size(), 4u);
  // Re z^2 = x^2 - y^2
  EXPECT_DOUBLE_EQ(F[2].value(), 1.0);
  EXPECT_DOUBLE_EQ(F[2].gradient(0), 2.0);
  EXPECT_DOUBLE_EQ(F[2].gradient(1), 0.0);
  // Im z^2 = 2xy
  EXPECT_DOUBLE_EQ(F[3].value(), 0.0);
  EXPECT_DOUBLE_EQ(F[3].gradient(1), 2.0);
  EXPECT_DOUBLE_EQ(F[3].hessian(0, 1), 2.0);
  // coordinate components
  EXPECT_DOUBLE_EQ(F[0].gradient(0), 1.0);
  EXPECT_DOUBLE_EQ(F[1].gradient(1), 1.0);
}

TEST(Immersion, ComplexCoefficients) {
  // f(z) = i z: (x, y) -> (x, y, -y, x)
  const Immersion imm = catalogue_lookup("holo-curve", {{"coeffs", {0, json::array({0, 1})}}});
  const std::vector<double> value = imm.evaluate(std::vector<double>{0.3, 0.7});
  EXPECT_NEAR(value[2], -0.7, 1e-15);
  EXPECT_NEAR(value[3], 0.3, 1e-15);
  const Immersion conj = catalogue_lookup("holo-curve", {{"coeffs", {0, 1}}, {"conjugate", true}});
  const std::vector<double> cv = conj.evaluate(std::vector<double>{0.3, 0.7});
  EXPECT_NEAR(cv[2], 0.3, 1e-15);
  EXPECT_NEAR(cv[3], -0.7, 1e-15);
}

TEST(Immersion, CatenoidAtOrigin) {
  const Immersion imm = catalogue_lookup("catenoid", {{"m", 1}});
  EXPECT_EQ(imm.ambient_dim(), 3);
  const std::vector<double> v = imm.evaluate(std::vector<double>{0.0, 0.0});
  EXPECT_DOUBLE_EQ(v[0], 1.0);
  EXPECT_DOUBLE_EQ(v[1], 0.0);
  EXPECT_DOUBLE_EQ(v[2], 0.0);
  EXPECT_EQ(catalogue_lookup("catenoid").ambient_dim(), 4);
}

TEST(Immersion, CylinderOverAddsLine) {
  const Immersion imm = catalogue_lookup("cylinder-over", {{"base", "helicoid"}});
  EXPECT_EQ(imm.dim(), 3);
  EXPECT_EQ(imm.ambient_dim(), 5);
  const std::vector<Jet> F = evaluate_immersion(imm, std::vector<double>{0.2, 0.3, 0.4}, 1);
  double along = 0.0;
  for (const Jet& c : F) along += c.gradient(2) * c.gradient(2);
  EXPECT_NEAR(along, 1.0, 1e-15);
}

TEST(Immersion, AffineGraph) {
  const Immersion imm = catalogue_lookup("affine", {{"n", 2}, {"m", 2}, {"matrix", {{1, 1}, {0, 2}}}, {"offset", {0, 1}}});
  const std::vector<double> v = imm.evaluate(std::vector<double>{1.0, 2.0});
  EXPECT_DOUBLE_EQ(v[2], 3.0);
  EXPECT_DOUBLE_EQ(v[3], 5.0);
}

TEST(Immersion, CatalogueRejectsBadParams) {
  EXPECT_THROW(catalogue_lookup("nonesuch"), ConfigError);
  EXPECT_THROW(catalogue_lookup("catenoid", {{"m", 0}}), ConfigError);
  EXPECT_THROW(catalogue_lookup("catenoid", {{"radius", 2}}), ConfigError);
  EXPECT_THROW(catalogue_lookup("holo-curve", json::object()), ConfigError);
  EXPECT_THROW(catalogue_lookup("affine", {{"n", 2}, {"m", 1}, {"matrix", {{1, 2, 3}}}}), ConfigError);
  EXPECT_THROW(catalogue_lookup("cylinder-over", {{"base", "cylinder-over"}}), ConfigError);
  for (const CatalogueEntry& e : catalogue_entries()) {
    if (e.name == "holo-curve" || e.name == "cylinder-over") {
      EXPECT_THROW(catalogue_lookup(e.name), ConfigError) << e.name << " has required params";
    } else {
      EXPECT_NO_THROW(catalogue_lookup(e.name)) << e.name;
    }
  }
}

TEST(Immersion, GraphBuilderValidatesVariables) {
  EXPECT_THROW(build_graph_immersion({parse_expression("x*y*z", 3)}, 2), ShapeError);
  const Immersion g = build_graph_immersion({parse_expression("x^2 + y^2", 2)}, 2, "paraboloid");
  EXPECT_EQ(g.ambient_dim(), 3);
  EXPECT_EQ(g.graph_functions().size(), 1u);
  EXPECT_EQ(g.name(), "paraboloid");
}

TEST(Grid, PointsAndValidation) {
  GridSpec grid = square_grid(2, -1.0, 1.0, 3);
  const auto pts = grid.points();
  ASSERT_EQ(pts.size(), 9u);
  EXPECT_EQ(pts[0], (std::vector<double>{-1.0, -1.0}));
  EXPECT_EQ(pts[1], (std::vector<double>{-1.0, 0.0}));
  EXPECT_EQ(pts[8], (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(grid.center(), (std::vector<double>{0.0, 0.0}));

  grid.mask = [](std::span<const double> p) { return p[0] * p[0] + p[1] * p[1] <= 1.0; };
  EXPECT_EQ(grid.points().size(), 5u);

  GridSpec bad = square_grid(2, -1.0, 1.0, 1);
  EXPECT_THROW(bad.validate(), ConfigError);
  GridSpec flat = square_grid(2, 1.0, 1.0, 4);
  EXPECT_THROW(flat.validate(), ConfigError);
}

}  // namespace
}  // namespace mincurv
