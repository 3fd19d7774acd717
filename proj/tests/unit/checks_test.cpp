#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "mincurv/catalogue.hpp"
#include "mincurv/checks.hpp"
#include "mincurv/error.hpp"

namespace mincurv {
namespace {

using nlohmann::json;

Immersion z_squared() { return catalogue_lookup("holo-curve", {{"coeffs", {0, 0, 1}}}); }
Immersion paraboloid() { return build_graph_immersion({parse_expression("x^2 + y^2", 2)}, 2, "paraboloid"); }

double value_at(const CheckResult& r, const std::vector<double>& point, const std::string& key) {
  for (const PointRecord& d : r.details) {
    if (d.point != point) continue;
    for (const auto& [k, v] : d.values)
      if (k == key) return v;
  }
  ADD_FAILURE() << r.name << ": no value " << key;
  return std::nan("");
}

CheckOptions with_detail() {
  CheckOptions o;
  o.detail = true;
  return o;
}

TEST(Catalogue, NamesAreUniqueAndFindable) {
  std::set<std::string> seen;
  for (const CheckInfo& c : check_catalogue()) {
    EXPECT_TRUE(seen.insert(c.name).second) << c.name;
    EXPECT_GT(c.default_tol, 0.0) << c.name;
    EXPECT_EQ(find_check(c.name), &c);
  }
  EXPECT_EQ(find_check("bogus"), nullptr);
  EXPECT_GE(seen.size(), 17u);
}

TEST(Minimality, CatenoidPasses) {
  const CheckResult r = check_minimality(catalogue_lookup("catenoid"), square_grid(2, -1.0, 1.0, 11));
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_LE(r.worst, 1e-10);
  EXPECT_EQ(r.points, 121);
}

TEST(Minimality, ParaboloidFails) {
  const CheckResult r = check_minimality(paraboloid(), square_grid(2, -1.0, 1.0, 5), with_detail());
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_GE(r.worst, 2.0);
  EXPECT_NEAR(value_at(r, {0.0, 0.0}, "H"), 4.0, 1e-12);
}

TEST(MinimalSystem, CubicHolomorphicSatisfiesIt) {
  const Immersion z3 = catalogue_lookup("holo-curve", {{"coeffs", {0, 0, 0, 1}}});
  const CheckResult r = check_minimal_system(z3, square_grid(2, -1.0, 1.0, 9));
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_LE(r.worst, 1e-9);
}

TEST(MinimalSystem, ParaboloidResidualAtOrigin) {
  const CheckResult r = check_minimal_system(paraboloid(), square_grid(2, -1.0, 1.0, 3), with_detail());
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_NEAR(value_at(r, {0.0, 0.0}, "system_norm"), 4.0, 1e-12);
  EXPECT_THROW(check_minimal_system(catalogue_lookup("catenoid"), square_grid(2, -1.0, 1.0, 3)), HypothesisError);
}

TEST(Jacobian, ZSquared) {
  const CheckResult r = check_jacobian_identities(z_squared(), square_grid(2, -1.0, 1.0, 3), with_detail());
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_NEAR(value_at(r, {1.0, 0.0}, "sigma1"), 2.0, 1e-13);
  EXPECT_NEAR(value_at(r, {1.0, 0.0}, "sigma2"), 2.0, 1e-13);
  EXPECT_NEAR(value_at(r, {1.0, 0.0}, "minors"), 16.0, 1e-12);
  EXPECT_NEAR(value_at(r, {1.0, 0.0}, "v"), 5.0, 1e-13);
}

TEST(Jacobian, NonMinimalMapStillSatisfiesIdentities) {
  const Immersion f = build_graph_immersion({parse_expression("x^3", 2), parse_expression("y", 2)}, 2);
  const CheckResult r = check_jacobian_identities(f, square_grid(2, -1.0, 1.0, 3), with_detail());
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_NEAR(value_at(r, {1.0, 1.0}, "sigma1"), 3.0, 1e-13);
  EXPECT_NEAR(value_at(r, {1.0, 1.0}, "sigma2"), 1.0, 1e-13);
  EXPECT_NEAR(value_at(r, {1.0, 1.0}, "minors"), 9.0, 1e-12);
  EXPECT_NEAR(value_at(r, {1.0, 1.0}, "v"), std::sqrt(20.0), 1e-13);
}

TEST(Isothermal, Cases) {
  const GridSpec grid = square_grid(2, -1.0, 1.0, 5);
  EXPECT_EQ(verify_isothermal(z_squared(), 0.0, 1.0, grid).verdict, Verdict::Pass);
  EXPECT_EQ(verify_isothermal(z_squared(), 1.0, 1.0, grid).verdict, Verdict::Fail);
  // graph of (x + y, 0): g = [[2, 1], [1, 2]] is conformal in u2 = (x1 + 2 x2) / sqrt(3)
  const Immersion plane = build_graph_immersion({parse_expression("x + y", 2), parse_expression("0", 2)}, 2);
  EXPECT_EQ(verify_isothermal(plane, 1.0 / std::sqrt(3.0), 2.0 / std::sqrt(3.0), grid).verdict, Verdict::Pass);
  EXPECT_EQ(verify_isothermal(plane, 0.0, 1.0, grid).verdict, Verdict::Fail);
  EXPECT_THROW(verify_isothermal(plane, 0.0, 0.0, grid), ConfigError);
}

TEST(Simons, ZSquaredRatioIsThreeHalves) {
  const SimonsCheck sc = check_simons(z_squared(), square_grid(2, -1.0, 1.0, 7));
  EXPECT_EQ(sc.result.verdict, Verdict::Pass);
  for (const auto& rep : sc.reports) {
    ASSERT_TRUE(rep.has_value());
    ASSERT_TRUE(rep->ratio.has_value());
    EXPECT_NEAR(*rep->ratio, 1.5, 1e-6);
    ASSERT_TRUE(rep->inner_term_formula.has_value());
    EXPECT_NEAR(rep->inner_term_numeric, *rep->inner_term_formula, 1e-4 * std::max(1.0, std::abs(*rep->inner_term_formula)));
  }
}

TEST(Simons, CatenoidRatioIsOne) {
  const SimonsCheck sc = check_simons(catalogue_lookup("catenoid", {{"m", 1}}), square_grid(2, -1.0, 1.0, 5));
  EXPECT_EQ(sc.result.verdict, Verdict::Pass);
  for (const auto& rep : sc.reports) EXPECT_NEAR(*rep->ratio, 1.0, 1e-6);
}

TEST(Kato, GapVanishesOnSurfaces) {
  for (const Immersion& imm : {z_squared(), catalogue_lookup("catenoid"), catalogue_lookup("enneper")}) {
    const KatoCheck kc = check_kato(imm, square_grid(2, -0.9, 0.9, 5));
    EXPECT_EQ(kc.result.verdict, Verdict::Pass) << imm.name();
    for (const auto& rep : kc.reports) {
      ASSERT_TRUE(rep && rep->gap);
      EXPECT_LE(std::abs(*rep->gap), 1e-6 * std::max(1.0, rep->nablaB2)) << imm.name();
    }
  }
}

TEST(Si2, HoldsOnMinimalSurfaces) {
  EXPECT_EQ(check_si2(catalogue_lookup("catenoid"), square_grid(2, -1.0, 1.0, 5)).verdict, Verdict::Pass);
  EXPECT_EQ(check_si2(z_squared(), square_grid(2, -1.0, 1.0, 5)).verdict, Verdict::Pass);
}

TEST(GConformal, AgreementOnBothSides) {
  const CheckResult holo = check_g_conformal(z_squared(), square_grid(2, -1.0, 1.0, 5));
  EXPECT_EQ(holo.verdict, Verdict::Pass);
  EXPECT_EQ(holo.stats.at("isothermal_points"), 25.0);
  const CheckResult cat = check_g_conformal(catalogue_lookup("catenoid"), square_grid(2, -1.0, 1.0, 5));
  EXPECT_EQ(cat.verdict, Verdict::Pass);
}

TEST(WFormulas, ZSquaredAndCylinder) {
  const Immersion z2 = z_squared();
  EXPECT_EQ(check_w_formulas(z2, square_grid(2, -1.0, 1.0, 5), default_reference_frame(z2, std::vector<double>{0, 0})).verdict,
            Verdict::Pass);
  const Immersion cyl = catalogue_lookup("cylinder-over", {{"base", "helicoid"}});
  const Eigen::MatrixXd A = default_reference_frame(cyl, std::vector<double>{0, 0, 0});
  EXPECT_EQ(check_w_formulas(cyl, square_grid(3, -0.5, 0.5, 3), A).verdict, Verdict::Pass);
  EXPECT_EQ(check_pluecker(cyl, square_grid(3, -0.5, 0.5, 3), A).verdict, Verdict::Pass);
  EXPECT_EQ(check_dlogw(z2, square_grid(2, -1.0, 1.0, 5), default_reference_frame(z2, std::vector<double>{0, 0})).verdict,
            Verdict::Pass);
}

TEST(RunCheck, ConfigValidation) {
  const Immersion imm = z_squared();
  CheckContext ctx;
  ctx.immersion = &imm;
  ctx.grid = square_grid(2, -1.0, 1.0, 3);
  EXPECT_THROW(run_check({"bogus", {}, {}, json::object()}, ctx), ConfigError);
  EXPECT_THROW(run_check({"minimality", -1.0, {}, json::object()}, ctx), ConfigError);
  EXPECT_THROW(run_check({"minimality", {}, {}, {{"radius", 1}}}, ctx), ConfigError);
  EXPECT_THROW(run_check({"isothermal", {}, {}, {{"b", 0}}}, ctx), ConfigError);
  const CheckResult r = run_check({"minimality", 1e-3, {}, json::object()}, ctx);
  EXPECT_EQ(r.tol, 1e-3);
}

TEST(RunCheck, ToleranceOverrideFlipsVerdict) {
  const Immersion imm = paraboloid();
  CheckContext ctx;
  ctx.immersion = &imm;
  ctx.grid = square_grid(2, -0.1, 0.1, 3);
  EXPECT_EQ(run_check({"minimality", {}, {}, json::object()}, ctx).verdict, Verdict::Fail);
  EXPECT_EQ(run_check({"minimality", 10.0, {}, json::object()}, ctx).verdict, Verdict::Pass);
}

TEST(RunCheck, ThreadCountDoesNotChangeResults) {
  const Immersion imm = catalogue_lookup("enneper");
  CheckContext ctx;
  ctx.immersion = &imm;
  ctx.grid = square_grid(2, -1.0, 1.0, 9);
  ctx.detail = true;
  for (const char* name : {"simons", "kato", "codazzi", "g_rank"}) {
    ctx.jobs = 1;
    const CheckResult a = run_check({name, {}, {}, json::object()}, ctx);
    ctx.jobs = 3;
    const CheckResult b = run_check({name, {}, {}, json::object()}, ctx);
    EXPECT_EQ(a.worst, b.worst) << name;
    ASSERT_EQ(a.details.size(), b.details.size());
    for (std::size_t k = 0; k < a.details.size(); ++k) EXPECT_EQ(a.details[k].values, b.details[k].values);
  }
}

TEST(GRank, CountsRanks) {
  const Immersion cyl = catalogue_lookup("cylinder-over", {{"base", "helicoid"}});
  CheckContext ctx;
  ctx.immersion = &cyl;
  ctx.grid = square_grid(3, -0.5, 0.5, 3);
  const CheckResult r = run_check({"g_rank", {}, {}, json::object()}, ctx);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_EQ(r.stats.at("rank_2"), 27.0);
  EXPECT_LE(r.stats.at("sv3_max"), 1e-10);
}

TEST(Growth, CheckReportsStats) {
  const Immersion imm = catalogue_lookup("affine", {{"n", 2}, {"m", 2}, {"matrix", {{0, 0}, {0, 0}}}});
  CheckContext ctx;
  ctx.immersion = &imm;
  ctx.grid = square_grid(2, -1.0, 1.0, 3);
  const CheckResult r = run_check({"growth", {}, {}, {{"radii", {1, 2}}}}, ctx);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_NEAR(r.stats.at("R=1.V"), M_PI, 0.01 * M_PI);
  EXPECT_THROW(run_check({"growth", {}, {}, {{"radii", {2, 1}}}}, ctx), ConfigError);
}

}  // namespace
}  // namespace mincurv
