#include <gtest/gtest.h>

#include <cmath>

#include "loglap/identities.hpp"
#include "loglap/report.hpp"

using namespace loglap;

TEST(Cases, Relations) {
  EXPECT_TRUE(eq_case("a", "", 1.0, 1.0 + 1e-9, 1e-8).pass);
  EXPECT_FALSE(eq_case("a", "", 1.0, 1.1, 1e-8).pass);
  const auto g = ge_case("b", "", 0.5, 1.0, 0.1);
  EXPECT_FALSE(g.pass);
  EXPECT_EQ(g.relation, "ge");
  EXPECT_TRUE(ge_case("b", "", 2.0, 1.0, 0.0).pass);
  const auto f = failed_case("c", "", "boom", 1e-3);
  EXPECT_FALSE(f.pass);
  EXPECT_TRUE(std::isnan(f.lhs));
  EXPECT_EQ(f.note, "boom");
}

TEST(SpreadPoints, RadiiAndCount) {
  const auto pts = spread_points(2, 5, 1.0, 3.0);
  ASSERT_EQ(pts.size(), 5u);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(pts[i].norm(), 1.0 + 0.5 * i, 1e-14);
  const auto one = spread_points(1, 4, 0.0, 3.0);
  EXPECT_EQ(one[1][0], -1.0);
}

TEST(RandomMixture, SeededAndIndependentOfOrder) {
  const Field a = random_mixture(2, 11, 3), b = random_mixture(2, 11, 3), c = random_mixture(2, 11, 4);
  EXPECT_EQ(a.description(), b.description());
  EXPECT_NE(a.description(), c.description());
}

TEST(Registry, SuitesAndTolerances) {
  EXPECT_EQ(suite_ids().size(), 10u);
  EXPECT_TRUE(is_suite("kelvin"));
  EXPECT_FALSE(is_suite("nope"));
  EXPECT_EQ(default_tolerance("bubble", 1), 1e-5);
  EXPECT_EQ(default_tolerance("bubble", 2), 1e-4);
  EXPECT_THROW(default_tolerance("nope", 1), DomainError);
  EXPECT_THROW(run_suite("nope", 1, std::nullopt, {}), DomainError);
}

class SuiteDimOne : public ::testing::TestWithParam<std::string> {};

TEST_P(SuiteDimOne, PassesAtDefaults) {
  const auto r = run_suite(GetParam(), 1, std::nullopt, {});
  EXPECT_TRUE(r.overall_pass) << nlohmann::json(to_json(r)).dump(1);
  EXPECT_EQ(r.suite_id, GetParam());
  EXPECT_FALSE(r.paper_anchor.empty());
}

TEST_P(SuiteDimOne, FailsUnderPerturbation) {
  SuiteContext ctx;
  ctx.perturb = 0.01;
  EXPECT_FALSE(run_suite(GetParam(), 1, std::nullopt, ctx).overall_pass);
}

INSTANTIATE_TEST_SUITE_P(All, SuiteDimOne, ::testing::ValuesIn(suite_ids()));

TEST(Suites, BubbleTwoDimensions) {
  const auto r = check_bubble_pde(2, {1.0}, spread_points(2, 4, 0.0, 10.0), 1e-4);
  EXPECT_TRUE(r.overall_pass);
  EXPECT_EQ(r.cases.size(), 4u);
}

TEST(Suites, ToleranceIsRespected) {
  // an impossible tolerance must fail, not be silently relaxed
  const auto r = check_bubble_pde(1, {1.0}, spread_points(1, 3, 0.0, 2.0), 1e-17);
  EXPECT_FALSE(r.overall_pass);
}

TEST(Suites, ErrorsBecomeFailedCases) {
  QuadratureSpec q;
  q.abs_tol = 1e-300;
  q.rel_tol = 1e-300;
  q.max_subdivisions = 1;
  SuiteContext ctx;
  ctx.quad = q;
  const auto r = check_bubble_pde(1, {1.0}, {Point{0.5}}, 1e-5, ctx);
  ASSERT_EQ(r.cases.size(), 1u);
  EXPECT_FALSE(r.cases[0].pass);
  EXPECT_FALSE(r.cases[0].note.empty());
}

TEST(Report, JsonShape) {
  const auto r = run_suite("asymptotics", 1, std::nullopt, {});
  const auto j = to_json(r);
  for (const char* k : {"suite_id", "paper_anchor", "dimension", "cases", "overall_pass", "runtime_ms", "diagnostics"})
    EXPECT_TRUE(j.contains(k)) << k;
  const auto c = j.at("cases").at(0);
  for (const char* k : {"case_id", "inputs", "lhs", "rhs", "abs_err", "tol", "pass", "relation"}) EXPECT_TRUE(c.contains(k)) << k;
  const auto back = nlohmann::json::parse(j.dump());
  EXPECT_EQ(back, j);
}

TEST(Report, ConstantsJson) {
  const auto j = constants_json(2);
  EXPECT_NEAR(j.at("beta_n").get<double>(), 1.122918967, 1e-9);
  EXPECT_NEAR(j.at("gap_Bn").get<double>(), kLn2, 1e-12);
  EXPECT_EQ(j.at("b_ns").size(), 4u);
  EXPECT_EQ(constants_json(1).at("b_ns").size(), 4u);
}

TEST(Report, CsvHeader) {
  CheckReport r;
  r.suite_id = "x";
  r.cases.push_back(eq_case("c", "", 1.0, 2.0, 0.1, {0.5, 0.25}));
  std::ostringstream os;
  write_cases_csv(os, {r}, 2);
  EXPECT_EQ(os.str(), "suite,case,coord0,coord1,lhs,rhs,abs_err\nx,c,0.5,0.25,1,2,1\n");
}
