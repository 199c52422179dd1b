#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "loglap/quadrature.hpp"
#include "loglap/specfun.hpp"

using namespace loglap;

TEST(Adaptive, SmoothIntegrals) {
  const auto e = integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0);
  EXPECT_NEAR(e.value, std::exp(1.0) - 1.0, 1e-13);
  EXPECT_TRUE(e.converged);
  const auto c = integrate_adaptive([](double x) { return std::cos(x); }, 0.0, kPi / 2);
  EXPECT_NEAR(c.value, 1.0, 1e-13);
}

TEST(Adaptive, EndpointSingularity) {
  const auto e = integrate_adaptive([](double x) { return std::log(x); }, 0.0, 1.0, {1e-12, 1e-12, 2000});
  EXPECT_NEAR(e.value, -1.0, 1e-10);
  const auto r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {1e-12, 1e-12, 2000});
  EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(Adaptive, ErrorEstimateIsHonest) {
  for (double k : {1.0, 5.0, 20.0}) {
    auto f = [k](double x) { return std::sin(k * x) * std::exp(-x); };
    const double exact = k / (1 + k * k) * (1 - std::exp(-3.0) * (std::cos(3 * k) + std::sin(3 * k) / k));
    const auto e = integrate_adaptive(f, 0.0, 3.0, {1e-9, 1e-9, 2000});
    EXPECT_LE(std::abs(e.value - exact), std::max(e.error, 1e-14)) << k;
  }
}

TEST(Adaptive, BreakpointsAtKinks) {
  const std::vector<double> pts{-1.0, 0.3, 1.0};
  const auto e = integrate_adaptive([](double x) { return std::abs(x - 0.3); }, std::span<const double>(pts));
  EXPECT_NEAR(e.value, (1.3 * 1.3 + 0.7 * 0.7) / 2, 1e-14);
}

TEST(Adaptive, BudgetExhaustionIsReported) {
  const auto e = integrate_adaptive([](double x) { return std::sin(1.0 / (x + 1e-6)); }, 0.0, 1.0, {1e-15, 1e-15, 5});
  EXPECT_FALSE(e.converged);
}

TEST(Breakpoints, SortedUniqueClamped) {
  const auto b = make_breakpoints(0.0, 1.0, {0.5, 2.0, -1.0, 0.5, 0.25, NAN});
  EXPECT_EQ(b, (std::vector<double>{0.0, 0.25, 0.5, 1.0}));
}

TEST(GaussLegendre, ExactForPolynomials) {
  for (int order : {4, 16, 64}) {
    const auto& g = gauss_legendre(order);
    ASSERT_EQ(static_cast<int>(g.nodes.size()), order);
    for (int p = 0; p < 2 * order; p += 3) {
      double s = 0.0;
      for (int i = 0; i < order; ++i) s += g.weights[i] * std::pow(g.nodes[i], p);
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      EXPECT_NEAR(s, exact, 1e-13) << order << " " << p;
    }
  }
}

TEST(Estimate, Arithmetic) {
  Estimate a{1.0, 0.1, 10, true}, b{2.0, 0.2, 5, false};
  const Estimate c = a + b;
  EXPECT_DOUBLE_EQ(c.value, 3.0);
  EXPECT_DOUBLE_EQ(c.error, 0.30000000000000004);
  EXPECT_EQ(c.evaluations, 15);
  EXPECT_FALSE(c.converged);
}
