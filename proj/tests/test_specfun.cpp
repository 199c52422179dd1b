#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "loglap/specfun.hpp"

using namespace loglap;

TEST(Specfun, GammaMatchesStd) {
  EXPECT_NEAR(loglap::gamma(0.25), 3.625609908221908, 1e-12);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(0.05, 30.0);
  for (int i = 0; i < 100; ++i) {
    const double x = d(rng);
    EXPECT_NEAR(loglap::gamma(x) / std::tgamma(x), 1.0, 1e-13) << x;
    EXPECT_NEAR(log_gamma(x), std::lgamma(x), 1e-12 * std::max(1.0, std::abs(std::lgamma(x)))) << x;
  }
}

TEST(Specfun, GammaRejectsPoles) {
  EXPECT_THROW(loglap::gamma(0.0), DomainError);
  EXPECT_THROW(loglap::gamma(-2.0), DomainError);
}

TEST(Specfun, DigammaValues) {
  EXPECT_NEAR(digamma(1.0), -kEulerGamma, 1e-14);
  EXPECT_NEAR(digamma(0.5), -kEulerGamma - 2.0 * kLn2, 1e-14);
  EXPECT_NEAR(digamma(0.25), -kEulerGamma - kPi / 2.0 - 3.0 * kLn2, 1e-13);
}

TEST(Specfun, DigammaAgainstLogGammaDerivative) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(0.3, 20.0);
  for (int i = 0; i < 100; ++i) {
    const double x = d(rng), h = 1e-4;
    const double fd = (-std::lgamma(x + 2 * h) + 8 * std::lgamma(x + h) - 8 * std::lgamma(x - h) + std::lgamma(x - 2 * h)) /
                      (12 * h);
    EXPECT_NEAR(digamma(x), fd, 1e-8) << x;
  }
}

TEST(Specfun, RecurrencesHold) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.1, 25.0);
  for (int i = 0; i < 100; ++i) {
    const double x = d(rng);
    EXPECT_NEAR(digamma(x + 1.0), digamma(x) + 1.0 / x, 1e-12 * std::max(1.0, 1.0 / x));
    EXPECT_NEAR(trigamma(x + 1.0), trigamma(x) - 1.0 / (x * x), 1e-11 * std::max(1.0, 1.0 / (x * x)));
  }
}

TEST(Specfun, TrigammaValues) {
  EXPECT_NEAR(trigamma(1.0), kPi * kPi / 6.0, 1e-13);
  EXPECT_NEAR(trigamma(0.5), kPi * kPi / 2.0, 1e-12);
}

TEST(Specfun, ZetaAndBeta) {
  EXPECT_NEAR(zeta(2.0), kPi * kPi / 6.0, 1e-13);
  EXPECT_NEAR(zeta(3.0), 1.2020569031595943, 1e-13);
  EXPECT_NEAR(zeta(0.0), -0.5, 1e-13);
  EXPECT_NEAR(zeta(-1.0), -1.0 / 12.0, 1e-13);
  EXPECT_NEAR(zeta(-3.0), 1.0 / 120.0, 1e-13);
  EXPECT_NEAR(dirichlet_beta(1.0), kPi / 4.0, 1e-12);
  EXPECT_NEAR(dirichlet_beta(2.0), kCatalan, 1e-13);
  EXPECT_NEAR(hurwitz_zeta(2.0, 0.5), kPi * kPi / 2.0, 1e-12);
}

TEST(Specfun, SphereArea) {
  EXPECT_NEAR(sphere_area(1), 2.0, 1e-15);
  EXPECT_NEAR(sphere_area(2), 2.0 * kPi, 1e-14);
  EXPECT_NEAR(sphere_area(3), 4.0 * kPi, 1e-14);
  EXPECT_THROW(sphere_area(0), DomainError);
}

TEST(Constants, DimensionOne) {
  const auto t = constants_table(1);
  EXPECT_NEAR(t.rho_n, -2.0 * kEulerGamma, 1e-13);
  EXPECT_NEAR(t.rho_n, -1.154431329803, 1e-11);
  EXPECT_NEAR(t.c_n, 1.0, 1e-14);
  // beta_1^2 = 2 e^{psi(1/2)} = e^{-gamma}/2
  EXPECT_NEAR(t.beta_n * t.beta_n, 0.5 * std::exp(-kEulerGamma), 1e-13);
  // Lambda_1^2 = int beta_1^2 / (1 + x^2) dx = pi beta_1^2
  EXPECT_NEAR(t.ln_lambda_n, 0.5 * std::log(kPi * 0.5 * std::exp(-kEulerGamma)), 1e-13);
  EXPECT_NEAR(t.ln_lambda_n, -0.062813, 1e-5);
}

TEST(Constants, DimensionTwo) {
  const auto t = constants_table(2);
  EXPECT_NEAR(t.c_n, 1.0 / kPi, 1e-15);
  EXPECT_NEAR(t.rho_n, 2.0 * kLn2 - 2.0 * kEulerGamma, 1e-13);
  EXPECT_NEAR(t.beta_n, 2.0 * std::exp(-kEulerGamma), 1e-13);
  EXPECT_NEAR(t.beta_n, 1.122918967, 1e-9);
  EXPECT_NEAR(t.lambda_n, 1.990323, 1e-6);
  EXPECT_NEAR(t.lambda_n * t.lambda_n, 3.96139, 1e-5);
  EXPECT_NEAR(t.B_n_printed, -0.0048508, 1e-7);
  EXPECT_NEAR(t.ln_lambda_n, 0.6882970, 1e-6);
  EXPECT_NEAR(t.D_n, digamma(0.5) - std::log(kPi), 1e-14);
}

TEST(Constants, GapIsHalfNLn2) {
  for (int n = 1; n <= 8; ++n) {
    const auto t = constants_table(n);
    EXPECT_NEAR(t.ln_lambda_n - t.B_n_printed, 0.5 * n * kLn2, 1e-12) << n;
  }
}

TEST(Constants, LambdaIsTheBubbleNorm) {
  // Lambda_n^2 = beta_n^2 omega_{n-1} int_0^inf r^{n-1} / (1 + r^2)^n dr
  //            = beta_n^2 omega_{n-1} Gamma(n/2)^2 / (2 Gamma(n))
  for (int n = 1; n <= 6; ++n) {
    const auto t = constants_table(n);
    const double radial = std::tgamma(0.5 * n) * std::tgamma(0.5 * n) / (2.0 * std::tgamma(n));
    EXPECT_NEAR(t.lambda_n * t.lambda_n, t.beta_n * t.beta_n * sphere_area(n) * radial,
                1e-12 * t.lambda_n * t.lambda_n)
        << n;
  }
}

TEST(FracConstants, KnownValues) {
  EXPECT_NEAR(frac_constants(1, 0.25).b_ns, 0.691370, 1e-5);
  EXPECT_NEAR(frac_constants(1, 0.25).b_ns, 0.69136733903629335, 1e-14);
  const auto f = frac_constants(2, 0.25);
  EXPECT_NEAR(f.two_star_s, 4.0 / 1.5, 1e-15);
  // c_{n,s} = s 4^s Gamma(n/2 + s) / (pi^{n/2} Gamma(1 - s))
  EXPECT_NEAR(f.c_ns, 0.25 * std::pow(4.0, 0.25) * std::tgamma(1.25) / (kPi * std::tgamma(0.75)), 1e-14);
}

TEST(FracConstants, DomainChecks) {
  EXPECT_THROW(frac_constants(1, 0.0), DomainError);
  EXPECT_THROW(frac_constants(1, 0.5), DomainError);
  EXPECT_THROW(frac_constants(0, 0.1), DomainError);
  EXPECT_THROW(constants_table(0), DomainError);
}

TEST(FracConstants, LimitIsBeta) {
  for (int n = 1; n <= 8; ++n) EXPECT_NEAR(b_limit(n), constants_table(n).beta_n, 1e-8) << n;
}

TEST(BExpansion, EmpiricalAndPrinted) {
  const auto e2 = b_expansion(2);
  EXPECT_NEAR(e2.b1_empirical, -0.130182, 1e-6);
  EXPECT_NEAR(e2.b1_printed, -1.977297, 1e-4);
  EXPECT_NEAR(b_expansion(1).b1_empirical, 0.673083, 1e-5);
  for (int n = 1; n <= 6; ++n) {
    const auto e = b_expansion(n);
    EXPECT_NEAR(e.b1_empirical, -(kLn2 + digamma(0.5 * n)) * e.b0, 1e-8) << n;
  }
}

TEST(BExpansion, DerivativeMatchesFiniteDifference) {
  for (int n : {1, 2, 3}) {
    const auto e = b_expansion(n);
    const double s = 1e-4;
    const double fd = (detail::b_closed_form(n, s) - detail::b_closed_form(n, -s)) / (2 * s);
    EXPECT_NEAR(fd, e.b1_empirical, 1e-6 * std::max(1.0, std::abs(e.b1_empirical))) << n;
  }
}
