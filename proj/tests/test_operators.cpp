#include <gtest/gtest.h>

#include <cmath>

#include "loglap/field.hpp"
#include "loglap/operators.hpp"

using namespace loglap;

namespace {

// (2/sqrt(2 pi)) int_0^inf 2 ln(xi) e^{-xi^2/2} cos(xi x) dxi with xi = e^t, trapezoid in t
double gaussian_loglap_fourier(double x) {
  const double a = -40.0, b = 4.0;
  const int m = 20000;
  const double h = (b - a) / m;
  double s = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double t = a + i * h, xi = std::exp(t);
    const double f = 2.0 * t * std::exp(-0.5 * xi * xi) * std::cos(xi * x) * xi;
    s += (i == 0 || i == m ? 0.5 : 1.0) * f;
  }
  return s * h * 2.0 / std::sqrt(2.0 * kPi);
}

}  // namespace

TEST(LogLaplacian, GaussianAnchor) {
  const auto e = loglap_point(make_gaussian(1, 1.0), Point{0.0});
  EXPECT_NEAR(e.value, -1.2703628454614782, 1e-8);
  EXPECT_NEAR(e.value, -(kEulerGamma + kLn2), std::max(e.error, 1e-10));
}

TEST(LogLaplacian, GaussianAgainstFourierIntegral) {
  const Field g = make_gaussian(1, 1.0);
  for (double x : {0.4, 1.3, 2.5, 5.0}) EXPECT_NEAR(loglap_point(g, Point{x}).value, gaussian_loglap_fourier(x), 1e-8) << x;
}

TEST(LogLaplacian, TwoDimensionalGaussianAtOrigin) {
  // int_0^inf 2 ln(rho) e^{-rho^2/2} rho drho = ln 2 - gamma
  EXPECT_NEAR(loglap_point(make_gaussian(2, 1.0), Point{0.0, 0.0}).value, kLn2 - kEulerGamma, 1e-8);
}

TEST(LogLaplacian, BubbleAtOrigin) {
  const double beta = constants_table(1).beta_n;
  EXPECT_NEAR(loglap_point(make_bubble({1, 1.0, {}}), Point{0.0}).value, 4.0 * beta * std::log(beta), 1e-8);
}

TEST(LogLaplacian, Linearity) {
  const Field a = make_gaussian(1, 1.0, Point{0.5});
  const Field b = make_gaussian(1, 0.7, Point{-1.0}, 2.0);
  const Field sum = make_gaussian_mixture(1, {{Point{0.5}, 1.0, 1.0}, {Point{-1.0}, 0.7, 2.0}});
  for (double x : {0.0, 0.9, -2.2}) {
    const Point p{x};
    EXPECT_NEAR(loglap_point(sum, p).value, loglap_point(a, p).value + loglap_point(b, p).value, 1e-8) << x;
  }
}

TEST(LogLaplacian, TranslationEquivariance) {
  const Field g = make_gaussian(2, 1.0);
  const Point x0{0.6, -0.3};
  const Field t = translate_field(g, x0);
  for (const Point x : {Point{0.0, 0.0}, Point{1.0, 0.5}})
    EXPECT_NEAR(loglap_point(t, x).value, loglap_point(g, x + x0).value, 1e-8);
}

TEST(LogLaplacian, ScalingIdentity) {
  const Field g = make_gaussian(1, 1.0);
  const double l = 2.0;
  const Field gl = scale_field(g, l);
  for (double x : {0.0, 1.1}) {
    const double rhs = std::pow(l, -0.5) * (loglap_point(g, Point{x / l}).value - 2.0 * std::log(l) * g(Point{x / l}));
    EXPECT_NEAR(loglap_point(gl, Point{x}).value, rhs, 1e-8);
  }
}

TEST(LogLaplacian, RequiresDecayMetadata) {
  EXPECT_THROW(loglap_point(make_constant(1, 1.0), Point{0.0}), DomainError);
}

TEST(LogLaplacian, InvalidSpecRejected) {
  QuadratureSpec q;
  q.r_min = 0.0;
  EXPECT_THROW(loglap_point(make_gaussian(1, 1.0), Point{0.0}, q), DomainError);
}

TEST(FractionalLaplacian, GaussianAtOrigin) {
  // (2 pi)^{-1/2} int |xi|^{2s} e^{-xi^2/2} dxi = 2^s Gamma(s + 1/2) / sqrt(pi)
  const Field g = make_gaussian(1, 1.0);
  for (double s : {0.1, 0.25, 0.4}) {
    const double exact = std::pow(2.0, s) * std::tgamma(s + 0.5) / std::sqrt(kPi);
    EXPECT_NEAR(fraclap_point(g, Point{0.0}, s).value, exact, 1e-8) << s;
  }
}

TEST(FractionalLaplacian, SmallSLimit) {
  const Field g = make_gaussian(1, 1.0);
  const Point x{0.7};
  const double s = 1e-4;
  const double diff = (fraclap_point(g, x, s).value - g(x)) / s;
  EXPECT_NEAR(diff, loglap_point(g, x).value, 1e-3);
}

TEST(Functionals, BubbleNorm) {
  for (int n : {1, 2}) {
    const auto e = integrate(FunctionalKind::l2sq(), make_bubble({n, 1.0, {}}));
    EXPECT_NEAR(e.value, std::pow(constants_table(n).lambda_n, 2), 1e-8) << n;
  }
  EXPECT_NEAR(integrate(FunctionalKind::l2sq(), make_bubble({2, 1.0, {}})).value, 3.9613818530, 1e-9);
}

TEST(Functionals, GaussianMoments) {
  // int e^{-x^2} dx = sqrt(pi); int e^{-3 x^2 / 2} dx = sqrt(2 pi / 3)
  const Field g = make_gaussian(1, 1.0);
  EXPECT_NEAR(integrate(FunctionalKind::l2sq(), g).value, std::sqrt(kPi), 1e-10);
  EXPECT_NEAR(integrate(FunctionalKind::lpow(3.0), g).value, std::sqrt(2.0 * kPi / 3.0), 1e-10);
  // int u^2 ln u = -int x^2/2 e^{-x^2} = -sqrt(pi)/4
  EXPECT_NEAR(integrate(FunctionalKind::entropy(), g).value, -std::sqrt(kPi) / 4.0, 1e-10);
}

TEST(Functionals, EnergyIsEntropyOnBubble) {
  const Field u = make_bubble({1, 1.0, {}});
  const double E = integrate(FunctionalKind::energy(), u).value;
  const double ent = integrate(FunctionalKind::entropy(), u).value;
  EXPECT_NEAR(E, 4.0 * ent, 1e-6 * std::abs(E));
}

TEST(Functionals, RejectsSlowDecay) {
  const Field u = make_power_bubble(1, 1.0, 0.25, 1.0, {}, "slow");
  EXPECT_THROW(integrate(FunctionalKind::l2sq(), u), DomainError);
}

TEST(Expansion, SlopeHelper) {
  EXPECT_NEAR(loglog_slope({1.0, 0.5, 0.25}, {1.0, 0.25, 0.0625}), 2.0, 1e-14);
  EXPECT_THROW(loglog_slope({1.0}, {1.0}), DomainError);
}

TEST(Expansion, RejectsBadSList) {
  const Field g = make_gaussian(1, 1.0);
  auto fam = [g](double) { return g; };
  EXPECT_THROW(expansion_order(fam, {Point{0.0}}, {0.1, 0.2}, g, g), DomainError);
  EXPECT_THROW(expansion_order(fam, {Point{0.0}}, {0.6, 0.2}, g, g), DomainError);
}

TEST(Expansion, FirstOrderForFixedGaussian) {
  const Field g = make_gaussian(1, 1.0);
  const auto r = expansion_order([g](double) { return g; }, {Point{0.0}, Point{1.0}}, {0.1, 0.05, 0.025}, g,
                                 make_constant(1, 0.0));
  EXPECT_NEAR(r.slope, 2.0, 0.2);
}
