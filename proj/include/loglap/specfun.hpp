#pragma once

// Gamma-family special functions and the dimension-dependent constants built
// from them.  Everything here is a pure function of its arguments.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "loglap/errors.hpp"

namespace loglap {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEulerGamma = std::numbers::egamma;
inline constexpr double kLn2 = std::numbers::ln2;
inline constexpr double kCatalan = 0.915965594177219015054603514932384;

namespace detail {

// Lanczos approximation, g = 7, nine terms.  Relative error ~1e-15 on x >= 0.5.
inline constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
inline constexpr double kLanczosG = 7.0;

inline double lanczos_sum(double xm1) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (xm1 + static_cast<double>(i));
  return a;
}

// B_2, B_4, ..., B_16
inline constexpr std::array<double, 8> kBernoulliEven = {
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0};

inline void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError(std::string(name) + ": argument must be a positive finite real, got " + std::to_string(x));
}

}  // namespace detail

/// Gamma function for x > 0.
inline double gamma(double x) {
  detail::require_positive(x, "gamma");
  if (x < 0.5) {
    // reflection keeps the Lanczos sum in its accurate range
    const double xm1 = -x;  // (1 - x) - 1
    const double t = xm1 + detail::kLanczosG + 0.5;
    const double g1mx = std::sqrt(2.0 * kPi) * std::pow(t, xm1 + 0.5) * std::exp(-t) * detail::lanczos_sum(xm1);
    return kPi / (std::sin(kPi * x) * g1mx);
  }
  if (x > 171.0) throw DomainError("gamma: overflow for x > 171");
  const double xm1 = x - 1.0;
  const double t = xm1 + detail::kLanczosG + 0.5;
  // split the power to delay overflow
  const double half = std::pow(t, 0.5 * (xm1 + 0.5));
  return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * detail::lanczos_sum(xm1);
}

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
  detail::require_positive(x, "log_gamma");
  if (x < 0.5) return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
  const double xm1 = x - 1.0;
  const double t = xm1 + detail::kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (xm1 + 0.5) * std::log(t) - t + std::log(detail::lanczos_sum(xm1));
}

/// Digamma psi = Gamma'/Gamma for x > 0.  Upward recurrence to x >= 10, then
/// the asymptotic series through B_16.
inline double digamma(double x) {
  detail::require_positive(x, "digamma");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  double series = 0.0;
  double p = inv2;
  for (std::size_t k = 0; k < detail::kBernoulliEven.size(); ++k) {
    series += detail::kBernoulliEven[k] / (2.0 * static_cast<double>(k + 1)) * p;
    p *= inv2;
  }
  return acc + std::log(x) - 0.5 / x - series;
}

/// Trigamma psi' for x > 0.
inline double trigamma(double x) {
  detail::require_positive(x, "trigamma");
  double acc = 0.0;
  while (x < 10.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double p = inv2 * inv;
  for (double b : detail::kBernoulliEven) {
    series += b * p;
    p *= inv2;
  }
  return acc + inv + 0.5 * inv2 + series;
}

/// Hurwitz zeta sum_{k>=0} (k+a)^{-s} by Euler-Maclaurin summation.  Valid
/// (as the analytic continuation) for s != 1, a > 0, and s > -8.
inline double hurwitz_zeta(double s, double a) {
  detail::require_positive(a, "hurwitz_zeta(a)");
  if (s == 1.0) throw DomainError("hurwitz_zeta: pole at s = 1");
  constexpr int kTerms = 12;
  double sum = 0.0;
  for (int k = 0; k < kTerms; ++k) sum += std::pow(k + a, -s);
  const double m = kTerms + a;
  sum += std::pow(m, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(m, -s);
  // rising factorial s (s+1) ... (s+2j-2) / (2j)!
  double coef = s;
  double fact = 2.0;
  double mp = std::pow(m, -s - 1.0);
  for (std::size_t j = 0; j < detail::kBernoulliEven.size(); ++j) {
    sum += detail::kBernoulliEven[j] / fact * coef * mp;
    const double k2 = 2.0 * static_cast<double>(j + 1);
    coef *= (s + k2 - 1.0) * (s + k2);
    fact *= (k2 + 1.0) * (k2 + 2.0);
    mp /= m * m;
  }
  return sum;
}

/// Riemann zeta on the real line, s != 1.  Negative arguments go through the
/// functional equation.
inline double zeta(double s) {
  if (s == 1.0) throw DomainError("zeta: pole at s = 1");
  if (s >= 0.0) return hurwitz_zeta(s, 1.0);
  if (std::floor(s / 2.0) == s / 2.0) return 0.0;  // trivial zeros
  return std::pow(2.0, s) * std::pow(kPi, s - 1.0) * std::sin(kPi * s / 2.0) * gamma(1.0 - s) * zeta(1.0 - s);
}

/// Dirichlet beta sum (-1)^k (2k+1)^{-s} on the real line.
inline double dirichlet_beta(double s) {
  if (s == 1.0) return kPi / 4.0;
  if (s >= 0.0) return std::pow(4.0, -s) * (hurwitz_zeta(s, 0.25) - hurwitz_zeta(s, 0.75));
  const double odd = (s - 1.0) / 2.0;
  if (std::floor(odd) == odd) return 0.0;  // zeros at negative odd integers
  return std::pow(kPi / 2.0, s - 1.0) * std::cos(kPi * s / 2.0) * gamma(1.0 - s) * dirichlet_beta(1.0 - s);
}

/// Area of the unit sphere S^{n-1} in R^n.
inline double sphere_area(int n) {
  if (n < 1) throw DomainError("sphere_area: n must be >= 1");
  return 2.0 * std::pow(kPi, 0.5 * n) / gamma(0.5 * n);
}

struct ConstantsTable {
  int n = 0;
  double c_n = 0;          // pi^{-n/2} Gamma(n/2) = 2 / omega_{n-1}
  double rho_n = 0;        // 2 ln 2 + psi(n/2) - gamma_E
  double beta_n = 0;       // bubble amplitude 2^{n/2} e^{(n/2) psi(n/2)}
  double lambda_n = 0;     // L^2 norm of the bubble family
  double B_n_printed = 0;  // closed-form Pitt constant; ln_lambda_n - B_n_printed = (n/2) ln 2
  double ln_lambda_n = 0;
  double D_n = 0;  // psi(n/4) - ln pi
  double omega_nm1 = 0;
};

inline ConstantsTable constants_table(int n) {
  if (n < 1) throw DomainError("constants_table: n must be >= 1");
  const double h = 0.5 * n;
  const double psi = digamma(h);
  ConstantsTable t;
  t.n = n;
  t.c_n = std::pow(kPi, -h) * gamma(h);
  t.rho_n = 2.0 * kLn2 + psi - kEulerGamma;
  t.beta_n = std::exp(h * (kLn2 + psi));
  const double log_ratio = log_gamma(h) - log_gamma(static_cast<double>(n));  // ln(Gamma(n/2)/Gamma(n))
  t.ln_lambda_n = std::log(t.beta_n) + 0.25 * n * std::log(kPi) + 0.5 * log_ratio;
  t.lambda_n = std::exp(t.ln_lambda_n);
  t.B_n_printed = h * (psi + 0.5 * std::log(kPi) + log_ratio / n);
  t.D_n = digamma(0.25 * n) - std::log(kPi);
  t.omega_nm1 = sphere_area(n);
  return t;
}

struct FracConstants {
  int n = 0;
  double s = 0;
  double c_ns = 0;        // normalization of the singular integral
  double b_ns = 0;        // amplitude of the critical fractional bubble
  double two_star_s = 0;  // 2n/(n-2s)
  double P0 = 0;          // fundamental-solution constant
  double P1 = 0;          // Hardy-Littlewood-Sobolev sharp constant
};

namespace detail {

// ln Gamma(h + s) - ln Gamma(h - s).  For small |s| the difference of two
// log-gammas cancels, so it is taken as the integral of psi over [h-s, h+s]
// with 5-point Gauss-Legendre.
inline double log_gamma_diff(double h, double s) {
  if (std::abs(s) > 0.02) return log_gamma(h + s) - log_gamma(h - s);
  static constexpr std::array<double, 3> x = {0.0, 0.5384693101056831, 0.9061798459386640};
  static constexpr std::array<double, 3> w = {0.5688888888888889, 0.4786286704993665, 0.2369268850561891};
  double acc = w[0] * digamma(h);
  for (int i = 1; i < 3; ++i) acc += w[i] * (digamma(h + s * x[i]) + digamma(h - s * x[i]));
  return s * acc;
}

// b_{n,s} by its closed form; also used at negative s by the finite-difference
// derivative, where the expression continues analytically.
inline double b_closed_form(int n, double s) {
  const double h = 0.5 * n;
  if (s == 0.0) return std::exp(h * (kLn2 + digamma(h)));
  const double expo = (n - 2.0 * s) / (4.0 * s);
  return std::exp(0.5 * (n - 2.0 * s) * kLn2 + expo * log_gamma_diff(h, s));
}

}  // namespace detail

inline FracConstants frac_constants(int n, double s) {
  if (n < 1) throw DomainError("frac_constants: n must be >= 1");
  if (!(s > 0.0 && s < 0.5)) throw DomainError("frac_constants: s must lie in (0, 1/2)");
  if (!(n > 2.0 * s)) throw DomainError("frac_constants: requires n > 2s");
  const double h = 0.5 * n;
  FracConstants f;
  f.n = n;
  f.s = s;
  f.c_ns = std::exp(2.0 * s * kLn2 - h * std::log(kPi) + std::log(s) + log_gamma(h + s) - log_gamma(1.0 - s));
  f.b_ns = detail::b_closed_form(n, s);
  f.two_star_s = 2.0 * n / (n - 2.0 * s);
  f.P0 = std::pow(kPi, -h) * std::pow(4.0, -s) * std::exp(log_gamma(h - s) - log_gamma(s));
  f.P1 = std::pow(kPi, h - s) * std::exp(log_gamma(s) - log_gamma(h + s) -
                                         (2.0 * s / n) * (log_gamma(h) - log_gamma(static_cast<double>(n))));
  return f;
}

/// s -> 0+ limit of b_{n,s}, by second-order Richardson extrapolation of the
/// closed form at s, 2s and 4s.  b_{n,s} = b_{n,0} + O(s), so a single
/// evaluation at small s is only first-order close.
inline double b_limit(int n, double s = 1e-5) {
  return (8.0 * detail::b_closed_form(n, s) - 6.0 * detail::b_closed_form(n, 2.0 * s) +
          detail::b_closed_form(n, 4.0 * s)) /
         3.0;
}

struct BExpansion {
  double b0 = 0;
  double b1_empirical = 0;
  double b1_printed = 0;
  double gap = 0;
};

/// First-order expansion of b_{n,s} at s = 0.  The derivative is measured
/// (central differences at s in {1e-2, 5e-3, 2.5e-3}, two Richardson passes);
/// the closed form b1_printed = -((n/2) psi'(n/2) + psi(n/2) + ln 2) b0 is carried
/// alongside so the two can be compared.
inline BExpansion b_expansion(int n) {
  if (n < 1) throw DomainError("b_expansion: n must be >= 1");
  const double h = 0.5 * n;
  auto central = [n](double step) {
    return (detail::b_closed_form(n, step) - detail::b_closed_form(n, -step)) / (2.0 * step);
  };
  const double d1 = central(1e-2), d2 = central(5e-3), d3 = central(2.5e-3);
  const double r1 = (4.0 * d2 - d1) / 3.0;
  const double r2 = (4.0 * d3 - d2) / 3.0;
  BExpansion e;
  e.b0 = std::exp(h * (kLn2 + digamma(h)));
  e.b1_empirical = (16.0 * r2 - r1) / 15.0;
  e.b1_printed = -(h * trigamma(h) + digamma(h) + kLn2) * e.b0;
  e.gap = e.b1_empirical - e.b1_printed;
  return e;
}

/// Human-readable closed form for every ConstantsTable field.
inline std::vector<std::pair<std::string, std::string>> constants_formulas() {
  return {
      {"c_n", "pi^{-n/2} Gamma(n/2) = 2/omega_{n-1}"},
      {"rho_n", "2 ln 2 + psi(n/2) - gamma_E"},
      {"beta_n", "2^{n/2} exp((n/2) psi(n/2))"},
      {"lambda_n", "beta_n pi^{n/4} sqrt(Gamma(n/2)/Gamma(n))"},
      {"B_n_printed", "(n/2)(psi(n/2) + ln(pi)/2 - (1/n) ln(Gamma(n)/Gamma(n/2)))"},
      {"ln_lambda_n", "ln(lambda_n)"},
      {"D_n", "psi(n/4) - ln pi"},
      {"omega_nm1", "2 pi^{n/2} / Gamma(n/2)"},
  };
}

}  // namespace loglap
