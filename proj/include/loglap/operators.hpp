#pragma once

// Quadrature path for L_Delta and (-Delta)^s: the n-dimensional singular
// integrals reduce to one-dimensional integrals of spherical means, because
// c_n * omega_{n-1} = 2.  Also the integral functionals used by the identity
// suites.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "loglap/errors.hpp"
#include "loglap/field.hpp"
#include "loglap/quadrature.hpp"
#include "loglap/specfun.hpp"

namespace loglap {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double r_min = 1e-6;     // inner cutoff of the near-field integral
  double rho_min = 1e-8;   // cutoff of the inverted tail variable
  int max_subdivisions = 2000;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("QuadratureSpec: tolerances must be positive");
    if (!(r_min > 0.0 && r_min < 1.0)) throw DomainError("QuadratureSpec: r_min must lie in (0,1)");
    if (!(rho_min > 0.0 && rho_min < 1.0)) throw DomainError("QuadratureSpec: rho_min must lie in (0,1)");
    if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be positive");
  }
};

namespace detail {

inline void add_feature_radii(std::vector<double>& radii, double d, double w) {
  for (double k : {0.0, 1.0, -1.0, 4.0, -4.0}) radii.push_back(d + k * w);
}

// Radii r at which M(x, r) changes character: spheres through the centers and
// singular points of u, widened by the length scale.
inline std::vector<double> sphere_breakpoints(const Field& u, const Point& x) {
  std::vector<double> radii;
  const double w = u.length_scale();
  if (u.is_radial()) add_feature_radii(radii, distance(x, *u.radial_center()), w);
  for (const auto& f : u.features()) add_feature_radii(radii, distance(x, f), w);
  for (const auto& p : u.singular_points()) radii.push_back(distance(x, p));
  return radii;
}

inline double feature_extent(const Field& u) {
  double ext = u.length_scale();
  if (u.is_radial()) ext = std::max(ext, u.radial_center()->norm() + u.length_scale());
  for (const auto& f : u.features()) ext = std::max(ext, f.norm() + u.length_scale());
  for (const auto& p : u.singular_points()) ext = std::max(ext, p.norm());
  return ext;
}

// [a, b] with decade splits and the given interior points.
inline std::vector<double> decade_points(double a, double b, std::vector<double> interior) {
  for (double p = a * 10.0; p < b; p *= 10.0) interior.push_back(p);
  return make_breakpoints(a, b, std::move(interior));
}

inline void require_decay(const Field& u) {
  if (u.decay().kind == Decay::Kind::unspecified)
    throw DomainError("operator evaluation needs decay metadata; field '" + u.description() + "' has none");
}

// Runs `pieces(abs, rel)` and retries once with a budget derived from the
// first value when cancellation between pieces ate the relative tolerance.
template <class Pieces>
Estimate within_budget(Pieces&& pieces, const QuadratureSpec& q, const std::string& what) {
  Estimate e = pieces(0.25 * q.abs_tol, 0.25 * q.rel_tol);
  double budget = std::max(q.abs_tol, q.rel_tol * std::abs(e.value));
  if (e.error <= budget) {
    e.converged = true;
    return e;
  }
  e = pieces(0.125 * budget, 1e-300);
  budget = std::max(q.abs_tol, q.rel_tol * std::abs(e.value));
  if (e.error <= budget) {
    e.converged = true;
    return e;
  }
  std::ostringstream os;
  os.precision(3);
  os << what << ": error budget not met (achieved " << e.error << ", requested " << budget << ")";
  throw AccuracyError(os.str(), e.error, budget);
}

}  // namespace detail

/// L_Delta u(x) = 2 int_0^1 (u(x) - M(x,r))/r dr - 2 int_0^1 M(x,1/rho)/rho drho + rho_n u(x).
inline Estimate loglap_point(const Field& u, const Point& x, const QuadratureSpec& q = {}) {
  q.validate();
  detail::require_decay(u);
  const int n = u.dim();
  if (x.dim() != n) throw DomainError("loglap_point: dimension mismatch");
  const double ux = u(x);
  const double rho_n = constants_table(n).rho_n;
  const auto radii = detail::sphere_breakpoints(u, x);
  const double rho_eff = q.rho_min / (1.0 + x.norm() + detail::feature_extent(u));

  std::vector<double> inner, outer;
  for (double r : radii) {
    if (r > q.r_min && r < 1.0) inner.push_back(r);
    if (r > 1.0) outer.push_back(1.0 / r);
  }
  const auto near_pts = detail::decade_points(q.r_min, 1.0, inner);
  const auto far_pts = detail::decade_points(rho_eff, 1.0, outer);

  // (0, r_min): u - M ~ a r^2, so the piece is (u - M(r_min))/2
  const double near_rest = 0.5 * (ux - spherical_mean(u, x, q.r_min));
  const double rest_err = std::abs(near_rest) * std::min(1.0, std::pow(q.r_min / u.length_scale(), 2)) +
                          8.0 * std::numeric_limits<double>::epsilon() * std::abs(ux);
  // (0, rho_eff): M(x, 1/rho) ~ c rho^p
  double tail = 0.0;
  if (u.decay().is_power()) tail = u.decay().coeff * std::pow(rho_eff, u.decay().order) / u.decay().order;

  auto pieces = [&](double abs_tol, double rel_tol) {
    AdaptiveOptions opt{abs_tol, rel_tol, q.max_subdivisions};
    Estimate near = integrate_adaptive([&](double r) { return (ux - spherical_mean(u, x, r)) / r; }, near_pts, opt);
    Estimate far = integrate_adaptive([&](double rho) { return spherical_mean(u, x, 1.0 / rho) / rho; }, far_pts, opt);
    Estimate total = 2.0 * near + (-2.0) * far;
    total.value += 2.0 * near_rest - 2.0 * tail + rho_n * ux;
    total.error += 2.0 * rest_err + 2.0 * std::abs(tail) * 1e-6;
    return total;
  };
  return detail::within_budget(pieces, q, "loglap_point at " + x.to_string());
}

/// (-Delta)^s u(x) = c_{n,s} omega_{n-1} [ int_0^1 (u - M(x,r)) r^{-1-2s} dr
///                                        + int_0^1 (u - M(x,1/rho)) rho^{2s-1} drho ]
inline Estimate fraclap_point(const Field& u, const Point& x, double s, const QuadratureSpec& q = {}) {
  q.validate();
  detail::require_decay(u);
  const int n = u.dim();
  if (x.dim() != n) throw DomainError("fraclap_point: dimension mismatch");
  const auto fc = frac_constants(n, s);
  const double pref = fc.c_ns * sphere_area(n);
  const double ux = u(x);
  const auto radii = detail::sphere_breakpoints(u, x);
  const double rho_eff = q.rho_min / (1.0 + x.norm() + detail::feature_extent(u));

  std::vector<double> inner, outer;
  for (double r : radii) {
    if (r > q.r_min && r < 1.0) inner.push_back(r);
    if (r > 1.0) outer.push_back(1.0 / r);
  }
  const auto near_pts = detail::decade_points(q.r_min, 1.0, inner);
  const auto far_pts = detail::decade_points(rho_eff, 1.0, outer);

  const double near_rest = (ux - spherical_mean(u, x, q.r_min)) * std::pow(q.r_min, -2.0 * s) / (2.0 - 2.0 * s);
  const double rest_err = std::abs(near_rest) * std::min(1.0, std::pow(q.r_min / u.length_scale(), 2)) +
                          8.0 * std::numeric_limits<double>::epsilon() * std::abs(ux) * std::pow(q.r_min, -2.0 * s);
  double tail = 0.0;
  if (u.decay().is_power()) {
    const double e = u.decay().order + 2.0 * s;
    tail = u.decay().coeff * std::pow(rho_eff, e) / e;
  }

  auto pieces = [&](double abs_tol, double rel_tol) {
    AdaptiveOptions opt{abs_tol / pref, rel_tol, q.max_subdivisions};
    Estimate near = integrate_adaptive(
        [&](double r) { return (ux - spherical_mean(u, x, r)) * std::pow(r, -1.0 - 2.0 * s); }, near_pts, opt);
    Estimate far = integrate_adaptive(
        [&](double rho) { return spherical_mean(u, x, 1.0 / rho) * std::pow(rho, 2.0 * s - 1.0); }, far_pts, opt);
    Estimate total = near + (-1.0) * far;
    total.value += near_rest + ux / (2.0 * s) - tail;
    total.error += rest_err + std::abs(tail) * 1e-6;
    return pref * total;
  };
  return detail::within_budget(pieces, q, "fraclap_point at " + x.to_string());
}

// ---------------------------------------------------------------------------
// integral functionals

struct FunctionalKind {
  enum class Tag { L2SQ, ENTROPY, FINT, UFU, POHOZAEV_LHS, ENERGY, LPOW };
  Tag tag = Tag::L2SQ;
  double k = 0.0;  // FINT/UFU coefficient, LPOW exponent

  static FunctionalKind l2sq() { return {Tag::L2SQ, 0.0}; }
  static FunctionalKind entropy() { return {Tag::ENTROPY, 0.0}; }
  static FunctionalKind fint(double k) { return {Tag::FINT, k}; }
  static FunctionalKind ufu(double k) { return {Tag::UFU, k}; }
  static FunctionalKind pohozaev_lhs() { return {Tag::POHOZAEV_LHS, 0.0}; }
  static FunctionalKind energy() { return {Tag::ENERGY, 0.0}; }
  static FunctionalKind lpow(double q) { return {Tag::LPOW, q}; }

  bool nested() const { return tag == Tag::POHOZAEV_LHS || tag == Tag::ENERGY; }

  std::string name() const {
    std::ostringstream os;
    switch (tag) {
      case Tag::L2SQ: return "L2SQ";
      case Tag::ENTROPY: return "ENTROPY";
      case Tag::FINT: os << "FINT(" << k << ")"; return os.str();
      case Tag::UFU: os << "UFU(" << k << ")"; return os.str();
      case Tag::POHOZAEV_LHS: return "POHOZAEV_LHS";
      case Tag::ENERGY: return "ENERGY";
      case Tag::LPOW: os << "LPOW(" << k << ")"; return os.str();
    }
    return "?";
  }
};

/// t^2 ln|t|, extended by 0 at t = 0.
inline double t2_log_t(double t) { return t == 0.0 ? 0.0 : t * t * std::log(std::abs(t)); }

/// F_k(t) = k (t^2/2 ln|t| - t^2/4)
inline double F_k(double k, double t) { return k * (0.5 * t2_log_t(t) - 0.25 * t * t); }

namespace detail {

// omega * int_R^infty r^{n-1} Phi(c r^{-p}) dr for the local (non-nested) kinds.
inline double analytic_functional_tail(const FunctionalKind& kind, const Decay& d, int n, double R) {
  if (d.is_rapid()) return 0.0;
  const double omega = sphere_area(n);
  const double c = d.coeff, p = d.order;
  if (c == 0.0) return 0.0;
  if (kind.tag == FunctionalKind::Tag::LPOW) {
    const double a = p * kind.k - n;
    return omega * std::pow(std::abs(c), kind.k) * std::pow(R, -a) / a;
  }
  const double a = 2.0 * p - n;
  const double Ra = std::pow(R, -a);
  const double sq = omega * c * c * Ra / a;
  const double ent = omega * c * c * (std::log(std::abs(c)) * Ra / a - p * Ra * (std::log(R) / a + 1.0 / (a * a)));
  switch (kind.tag) {
    case FunctionalKind::Tag::L2SQ: return sq;
    case FunctionalKind::Tag::ENTROPY: return ent;
    case FunctionalKind::Tag::FINT: return kind.k * (0.5 * ent - 0.25 * sq);
    case FunctionalKind::Tag::UFU: return kind.k * ent;
    default: return 0.0;
  }
}

// int_0^{rho_e} h by a power law through h(rho_e) and h(2 rho_e).
inline Estimate power_law_tail(const std::function<double(double)>& h, double rho_e) {
  const double h1 = h(rho_e), h2 = h(2.0 * rho_e);
  if (h1 == 0.0 && h2 == 0.0) return {};
  if (h1 == 0.0 || (h1 > 0.0) != (h2 > 0.0)) return {0.0, std::abs(h1 * rho_e) + std::abs(h2 * rho_e), 2, true};
  const double a = std::log2(h2 / h1);
  if (!(a > -1.0)) throw DomainError("integrate: integrand is not integrable at infinity");
  const double v = h1 * rho_e / (a + 1.0);
  return {v, 0.1 * std::abs(v), 2, true};
}

}  // namespace detail

/// Integral of a functional of u over R^n.  Radial fields are integrated
/// along a ray about their center (any n); non-radial fields only for n = 1.
/// The nested kinds evaluate L_Delta u by loglap_point at every node and use
/// outer tolerances 100x looser than q so inner noise cannot stall them.
inline Estimate integrate(const FunctionalKind& kind, const Field& u, const QuadratureSpec& q = {}) {
  q.validate();
  using Tag = FunctionalKind::Tag;
  const int n = u.dim();
  const Decay& d = u.decay();
  const double need = (kind.tag == Tag::LPOW) ? n / kind.k : 0.5 * n;
  if (kind.tag == Tag::LPOW && !(kind.k > 0.0)) throw DomainError("integrate: LPOW exponent must be positive");
  if (!d.faster_than(need))
    throw DomainError("integrate " + kind.name() + ": field '" + u.description() + "' does not decay fast enough");
  if (!u.is_radial() && n != 1) throw DomainError("integrate: non-radial fields are supported only for n = 1");

  // origin of the ray(s)
  Point c0 = u.is_radial() ? *u.radial_center() : (u.features().empty() ? Point::zero(n) : u.features().front());
  const double omega = u.is_radial() ? sphere_area(n) : 1.0;

  auto phi = [&](const Point& x, double radial_deriv) -> double {
    const double v = u(x);
    switch (kind.tag) {
      case Tag::L2SQ: return v * v;
      case Tag::ENTROPY: return t2_log_t(v);
      case Tag::FINT: return F_k(kind.k, v);
      case Tag::UFU: return kind.k * t2_log_t(v);
      case Tag::LPOW: return std::pow(std::abs(v), kind.k);
      case Tag::ENERGY: return loglap_point(u, x, q).value * v;
      case Tag::POHOZAEV_LHS: return loglap_point(u, x, q).value * radial_deriv;
    }
    return 0.0;
  };

  // h(r) = omega r^{n-1} Phi(u(c0 + r e)) summed over the ray directions
  auto h = [&](double r) {
    if (u.is_radial()) {
      const Point x = c0 + Point::on_axis(n, r);
      double rd = 0.0;
      if (kind.tag == Tag::POHOZAEV_LHS) rd = u.has_profile_derivative() ? r * u.profile_derivative(r) : dot(x - c0, u.gradient(x));
      return omega * std::pow(r, n - 1) * phi(x, rd);
    }
    double acc = 0.0;
    for (double sgn : {1.0, -1.0}) {
      Point x = c0;
      x[0] += sgn * r;
      double rd = 0.0;
      if (kind.tag == Tag::POHOZAEV_LHS) rd = dot(x, u.gradient(x));
      acc += phi(x, rd);
    }
    return acc;
  };

  const double w = u.length_scale();
  std::vector<double> radii;
  for (const auto& f : u.features()) detail::add_feature_radii(radii, distance(f, c0), w);
  for (const auto& p : u.singular_points()) radii.push_back(distance(p, c0));
  double R0 = 8.0 * w;
  for (double r : radii) R0 = std::max(R0, r + 4.0 * w);
  const double rho_e = q.rho_min / R0;

  std::vector<double> inner{w, 2.0 * w, 4.0 * w}, outer;
  for (double r : radii) {
    if (r > 0.0 && r < R0) inner.push_back(r);
    if (r > R0) outer.push_back(1.0 / r);
  }
  for (double r = w * 1e-3; r < w; r *= 10.0) inner.push_back(r);
  const auto near_pts = make_breakpoints(0.0, R0, inner);
  const auto far_pts = detail::decade_points(rho_e, 1.0 / R0, outer);
  auto g = [&](double rho) { return h(1.0 / rho) / (rho * rho); };

  AdaptiveOptions opt{q.abs_tol, q.rel_tol, q.max_subdivisions};
  if (kind.nested()) {
    opt.abs_tol *= 1e3;
    opt.rel_tol *= 1e2;
  }
  Estimate near = integrate_adaptive(h, near_pts, opt);
  Estimate far = integrate_adaptive(g, far_pts, opt);
  Estimate tail;
  if (kind.nested()) {
    tail = detail::power_law_tail(g, rho_e);
  } else {
    tail.value = detail::analytic_functional_tail(kind, d, n, 1.0 / rho_e);
    tail.error = 1e-6 * std::abs(tail.value);
  }
  Estimate total = near + far + tail;
  const double budget = std::max(opt.abs_tol, opt.rel_tol * std::abs(total.value));
  if (!total.converged && total.error > budget) {
    std::ostringstream os;
    os << "integrate " << kind.name() << ": error budget not met (achieved " << total.error << ")";
    throw AccuracyError(os.str(), total.error, budget);
  }
  total.converged = true;
  return total;
}

// ---------------------------------------------------------------------------
// small-s expansion

struct ExpansionResult {
  std::vector<double> s_values;
  std::vector<double> errors;  // E(s)
  double slope = 0.0;          // least-squares slope of log E against log s
};

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("loglog_slope: need at least two pairs");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

/// E(s) = max_x |(-Delta)^s u_s(x) - u0(x) - s (L_Delta u0(x) + u1(x))| for each s,
/// and the fitted order of E in s.
inline ExpansionResult expansion_order(const std::function<Field(double)>& family, const std::vector<Point>& x_points,
                                       const std::vector<double>& s_list, const Field& u0, const Field& u1,
                                       const QuadratureSpec& q = {}) {
  if (s_list.size() < 2) throw DomainError("expansion_order: need at least two values of s");
  for (std::size_t i = 0; i < s_list.size(); ++i) {
    if (!(s_list[i] > 0.0 && s_list[i] < 0.5)) throw DomainError("expansion_order: s must lie in (0, 1/2)");
    if (i && !(s_list[i] < s_list[i - 1])) throw DomainError("expansion_order: s_list must be decreasing");
  }
  std::vector<double> base(x_points.size());
  for (std::size_t j = 0; j < x_points.size(); ++j) base[j] = loglap_point(u0, x_points[j], q).value + u1(x_points[j]);
  ExpansionResult out;
  for (double s : s_list) {
    const Field us = family(s);
    double worst = 0.0;
    for (std::size_t j = 0; j < x_points.size(); ++j) {
      const Point& x = x_points[j];
      const double e = std::abs(fraclap_point(us, x, s, q).value - u0(x) - s * base[j]);
      worst = std::max(worst, e);
    }
    out.s_values.push_back(s);
    out.errors.push_back(worst);
  }
  out.slope = loglog_slope(out.s_values, out.errors);
  return out;
}

}  // namespace loglap
