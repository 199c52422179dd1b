#pragma once

// Evaluable scalar fields on R^n with the metadata the operators need:
// radial symmetry, decay at infinity, singular points and length scales.

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "loglap/errors.hpp"
#include "loglap/point.hpp"
#include "loglap/quadrature.hpp"
#include "loglap/specfun.hpp"

namespace loglap {

/// Behaviour of |u(x)| as |x| -> infinity.
struct Decay {
  enum class Kind { rapid, power, unspecified };
  Kind kind = Kind::unspecified;
  double order = 0.0;  // p in coeff*|x|^{-p}
  double coeff = 0.0;

  static Decay rapid() { return {Kind::rapid, 0.0, 0.0}; }
  static Decay power(double p, double c) {
    if (!(p > 0.0)) throw DomainError("Decay::power: order must be positive");
    return {Kind::power, p, c};
  }
  static Decay unspecified() { return {}; }

  bool is_rapid() const { return kind == Kind::rapid; }
  bool is_power() const { return kind == Kind::power; }
  /// Strictly faster than |x|^{-q}.
  bool faster_than(double q) const { return kind == Kind::rapid || (kind == Kind::power && order > q); }
  std::string to_string() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
      case Kind::rapid: return "rapid";
      case Kind::power: os << "power(" << order << "," << coeff << ")"; return os.str();
      default: return "unspecified";
    }
  }
};

using Profile = std::function<double(double)>;
using PointFunction = std::function<double(const Point&)>;
using GradientFunction = std::function<Point(const Point&)>;

/// Immutable, cheaply copyable handle to a field.
class Field {
 public:
  struct State {
    int dim = 1;
    PointFunction eval;
    GradientFunction gradient;  // empty: finite differences
    std::optional<Point> radial_center;
    Profile profile;             // g with u(x) = g(|x - center|), when radial
    Profile profile_derivative;  // g', may be empty
    Decay decay;
    std::vector<Point> singular_points;
    std::vector<std::optional<double>> singular_limits;  // limit of u at each singular point, if finite
    std::vector<Point> features;                         // where the field varies on scale length_scale
    double length_scale = 1.0;
    std::string description;
  };

  Field() = default;
  explicit Field(State s) : s_(std::make_shared<const State>(std::move(s))) {}

  int dim() const { return s_->dim; }
  bool valid() const { return static_cast<bool>(s_); }

  double operator()(const Point& x) const {
    for (const auto& p : s_->singular_points)
      if (x == p) throw SingularPointError("field '" + s_->description + "' is undefined at " + x.to_string());
    return s_->eval(x);
  }

  bool is_radial() const { return s_->radial_center.has_value(); }
  const std::optional<Point>& radial_center() const { return s_->radial_center; }
  double profile(double r) const { return s_->profile(r); }
  bool has_profile_derivative() const { return static_cast<bool>(s_->profile_derivative); }
  double profile_derivative(double r) const { return s_->profile_derivative(r); }
  bool has_analytic_gradient() const { return static_cast<bool>(s_->gradient); }
  const Decay& decay() const { return s_->decay; }
  const std::vector<Point>& singular_points() const { return s_->singular_points; }
  const std::vector<std::optional<double>>& singular_limits() const { return s_->singular_limits; }
  const std::vector<Point>& features() const { return s_->features; }
  double length_scale() const { return s_->length_scale; }
  const std::string& description() const { return s_->description; }
  const State& state() const { return *s_; }

  /// Limit of u at x: the value if x is regular, the recorded limit at a
  /// singular point, nullopt if that limit is unknown or infinite.
  std::optional<double> limit_at(const Point& x) const {
    for (std::size_t i = 0; i < s_->singular_points.size(); ++i)
      if (s_->singular_points[i] == x) return s_->singular_limits[i];
    return s_->eval(x);
  }

  /// Gradient; analytic when available, else 4th-order central differences
  /// with step 1e-4*(1+|x|).
  Point gradient(const Point& x) const {
    if (s_->gradient) return s_->gradient(x);
    const double h = 1e-4 * (1.0 + x.norm());
    Point g(dim());
    for (int i = 0; i < dim(); ++i) {
      auto at = [&](double k) {
        Point y = x;
        y[i] += k * h;
        return (*this)(y);
      };
      g[i] = (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * h);
    }
    return g;
  }

 private:
  std::shared_ptr<const State> s_;
};

// ---------------------------------------------------------------------------
// construction

namespace detail {

inline Point center_or_origin(const Point& c, int n) {
  if (c.dim() == 0) return Point::zero(n);
  if (c.dim() != n) throw DomainError("center dimension does not match n");
  return c;
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace detail

/// Field radial about `center`: u(x) = g(|x - center|).
inline Field make_radial(int n, Point center, Profile g, Profile dg, Decay decay, double length_scale,
                         std::string description) {
  if (n < 1 || n > Point::kMaxDim) throw DomainError("make_radial: dimension out of range");
  center = detail::center_or_origin(center, n);
  Field::State s;
  s.dim = n;
  s.eval = [g, center](const Point& x) { return g(distance(x, center)); };
  if (dg) {
    s.gradient = [dg, center](const Point& x) {
      Point d = x - center;
      const double r = d.norm();
      if (r == 0.0) return Point::zero(x.dim());
      return (dg(r) / r) * d;
    };
  }
  s.radial_center = center;
  s.profile = std::move(g);
  s.profile_derivative = std::move(dg);
  s.decay = decay;
  s.features = {center};
  s.length_scale = length_scale;
  s.description = std::move(description);
  return Field(std::move(s));
}

/// Field given by an arbitrary evaluator; `gradient` may be empty.
inline Field make_general(int n, PointFunction eval, GradientFunction gradient, Decay decay, std::vector<Point> features,
                          double length_scale, std::string description) {
  if (n < 1 || n > Point::kMaxDim) throw DomainError("make_general: dimension out of range");
  Field::State s;
  s.dim = n;
  s.eval = std::move(eval);
  s.gradient = std::move(gradient);
  s.decay = decay;
  s.features = std::move(features);
  s.length_scale = length_scale;
  s.description = std::move(description);
  return Field(std::move(s));
}

struct BubbleParams {
  int n = 1;
  double t = 1.0;
  Point center;  // empty means the origin
};

struct FracBubbleParams {
  int n = 1;
  double s = 0.25;
  double t = 1.0;
  Point center;
};

/// u(x) = amp * (t/(t^2+|x-c|^2))^{q}
inline Field make_power_bubble(int n, double amp, double q, double t, const Point& center, std::string description) {
  if (!(t > 0.0)) throw DomainError("bubble: t must be positive");
  auto g = [amp, q, t](double r) { return amp * std::pow(t / (t * t + r * r), q); };
  auto dg = [amp, q, t](double r) {
    const double d = t * t + r * r;
    return -2.0 * q * r / d * amp * std::pow(t / d, q);
  };
  return make_radial(n, center, g, dg, Decay::power(2.0 * q, amp * std::pow(t, q)), t, std::move(description));
}

/// beta_n (t/(t^2+|x-c|^2))^{n/2}
inline Field make_bubble(const BubbleParams& p) {
  const Point c = detail::center_or_origin(p.center, p.n);
  const double beta = constants_table(p.n).beta_n;
  return make_power_bubble(p.n, beta, 0.5 * p.n, p.t, c,
                           "bubble{n=" + std::to_string(p.n) + ",t=" + detail::fmt(p.t) + ",center=" + c.to_string() + "}");
}

/// b_{n,s} (t/(t^2+|x-c|^2))^{(n-2s)/2}
inline Field make_frac_bubble(const FracBubbleParams& p) {
  const Point c = detail::center_or_origin(p.center, p.n);
  const double b = frac_constants(p.n, p.s).b_ns;
  return make_power_bubble(p.n, b, 0.5 * p.n - p.s, p.t, c,
                           "fracbubble{n=" + std::to_string(p.n) + ",s=" + detail::fmt(p.s) + ",t=" + detail::fmt(p.t) +
                               ",center=" + c.to_string() + "}");
}

/// amplitude * exp(-|x-c|^2/(2 sigma^2))
inline Field make_gaussian(int n, double sigma, Point center = {}, double amplitude = 1.0) {
  if (!(sigma > 0.0)) throw DomainError("make_gaussian: sigma must be positive");
  center = detail::center_or_origin(center, n);
  const double k = 0.5 / (sigma * sigma);
  auto g = [amplitude, k](double r) { return amplitude * std::exp(-k * r * r); };
  auto dg = [amplitude, k](double r) { return -2.0 * k * r * amplitude * std::exp(-k * r * r); };
  return make_radial(n, center, g, dg, Decay::rapid(), sigma,
                     "gaussian{n=" + std::to_string(n) + ",sigma=" + detail::fmt(sigma) + ",center=" + center.to_string() +
                         ",amp=" + detail::fmt(amplitude) + "}");
}

struct GaussianComponent {
  Point center;
  double sigma = 1.0;
  double weight = 1.0;
};

/// Sum of Gaussians; radial only when it has a single component.
inline Field make_gaussian_mixture(int n, std::vector<GaussianComponent> comps) {
  if (comps.empty()) throw DomainError("make_gaussian_mixture: no components");
  for (auto& c : comps) {
    c.center = detail::center_or_origin(c.center, n);
    if (!(c.sigma > 0.0)) throw DomainError("make_gaussian_mixture: sigma must be positive");
  }
  if (comps.size() == 1) return make_gaussian(n, comps[0].sigma, comps[0].center, comps[0].weight);
  std::string desc = "mixture{";
  std::vector<Point> features;
  double scale = comps[0].sigma;
  for (const auto& c : comps) {
    desc += "(" + c.center.to_string() + "," + detail::fmt(c.sigma) + "," + detail::fmt(c.weight) + ")";
    features.push_back(c.center);
    scale = std::min(scale, c.sigma);
  }
  desc += "}";
  auto eval = [comps](const Point& x) {
    double v = 0.0;
    for (const auto& c : comps) v += c.weight * std::exp(-0.5 * (x - c.center).norm2() / (c.sigma * c.sigma));
    return v;
  };
  auto grad = [comps](const Point& x) {
    Point g(x.dim());
    for (const auto& c : comps) {
      const Point d = x - c.center;
      const double s2 = c.sigma * c.sigma;
      g += (-c.weight * std::exp(-0.5 * d.norm2() / s2) / s2) * d;
    }
    return g;
  };
  return make_general(n, eval, grad, Decay::rapid(), std::move(features), scale, std::move(desc));
}

/// u(x) = c everywhere.
inline Field make_constant(int n, double c) {
  return make_radial(
      n, Point::zero(n), [c](double) { return c; }, [](double) { return 0.0; }, Decay::unspecified(), 1.0,
      "constant{" + detail::fmt(c) + "}");
}

/// u(x) = |x - center|^2.
inline Field make_quadratic(int n, Point center = {}) {
  center = detail::center_or_origin(center, n);
  return make_radial(
      n, center, [](double r) { return r * r; }, [](double r) { return 2.0 * r; }, Decay::unspecified(), 1.0,
      "quadratic{center=" + center.to_string() + "}");
}

// ---------------------------------------------------------------------------
// transforms

/// x -> l^{-n/2} u(x/l)
inline Field scale_field(const Field& u, double l) {
  if (!(l > 0.0)) throw DomainError("scale_field: l must be positive");
  const int n = u.dim();
  const double amp = std::pow(l, -0.5 * n);
  const auto& su = u.state();
  Field::State s;
  s.dim = n;
  s.eval = [u, l, amp](const Point& x) { return amp * u((1.0 / l) * x); };
  if (su.gradient) s.gradient = [u, l, amp](const Point& x) { return (amp / l) * u.gradient((1.0 / l) * x); };
  if (su.radial_center) {
    s.radial_center = l * *su.radial_center;
    s.profile = [g = su.profile, l, amp](double r) { return amp * g(r / l); };
    if (su.profile_derivative)
      s.profile_derivative = [dg = su.profile_derivative, l, amp](double r) { return amp / l * dg(r / l); };
  }
  s.decay = su.decay;
  if (su.decay.is_power()) s.decay.coeff = su.decay.coeff * amp * std::pow(l, su.decay.order);
  for (const auto& p : su.singular_points) s.singular_points.push_back(l * p);
  for (const auto& v : su.singular_limits) s.singular_limits.push_back(v ? std::optional<double>(amp * *v) : std::nullopt);
  for (const auto& p : su.features) s.features.push_back(l * p);
  s.length_scale = su.length_scale * l;
  s.description = "scale{" + detail::fmt(l) + "}(" + su.description + ")";
  return Field(std::move(s));
}

/// x -> u(x + x0)
inline Field translate_field(const Field& u, const Point& x0) {
  if (x0.dim() != u.dim()) throw DomainError("translate_field: dimension mismatch");
  const auto& su = u.state();
  Field::State s = su;
  s.eval = [u, x0](const Point& x) { return u(x + x0); };
  if (su.gradient) s.gradient = [u, x0](const Point& x) { return u.gradient(x + x0); };
  if (su.radial_center) s.radial_center = *su.radial_center - x0;
  for (auto& p : s.singular_points) p -= x0;
  for (auto& p : s.features) p -= x0;
  s.description = "translate{" + x0.to_string() + "}(" + su.description + ")";
  return Field(std::move(s));
}

/// x -> a u(x)
inline Field multiply_field(const Field& u, double a) {
  const auto& su = u.state();
  Field::State s = su;
  s.eval = [u, a](const Point& x) { return a * u(x); };
  if (su.gradient) s.gradient = [u, a](const Point& x) { return a * u.gradient(x); };
  if (su.profile) s.profile = [g = su.profile, a](double r) { return a * g(r); };
  if (su.profile_derivative) s.profile_derivative = [dg = su.profile_derivative, a](double r) { return a * dg(r); };
  if (s.decay.is_power()) s.decay.coeff *= a;
  for (auto& v : s.singular_limits)
    if (v) *v *= a;
  s.description = "multiply{" + detail::fmt(a) + "}(" + su.description + ")";
  return Field(std::move(s));
}

/// Inversion point x^{*,r} = center + r^2 (x - center)/|x - center|^2.
inline Point kelvin_point(const Point& x, const Point& center, double r) {
  const Point d = x - center;
  return center + (r * r / d.norm2()) * d;
}

/// u^#(x) = (r/|x - center|)^n u(x^{*,r})
inline Field kelvin_transform(const Field& u, const Point& center, double r) {
  if (!(r > 0.0)) throw DomainError("kelvin_transform: r must be positive");
  if (center.dim() != u.dim()) throw DomainError("kelvin_transform: dimension mismatch");
  const int n = u.dim();
  const auto& su = u.state();
  Field::State s;
  s.dim = n;
  s.eval = [u, center, r, n](const Point& x) {
    const Point d = x - center;
    const double rho2 = d.norm2();
    if (rho2 == 0.0) throw SingularPointError("kelvin transform evaluated at its center");
    return std::pow(r * r / rho2, 0.5 * n) * u(center + (r * r / rho2) * d);
  };

  if (su.radial_center && *su.radial_center == center) {
    const Profile g = su.profile;
    s.radial_center = center;
    s.profile = [g, r, n](double rho) { return std::pow(r / rho, n) * g(r * r / rho); };
    if (su.profile_derivative) {
      s.profile_derivative = [g, dg = su.profile_derivative, r, n](double rho) {
        const double w = std::pow(r / rho, n);
        const double y = r * r / rho;
        return -n / rho * w * g(y) - w * dg(y) * y / rho;
      };
      s.gradient = [dG = s.profile_derivative, center](const Point& x) {
        Point d = x - center;
        const double rho = d.norm();
        return (dG(rho) / rho) * d;
      };
    }
  }

  // behaviour at infinity comes from u at the center, and vice versa
  const auto at_center = u.limit_at(center);
  s.decay = at_center ? Decay::power(n, std::pow(r, n) * *at_center) : Decay::unspecified();

  std::optional<double> limit;
  switch (su.decay.kind) {
    case Decay::Kind::rapid: limit = 0.0; break;
    case Decay::Kind::power:
      if (su.decay.order > n) limit = 0.0;
      else if (su.decay.order == n) limit = su.decay.coeff * std::pow(r, -n);
      break;
    default: break;
  }
  s.singular_points.push_back(center);
  s.singular_limits.push_back(limit);
  for (std::size_t i = 0; i < su.singular_points.size(); ++i) {
    const auto& p = su.singular_points[i];
    if (p == center) continue;
    s.singular_points.push_back(kelvin_point(p, center, r));
    s.singular_limits.push_back(std::nullopt);
  }

  s.features.push_back(center);
  double scale = std::numeric_limits<double>::infinity();
  const double l = su.length_scale;
  for (const auto& f : su.features) {
    const double d2 = (f - center).norm2();
    if (d2 > 0.0) s.features.push_back(kelvin_point(f, center, r));
    scale = std::min(scale, r * r * l / (d2 + l * l));
  }
  s.length_scale = std::isfinite(scale) ? scale : r;
  s.description = "kelvin{center=" + center.to_string() + ",r=" + detail::fmt(r) + "}(" + su.description + ")";
  return Field(std::move(s));
}

/// x -> x . grad u(x)
inline Field x_dot_grad(const Field& u) {
  const auto& su = u.state();
  const int n = u.dim();
  Field::State s;
  s.dim = n;
  s.eval = [u](const Point& x) { return dot(x, u.gradient(x)); };
  if (su.radial_center && *su.radial_center == Point::zero(n) && su.profile_derivative) {
    s.radial_center = Point::zero(n);
    s.profile = [dg = su.profile_derivative](double r) { return r * dg(r); };
  }
  s.decay = su.decay;
  if (su.decay.is_power()) s.decay.coeff = -su.decay.order * su.decay.coeff;
  s.singular_points = su.singular_points;
  s.singular_limits.assign(su.singular_points.size(), std::nullopt);
  s.features = su.features;
  s.length_scale = su.length_scale;
  s.description = "xgrad(" + su.description + ")";
  return Field(std::move(s));
}

// ---------------------------------------------------------------------------
// spherical means

namespace detail {

inline void check_sphere(const Field& u, const Point& x, double r) {
  const double slack = 1e-14 * (r + x.norm());
  for (const auto& p : u.singular_points()) {
    const double d = distance(x, p);
    if (std::abs(d - r) <= slack)
      throw SingularPointError("sphere |y - " + x.to_string() + "| = " + std::to_string(r) +
                               " passes through a singular point of '" + u.description() + "'");
  }
}

// Successive doubling until two orders agree to 1e-12 of the L1 size.
template <class Rule>
double doubling(Rule&& rule, int first, int last) {
  auto [prev, prev_abs] = rule(first);
  for (int order = 2 * first; order <= last; order *= 2) {
    auto [cur, cur_abs] = rule(order);
    if (std::abs(cur - prev) <= 1e-12 * std::max(cur_abs, 1e-300)) return cur;
    prev = cur;
    prev_abs = cur_abs;
  }
  return prev;
}

// Mean of g(|y - c|) over |y - x| = r when |x - c| = d.  For n >= 2 the polar
// angle is measured from the direction away from c, phi = pi - theta, so that
// |y - c|^2 = (d - r)^2 + 4 d r sin^2(phi/2) is computed without cancellation.
// g varies on `scale`, i.e. over phi ~ scale/sqrt(d r); panels are graded
// geometrically away from phi = 0.
inline double radial_sphere_mean(const Profile& g, int n, double d, double r, double scale) {
  if (n == 1) return 0.5 * (g(std::abs(d + r)) + g(std::abs(d - r)));
  if (d == 0.0) return g(r);
  const double dm2 = (d - r) * (d - r);
  const double four_dr = 4.0 * d * r;
  // omega_{n-2}/omega_{n-1}
  const double norm = std::exp(log_gamma(0.5 * n) - log_gamma(0.5 * (n - 1))) / std::sqrt(kPi);

  std::vector<double> edges{0.0};
  const double tau = scale / std::sqrt(d * r);
  for (double phi = tau; phi < 0.5 * kPi; phi *= 4.0) edges.push_back(phi);
  edges.push_back(kPi);

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double a = edges[k], b = edges[k + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    auto rule = [&](int order) {
      const auto& gl = gauss_legendre(order);
      double sum = 0.0, sum_abs = 0.0;
      for (int i = 0; i < order; ++i) {
        const double phi = mid + half * gl.nodes[i];
        const double sh = std::sin(0.5 * phi);
        double w = gl.weights[i];
        if (n > 2) w *= std::pow(std::sin(phi), n - 2);
        const double v = g(std::sqrt(dm2 + four_dr * sh * sh));
        sum += w * v;
        sum_abs += w * std::abs(v);
      }
      return std::pair{half * sum, half * sum_abs};
    };
    total += doubling(rule, edges.size() > 2 ? 16 : 64, 4096);
  }
  return norm * total;
}

}  // namespace detail

/// Average of u over the sphere {|y - x| = r}.
inline double spherical_mean(const Field& u, const Point& x, double r) {
  const int n = u.dim();
  if (x.dim() != n) throw DomainError("spherical_mean: dimension mismatch");
  if (!(r >= 0.0)) throw DomainError("spherical_mean: radius must be nonnegative");
  if (r == 0.0) return u(x);
  detail::check_sphere(u, x, r);
  if (u.is_radial()) return detail::radial_sphere_mean(u.state().profile, n, distance(x, *u.radial_center()), r, u.length_scale());
  if (n == 1) {
    Point a = x, b = x;
    a[0] += r;
    b[0] -= r;
    return 0.5 * (u(a) + u(b));
  }
  if (n == 2) {
    auto rule = [&](int order) {
      double sum = 0.0, sum_abs = 0.0;
      for (int i = 0; i < order; ++i) {
        const double phi = 2.0 * kPi * (i + 0.5) / order;
        Point y = x;
        y[0] += r * std::cos(phi);
        y[1] += r * std::sin(phi);
        const double v = u(y);
        sum += v;
        sum_abs += std::abs(v);
      }
      return std::pair{sum / order, sum_abs / order};
    };
    return detail::doubling(rule, 64, 4096);
  }
  if (n == 3) {
    auto rule = [&](int order) {
      const auto& gl = gauss_legendre(order);
      const int nphi = 2 * order;
      double sum = 0.0, sum_abs = 0.0;
      for (int i = 0; i < order; ++i) {
        const double mu = gl.nodes[i];
        const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        for (int j = 0; j < nphi; ++j) {
          const double phi = 2.0 * kPi * (j + 0.5) / nphi;
          Point y = x;
          y[0] += r * st * std::cos(phi);
          y[1] += r * st * std::sin(phi);
          y[2] += r * mu;
          const double v = u(y);
          sum += gl.weights[i] * v;
          sum_abs += gl.weights[i] * std::abs(v);
        }
      }
      return std::pair{0.5 * sum / nphi, 0.5 * sum_abs / nphi};
    };
    return detail::doubling(rule, 32, 256);
  }
  throw DomainError("spherical_mean: non-radial fields are supported only for n <= 3");
}

}  // namespace loglap
