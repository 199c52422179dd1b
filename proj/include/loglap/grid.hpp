#pragma once

// Fourier-symbol path: sample on a periodic grid over [-L, L)^n, multiply the
// DFT by 2 ln|xi| (or |xi|^{2s}) and transform back.  The symbol is singular
// at xi = 0, so the default treats the modes next to the origin with
// corrected trapezoid weights (Navot's zeta-function expansion) instead of
// assigning an arbitrary value to the zero mode.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "loglap/errors.hpp"
#include "loglap/field.hpp"
#include "loglap/specfun.hpp"

namespace loglap {

struct ZeroMode {
  enum class Kind { corrected, exclude, assign };
  Kind kind = Kind::corrected;
  double value = 0.0;

  static ZeroMode corrected() { return {}; }
  static ZeroMode exclude() { return {Kind::exclude, 0.0}; }
  static ZeroMode assign(double v) { return {Kind::assign, v}; }

  std::string to_string() const {
    switch (kind) {
      case Kind::corrected: return "corrected";
      case Kind::exclude: return "exclude";
      default: {
        std::ostringstream os;
        os.precision(17);
        os << "assign(" << value << ")";
        return os.str();
      }
    }
  }
};

struct GridSpec {
  int n = 1;
  double L = 20.0;
  int N = 0;  // 0 picks 4096 for n = 1 and 512 for n = 2
  ZeroMode zero_mode;

  int points() const { return N > 0 ? N : (n == 1 ? 4096 : 512); }
  double h() const { return 2.0 * L / points(); }
  /// spacing of the dual lattice
  double dxi() const { return kPi / L; }
  std::size_t size() const { return n == 1 ? points() : static_cast<std::size_t>(points()) * points(); }

  void validate() const {
    if (n != 1 && n != 2) throw DomainError("GridSpec: n must be 1 or 2");
    if (!(L > 0.0)) throw DomainError("GridSpec: L must be positive");
    const int m = points();
    if (m < 16 || (m & (m - 1)) != 0) throw DomainError("GridSpec: N must be a power of two >= 16");
  }
};

/// Field values on the grid x_j = -L + j h (row-major, last axis fastest).
struct GridSamples {
  GridSpec spec;
  std::vector<double> values;
  double boundary_ratio = 0.0;  // max |boundary sample| / max |sample|
  std::vector<std::string> warnings;

  double coordinate(int j) const { return -spec.L + j * spec.h(); }
};

struct GridResult {
  GridSpec spec;
  std::vector<double> values;                      // real part of the output on the grid
  std::vector<std::complex<double>> multiplied;    // symbol * DFT(u), FFT ordering
  double max_imag = 0.0;
  double boundary_ratio = 0.0;
  std::vector<std::string> warnings;

  /// Trigonometric interpolation of the output at an arbitrary point.
  double at(const Point& x) const;
};

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex mu;
  return mu;
}

// DFT in place; sign -1 forward, +1 backward (unnormalized).  FFTW_ESTIMATE
// keeps plans, and so results, independent of timing.
inline void fft(std::vector<std::complex<double>>& data, int n, int m, int sign) {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = n == 1 ? fftw_plan_dft_1d(m, p, p, sign, FFTW_ESTIMATE) : fftw_plan_dft_2d(m, m, p, p, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

inline int signed_index(int k, int m) { return k < m / 2 ? k : k - m; }

inline constexpr double kZetaPrimeM2 = -0.0304484570583932707802515;  // zeta'(-2)
inline constexpr double kZetaPrimeM4 = 0.00798381145026862428;        // zeta'(-4)

// Trapezoid corrections for int ln|xi| phi(xi) dxi on a lattice of spacing d:
// weight at the origin and additive weights on its neighbours.
struct LogWeights {
  double w0;
  double w1;
  double w2;  // n = 1 only
};

inline LogWeights log_weights(int n, double d) {
  if (n == 1) {
    const double w2 = (kZetaPrimeM4 - kZetaPrimeM2) / 12.0;
    const double w1 = kZetaPrimeM2 - 4.0 * w2;
    return {std::log(d) - std::log(2.0 * kPi) - 2.0 * w1 - 2.0 * w2, w1, w2};
  }
  // Epstein zeta of the square lattice Z(z) = 4 zeta(z) beta(z)
  const double beta_prime0 = std::log(std::pow(gamma(0.25), 2) / (2.0 * kPi * std::sqrt(2.0)));
  const double z_prime0 = -std::log(2.0 * kPi) - 2.0 * beta_prime0;
  const double z_prime_m1 = -(2.0 * kCatalan / kPi) / 3.0;
  const double w1 = z_prime_m1 / 8.0;
  return {std::log(d) + 0.5 * z_prime0 - 4.0 * w1, w1, 0.0};
}

// Same for int |xi|^{2s} phi(xi) dxi.
inline LogWeights power_weights(int n, double s, double d) {
  const double scale = std::pow(d, 2.0 * s);
  if (n == 1) {
    const double a = -zeta(-2.0 * s - 2.0), b = -zeta(-2.0 * s - 4.0);
    const double v2 = (b - a) / 12.0;
    const double v1 = a - 4.0 * v2;
    return {scale * (-2.0 * zeta(-2.0 * s) - 2.0 * v1 - 2.0 * v2), scale * v1, scale * v2};
  }
  auto Z = [](double z) { return 4.0 * zeta(z) * dirichlet_beta(z); };
  const double v1 = -Z(-s - 1.0) / 4.0;
  return {scale * (-Z(-s) - 4.0 * v1), scale * v1, 0.0};
}

// Symbol on the FFT-ordered lattice.  `base(|xi|)` is the bare symbol and
// `corr` the weights added at the origin stencil.
template <class Base>
std::vector<double> symbol_grid(const GridSpec& g, Base&& base, const LogWeights* corr, double zero_value) {
  const int m = g.points();
  const double d = g.dxi();
  std::vector<double> sym(g.size());
  auto stencil = [&](int a, int b) -> double {
    if (!corr) return 0.0;
    const int aa = std::abs(a), bb = std::abs(b);
    if (g.n == 1) return aa == 1 ? corr->w1 : (aa == 2 ? corr->w2 : 0.0);
    return (aa + bb == 1) ? corr->w1 : 0.0;
  };
  if (g.n == 1) {
    for (int k = 0; k < m; ++k) {
      const int kk = signed_index(k, m);
      sym[k] = kk == 0 ? zero_value : base(std::abs(kk) * d) + stencil(kk, 0);
    }
  } else {
    for (int k0 = 0; k0 < m; ++k0)
      for (int k1 = 0; k1 < m; ++k1) {
        const int a = signed_index(k0, m), b = signed_index(k1, m);
        sym[static_cast<std::size_t>(k0) * m + k1] =
            (a == 0 && b == 0) ? zero_value : base(d * std::hypot(a, b)) + stencil(a, b);
      }
  }
  return sym;
}

inline GridResult apply_symbol(const GridSamples& u, const std::vector<double>& sym) {
  const GridSpec& g = u.spec;
  const int m = g.points();
  std::vector<std::complex<double>> data(u.values.begin(), u.values.end());
  fft(data, g.n, m, FFTW_FORWARD);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= sym[i];
  GridResult out;
  out.spec = g;
  out.multiplied = data;
  fft(data, g.n, m, FFTW_BACKWARD);
  const double norm = 1.0 / static_cast<double>(data.size());
  out.values.resize(data.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.values[i] = data[i].real() * norm;
    out.max_imag = std::max(out.max_imag, std::abs(data[i].imag() * norm));
    scale = std::max(scale, std::abs(out.values[i]));
  }
  out.boundary_ratio = u.boundary_ratio;
  out.warnings = u.warnings;
  if (out.max_imag > 1e-10 * std::max(scale, 1e-300)) out.warnings.push_back("imaginary residue above 1e-10 of scale");
  return out;
}

}  // namespace detail

inline double GridResult::at(const Point& x) const {
  const int m = spec.points();
  const double d = spec.dxi();
  const double norm = 1.0 / static_cast<double>(multiplied.size());
  // e^{i xi_k (x - x_0)} per axis, Nyquist mode taken as a cosine
  auto axis = [&](double xc) {
    std::vector<std::complex<double>> e(m);
    for (int k = 0; k < m; ++k) {
      const int kk = detail::signed_index(k, m);
      const double ph = kk * d * (xc + spec.L);
      e[k] = (kk == -m / 2) ? std::complex<double>(std::cos(ph), 0.0) : std::polar(1.0, ph);
    }
    return e;
  };
  if (spec.n == 1) {
    const auto e = axis(x[0]);
    double acc = 0.0;
    for (int k = 0; k < m; ++k) acc += (multiplied[k] * e[k]).real();
    return acc * norm;
  }
  const auto e0 = axis(x[0]), e1 = axis(x[1]);
  std::complex<double> acc = 0.0;
  for (int k0 = 0; k0 < m; ++k0) {
    std::complex<double> row = 0.0;
    for (int k1 = 0; k1 < m; ++k1) row += multiplied[static_cast<std::size_t>(k0) * m + k1] * e1[k1];
    acc += row * e0[k0];
  }
  return acc.real() * norm;
}

/// Samples u on the grid.  Power-decay fields are rejected; samples on the
/// boundary above 1e-12 of the maximum produce a warning.
inline GridSamples sample(const Field& u, const GridSpec& g) {
  g.validate();
  if (u.dim() != g.n) throw DomainError("sample: field dimension does not match the grid");
  if (!u.decay().is_rapid())
    throw DomainError("grid path needs a rapidly decaying field; '" + u.description() + "' decays like " +
                      u.decay().to_string());
  GridSamples out;
  out.spec = g;
  const int m = g.points();
  out.values.resize(g.size());
  double vmax = 0.0, bmax = 0.0;
  if (g.n == 1) {
    for (int j = 0; j < m; ++j) {
      out.values[j] = u(Point{out.coordinate(j)});
      vmax = std::max(vmax, std::abs(out.values[j]));
    }
    bmax = std::max(std::abs(out.values[0]), std::abs(out.values[m - 1]));
  } else {
    for (int j0 = 0; j0 < m; ++j0)
      for (int j1 = 0; j1 < m; ++j1) {
        const double v = u(Point{out.coordinate(j0), out.coordinate(j1)});
        out.values[static_cast<std::size_t>(j0) * m + j1] = v;
        vmax = std::max(vmax, std::abs(v));
        if (j0 == 0 || j1 == 0 || j0 == m - 1 || j1 == m - 1) bmax = std::max(bmax, std::abs(v));
      }
  }
  out.boundary_ratio = vmax > 0.0 ? bmax / vmax : 0.0;
  if (out.boundary_ratio >= 1e-12) {
    std::ostringstream os;
    os << "field not supported in the box: boundary/max = " << out.boundary_ratio;
    out.warnings.push_back(os.str());
  }
  return out;
}

/// L_Delta on the grid via the symbol 2 ln|xi|.
inline GridResult loglap_grid(const GridSamples& u) {
  const GridSpec& g = u.spec;
  g.validate();
  if (u.values.size() != g.size()) throw DomainError("loglap_grid: sample count does not match the grid");
  auto base = [](double xi) { return 2.0 * std::log(xi); };
  std::vector<double> sym;
  if (g.zero_mode.kind == ZeroMode::Kind::corrected) {
    auto w = detail::log_weights(g.n, g.dxi());
    detail::LogWeights twice{2.0 * w.w0, 2.0 * w.w1, 2.0 * w.w2};
    sym = detail::symbol_grid(g, base, &twice, twice.w0);
  } else {
    sym = detail::symbol_grid(g, base, nullptr, g.zero_mode.kind == ZeroMode::Kind::assign ? g.zero_mode.value : 0.0);
  }
  return detail::apply_symbol(u, sym);
}

/// (-Delta)^s on the grid via the symbol |xi|^{2s}.
inline GridResult fraclap_grid(const GridSamples& u, double s) {
  const GridSpec& g = u.spec;
  g.validate();
  if (!(s > 0.0 && s < 1.0)) throw DomainError("fraclap_grid: s must lie in (0, 1)");
  if (u.values.size() != g.size()) throw DomainError("fraclap_grid: sample count does not match the grid");
  auto base = [s](double xi) { return std::pow(xi, 2.0 * s); };
  std::vector<double> sym;
  if (g.zero_mode.kind == ZeroMode::Kind::corrected) {
    auto w = detail::power_weights(g.n, s, g.dxi());
    sym = detail::symbol_grid(g, base, &w, w.w0);
  } else {
    sym = detail::symbol_grid(g, base, nullptr, g.zero_mode.kind == ZeroMode::Kind::assign ? g.zero_mode.value : 0.0);
  }
  return detail::apply_symbol(u, sym);
}

/// The three integrals of the D_n form of Pitt's inequality, with the
/// unitary transform fhat(xi) = (2 pi)^{-n/2} int f(x) e^{-i x xi} dx.
struct PittIntegrals {
  double log_x = 0.0;   // int ln|x| f^2
  double log_xi = 0.0;  // int ln|xi| |fhat|^2
  double l2 = 0.0;      // int f^2
};

namespace detail {

// sum over a lattice of ln|k d| a_k plus the origin-stencil correction, times d^n
inline double corrected_log_sum(const std::vector<double>& a, int n, int m, double d,
                                const std::function<int(int)>& to_signed) {
  const auto w = log_weights(n, d);
  double acc = 0.0;
  if (n == 1) {
    for (int k = 0; k < m; ++k) {
      const int kk = to_signed(k);
      const int ak = std::abs(kk);
      if (kk == 0) acc += w.w0 * a[k];
      else acc += (std::log(ak * d) + (ak == 1 ? w.w1 : ak == 2 ? w.w2 : 0.0)) * a[k];
    }
    return acc * d;
  }
  for (int k0 = 0; k0 < m; ++k0)
    for (int k1 = 0; k1 < m; ++k1) {
      const int p = to_signed(k0), q = to_signed(k1);
      const double v = a[static_cast<std::size_t>(k0) * m + k1];
      if (p == 0 && q == 0) acc += w.w0 * v;
      else acc += (std::log(d * std::hypot(p, q)) + (std::abs(p) + std::abs(q) == 1 ? w.w1 : 0.0)) * v;
    }
  return acc * d * d;
}

}  // namespace detail

inline PittIntegrals pitt_grid_integrals(const GridSamples& f) {
  const GridSpec& g = f.spec;
  g.validate();
  const int m = g.points();
  const double h = g.h();
  PittIntegrals out;
  std::vector<double> sq(f.values.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = f.values[i] * f.values[i];
  double l2 = 0.0;
  for (double v : sq) l2 += v;
  out.l2 = l2 * std::pow(h, g.n);
  // x_j = (j - m/2) h, so x = 0 sits at j = m/2
  out.log_x = detail::corrected_log_sum(sq, g.n, m, h, [m](int j) { return j - m / 2; });

  std::vector<std::complex<double>> data(f.values.begin(), f.values.end());
  detail::fft(data, g.n, m, FFTW_FORWARD);
  const double c = std::pow(h, 2 * g.n) / std::pow(2.0 * kPi, g.n);
  std::vector<double> spec(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) spec[i] = c * std::norm(data[i]);
  out.log_xi = detail::corrected_log_sum(spec, g.n, m, g.dxi(), [m](int k) { return detail::signed_index(k, m); });
  return out;
}

/// CSV dump: coordinates..., value.
inline void write_grid_csv(const std::string& path, const GridSpec& g, const std::vector<double>& values) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.precision(17);
  const int m = g.points();
  if (g.n == 1) {
    os << "x0,value\n";
    for (int j = 0; j < m; ++j) os << -g.L + j * g.h() << "," << values[j] << "\n";
  } else {
    os << "x0,x1,value\n";
    for (int j0 = 0; j0 < m; ++j0)
      for (int j1 = 0; j1 < m; ++j1)
        os << -g.L + j0 * g.h() << "," << -g.L + j1 * g.h() << "," << values[static_cast<std::size_t>(j0) * m + j1]
           << "\n";
  }
  if (!os) throw std::runtime_error("write failed for " + path);
}

}  // namespace loglap
