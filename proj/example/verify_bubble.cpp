// Evaluates L_Delta on a bubble by quadrature and compares it with the
// right-hand side (4/n) u ln u, then checks a Gaussian on the grid path.

#include <cmath>
#include <cstdio>

#include "loglap/loglap.hpp"

int main() {
  using namespace loglap;

  const Field u = make_bubble({2, 1.0, {}});
  for (double r : {0.0, 0.5, 2.0, 8.0}) {
    const Point x{r, 0.0};
    const Estimate lhs = loglap_point(u, x);
    const double v = u(x);
    std::printf("|x| = %4.1f  L u = %+.12f (+- %.1e)   2 u ln u = %+.12f\n", r, lhs.value, lhs.error,
                2.0 * v * std::log(v));
  }

  GridSpec g;
  g.n = 1;
  const GridResult lg = loglap_grid(sample(make_gaussian(1, 1.0), g));
  std::printf("grid L exp(-x^2/2) at 0 = %.10f, -(gamma + ln 2) = %.10f\n", lg.at(Point{0.0}),
              -(kEulerGamma + kLn2));
  return 0;
}
