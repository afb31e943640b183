#include "twist/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "twist/units.hpp"

namespace twist {

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  // Boost's error estimate is not scale-free; integrate over [0, 1] instead of [a, b].
  const double h = b - a;
  auto unit = [&](double t) { return f(a + h * t); };
  double err = 0.0;
  return h * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(unit, 0.0, 1.0, 20, rel_tol, &err);
}

RadialWindow lg_radial_window(int n, int abs_ell, double width) {
  // In x = 2 r^2 / w^2 the density is x^|l| e^-x L_n^2: Gamma-like with mean
  // 2n+|l|+1. Twelve spreads plus a fixed e^-40 margin either side.
  const double mean = 2.0 * n + abs_ell + 1.0;
  const double spread = std::sqrt((2.0 * n + 1.0) * (abs_ell + 2.0 * n + 1.0));
  const double x_lo = std::max(0.0, mean - 12.0 * spread - 40.0);
  const double x_hi = mean + 12.0 * spread + 40.0;
  return {width * std::sqrt(x_lo / 2.0), width * std::sqrt(x_hi / 2.0)};
}

double lg_quadrature_tolerance(int n, int abs_ell) {
  return std::max(1e-12, 2e-15 * (2.0 * n + abs_ell + 1.0));
}

double radial_integral(const std::function<double(double)>& f, const RadialWindow& window, double rel_tol) {
  constexpr int kPanels = 16;
  const double h = (window.hi - window.lo) / kPanels;
  auto g = [&](double r) { return f(r) * r; };
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    total += integrate(g, window.lo + i * h, window.lo + (i + 1) * h, rel_tol);
  }
  return 2.0 * units::kPi * total;
}

}  // namespace twist
