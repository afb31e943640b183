#pragma once

#include <functional>

namespace twist {

/// Adaptive Gauss-Kronrod (61-point) on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-13);

/// Radial interval carrying all but ~1e-16 of an LG density of width w.
struct RadialWindow {
  double lo = 0.0;
  double hi = 0.0;
};

RadialWindow lg_radial_window(int n, int abs_ell, double width);

/// Tightest relative tolerance worth asking for over an LG density: the
/// amplitude carries rounding of an exponent of size ~2n + |l|.
double lg_quadrature_tolerance(int n, int abs_ell);

/// 2 pi \int_window f(r) r dr, split into sub-panels for peaked integrands.
double radial_integral(const std::function<double(double)>& f, const RadialWindow& window,
                       double rel_tol = 1e-13);

}  // namespace twist
