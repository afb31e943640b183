#include <cmath>
#include <cstddef>
#include <limits>

#include "kernels/backends.hpp"

namespace twist::kernels::scalar {

namespace {

double laguerre_one(int n, double alpha, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

void laguerre(int n, double alpha, std::span<const double> x, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = laguerre_one(n, alpha, x[i]);
}

void lg_radial_amplitude(int n, int abs_ell, double width, double log_norm,
                         std::span<const double> r, std::span<double> out) {
  const double inv_w = 1.0 / width;
  const double base = log_norm - std::log(width);
  const double ell = abs_ell;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double u = r[i] * inv_w;
    const double u2 = u * u;
    double expo = base - u2;
    if (abs_ell != 0) {
      expo += u > 0.0 ? ell * std::log(std::sqrt(2.0) * u) : -std::numeric_limits<double>::infinity();
    }
    out[i] = std::exp(expo) * laguerre_one(n, ell, 2.0 * u2);
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double weighted_abs2_sum(std::span<const double> w, std::span<const std::complex<double>> psi) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::norm(psi[i]);
  return s;
}

void tridiagonal_apply(std::span<const double> sub, std::span<const double> diag,
                       std::span<const double> super, std::complex<double> c,
                       std::span<const std::complex<double>> x, std::span<std::complex<double>> y) {
  const std::size_t n = diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> hx = diag[i] * x[i];
    if (i > 0) hx += sub[i] * x[i - 1];
    if (i + 1 < n) hx += super[i] * x[i + 1];
    y[i] = x[i] + c * hx;
  }
}

}  // namespace twist::kernels::scalar
