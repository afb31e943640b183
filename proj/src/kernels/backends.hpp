#pragma once

#include <complex>
#include <span>

namespace twist::kernels {

#define TWIST_KERNEL_DECLS                                                                     \
  void laguerre(int n, double alpha, std::span<const double> x, std::span<double> out);        \
  void lg_radial_amplitude(int n, int abs_ell, double width, double log_norm,                  \
                           std::span<const double> r, std::span<double> out);                  \
  double dot(std::span<const double> a, std::span<const double> b);                            \
  double weighted_abs2_sum(std::span<const double> w,                                          \
                           std::span<const std::complex<double>> psi);                         \
  void tridiagonal_apply(std::span<const double> sub, std::span<const double> diag,            \
                         std::span<const double> super, std::complex<double> c,               \
                         std::span<const std::complex<double>> x,                              \
                         std::span<std::complex<double>> y);

namespace scalar { TWIST_KERNEL_DECLS }
namespace avx2 { TWIST_KERNEL_DECLS }

#undef TWIST_KERNEL_DECLS

}  // namespace twist::kernels
