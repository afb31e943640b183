#pragma once

#include <complex>
#include <cstddef>
#include <span>

// Data-parallel inner loops. Each entry point has a scalar reference and, on
// x86-64, an AVX2 variant chosen at first use. TWIST_KERNELS=scalar in the
// environment forces the reference path.

namespace twist::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
/// Returns false (and changes nothing) if the requested backend is unavailable.
bool set_backend(Backend b);
bool avx2_available();
const char* to_string(Backend b);

/// out[i] = L_n^{alpha}(x[i]) by upward recurrence.
void laguerre(int n, double alpha, std::span<const double> x, std::span<double> out);

/// out[i] = exp(log_norm - ln w + abs_ell ln(sqrt2 r/w) - r^2/w^2) L_n^{abs_ell}(2 r^2/w^2).
/// Real radial factor of an LG / Landau mode, evaluated without overflow for large |l|.
void lg_radial_amplitude(int n, int abs_ell, double width, double log_norm,
                         std::span<const double> r, std::span<double> out);

double dot(std::span<const double> a, std::span<const double> b);

/// sum_i w[i] |psi[i]|^2
double weighted_abs2_sum(std::span<const double> w, std::span<const std::complex<double>> psi);

/// y = x + c (H x) for symmetric-structure real tridiagonal H given by
/// sub[i] = H(i, i-1), diag[i], super[i] = H(i, i+1); sub[0], super[n-1] ignored.
void tridiagonal_apply(std::span<const double> sub, std::span<const double> diag,
                       std::span<const double> super, std::complex<double> c,
                       std::span<const std::complex<double>> x, std::span<std::complex<double>> y);

}  // namespace twist::kernels
