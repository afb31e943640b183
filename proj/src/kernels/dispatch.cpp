#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kernels/backends.hpp"
#include "twist/kernels.hpp"

namespace twist::kernels {

namespace {

Backend detect() {
  if (const char* env = std::getenv("TWIST_KERNELS"); env && std::strcmp(env, "scalar") == 0) {
    return Backend::scalar;
  }
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{detect()};
  return b;
}

}  // namespace

bool avx2_available() {
#if defined(TWIST_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

bool set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_available()) return false;
  current().store(b, std::memory_order_relaxed);
  return true;
}

const char* to_string(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

#if defined(TWIST_HAVE_AVX2)
#define TWIST_DISPATCH(fn, ...) \
  (active_backend() == Backend::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define TWIST_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void laguerre(int n, double alpha, std::span<const double> x, std::span<double> out) {
  TWIST_DISPATCH(laguerre, n, alpha, x, out);
}

void lg_radial_amplitude(int n, int abs_ell, double width, double log_norm,
                         std::span<const double> r, std::span<double> out) {
  TWIST_DISPATCH(lg_radial_amplitude, n, abs_ell, width, log_norm, r, out);
}

double dot(std::span<const double> a, std::span<const double> b) { return TWIST_DISPATCH(dot, a, b); }

double weighted_abs2_sum(std::span<const double> w, std::span<const std::complex<double>> psi) {
  return TWIST_DISPATCH(weighted_abs2_sum, w, psi);
}

void tridiagonal_apply(std::span<const double> sub, std::span<const double> diag,
                       std::span<const double> super, std::complex<double> c,
                       std::span<const std::complex<double>> x, std::span<std::complex<double>> y) {
  TWIST_DISPATCH(tridiagonal_apply, sub, diag, super, c, x, y);
}

}  // namespace twist::kernels
