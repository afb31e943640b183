#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>

#include "kernels/backends.hpp"

namespace twist::kernels::avx2 {

namespace {

inline __m256d splat(double v) { return _mm256_set1_pd(v); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// exp via Cody-Waite reduction x = k ln2 + t, |t| <= ln2/2, then a degree-13
// Taylor polynomial and an exponent-field scale. Results below ~1e-308 flush to 0.
inline __m256d vexp(__m256d x) {
  const __m256d hi_clamp = splat(709.0);
  const __m256d lo_cut = splat(-708.0);
  const __m256d underflow = _mm256_cmp_pd(x, lo_cut, _CMP_LT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo_cut), hi_clamp);

  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, splat(1.4426950408889634)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d t = _mm256_fnmadd_pd(k, splat(6.93147180369123816490e-01), x);
  t = _mm256_fnmadd_pd(k, splat(1.90821492927058770002e-10), t);

  static constexpr double inv_fact[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
      1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,      1.0 / 720.0,
      1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,         0.5,
      1.0,                1.0};
  __m256d p = splat(inv_fact[0]);
  for (int i = 1; i < 14; ++i) p = _mm256_fmadd_pd(p, t, splat(inv_fact[i]));

  // 2^k: k + 1023 into the exponent field.
  const __m128i k32 = _mm256_cvtpd_epi32(k);
  const __m256i k64 = _mm256_cvtepi32_epi64(k32);
  const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(k64, _mm256_set1_epi64x(1023)), 52);
  const __m256d r = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
  return _mm256_andnot_pd(underflow, r);
}

// log for positive finite x; 0 maps to -inf. fdlibm-style reduction to
// f in [sqrt2/2, sqrt2) and the Lg1..Lg7 minimax series.
inline __m256d vlog(__m256d x) {
  const __m256d zero_mask = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LE_OQ);
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  // Biased exponent as double via the 2^52 trick.
  const __m256i ebits = _mm256_srli_epi64(bits, 52);
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(ebits, magic)), splat(4503599627370496.0));
  e = _mm256_sub_pd(e, splat(1023.0));

  const __m256d big = _mm256_cmp_pd(m, splat(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, splat(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, splat(1.0)));

  const __m256d f = _mm256_sub_pd(m, splat(1.0));
  const __m256d s = _mm256_div_pd(f, _mm256_add_pd(splat(2.0), f));
  const __m256d z = _mm256_mul_pd(s, s);
  __m256d R = splat(1.479819860511658591e-01);
  R = _mm256_fmadd_pd(R, z, splat(1.531383769920937332e-01));
  R = _mm256_fmadd_pd(R, z, splat(1.818357216161805012e-01));
  R = _mm256_fmadd_pd(R, z, splat(2.222219843214978396e-01));
  R = _mm256_fmadd_pd(R, z, splat(2.857142874366239149e-01));
  R = _mm256_fmadd_pd(R, z, splat(3.999999999940941908e-01));
  R = _mm256_fmadd_pd(R, z, splat(6.666666666666735130e-01));
  R = _mm256_mul_pd(R, z);
  const __m256d hfsq = _mm256_mul_pd(splat(0.5), _mm256_mul_pd(f, f));
  // log(1+f) = f - (hfsq - s (hfsq + R))
  __m256d lf = _mm256_sub_pd(f, _mm256_fnmadd_pd(s, _mm256_add_pd(hfsq, R), hfsq));
  lf = _mm256_fmadd_pd(e, splat(1.90821492927058770002e-10), lf);
  lf = _mm256_fmadd_pd(e, splat(6.93147180369123816490e-01), lf);
  return _mm256_blendv_pd(lf, splat(-std::numeric_limits<double>::infinity()), zero_mask);
}

inline __m256d vlaguerre(int n, __m256d alpha, __m256d x) {
  const __m256d one = splat(1.0);
  if (n == 0) return one;
  __m256d prev = one;
  __m256d cur = _mm256_sub_pd(_mm256_add_pd(one, alpha), x);
  for (int k = 1; k < n; ++k) {
    const __m256d a = _mm256_sub_pd(_mm256_add_pd(splat(2.0 * k + 1.0), alpha), x);
    const __m256d b = _mm256_add_pd(splat(static_cast<double>(k)), alpha);
    const __m256d next = _mm256_div_pd(_mm256_fmsub_pd(a, cur, _mm256_mul_pd(b, prev)), splat(k + 1.0));
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

void laguerre(int n, double alpha, std::span<const double> x, std::span<double> out) {
  const std::size_t len = x.size();
  const __m256d a = splat(alpha);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    _mm256_storeu_pd(out.data() + i, vlaguerre(n, a, _mm256_loadu_pd(x.data() + i)));
  }
  if (i < len) scalar::laguerre(n, alpha, x.subspan(i), out.subspan(i));
}

void lg_radial_amplitude(int n, int abs_ell, double width, double log_norm,
                         std::span<const double> r, std::span<double> out) {
  const std::size_t len = r.size();
  const __m256d inv_w = splat(1.0 / width);
  const __m256d base = splat(log_norm - std::log(width));
  const __m256d ell = splat(static_cast<double>(abs_ell));
  const __m256d sqrt2 = splat(std::sqrt(2.0));
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d u = _mm256_mul_pd(_mm256_loadu_pd(r.data() + i), inv_w);
    const __m256d u2 = _mm256_mul_pd(u, u);
    __m256d expo = _mm256_sub_pd(base, u2);
    if (abs_ell != 0) expo = _mm256_fmadd_pd(ell, vlog(_mm256_mul_pd(sqrt2, u)), expo);
    const __m256d lag = vlaguerre(n, ell, _mm256_add_pd(u2, u2));
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(vexp(expo), lag));
  }
  if (i < len) scalar::lg_radial_amplitude(n, abs_ell, width, log_norm, r.subspan(i), out.subspan(i));
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t len = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < len; ++i) s += a[i] * b[i];
  return s;
}

double weighted_abs2_sum(std::span<const double> w, std::span<const std::complex<double>> psi) {
  const std::size_t len = w.size();
  const double* p = reinterpret_cast<const double*>(psi.data());
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const __m256d z = _mm256_loadu_pd(p + 2 * i);
    const __m128d wv = _mm_loadu_pd(w.data() + i);
    const __m256d ww = _mm256_permute4x64_pd(_mm256_castpd128_pd256(wv), 0b01010000);
    acc = _mm256_fmadd_pd(ww, _mm256_mul_pd(z, z), acc);
  }
  double s = hsum(acc);
  for (; i < len; ++i) s += w[i] * std::norm(psi[i]);
  return s;
}

void tridiagonal_apply(std::span<const double> sub, std::span<const double> diag,
                       std::span<const double> super, std::complex<double> c,
                       std::span<const std::complex<double>> x, std::span<std::complex<double>> y) {
  const std::size_t n = diag.size();
  if (n < 4) {
    scalar::tridiagonal_apply(sub, diag, super, c, x, y);
    return;
  }
  auto edge = [&](std::size_t i) {
    std::complex<double> hx = diag[i] * x[i];
    if (i > 0) hx += sub[i] * x[i - 1];
    if (i + 1 < n) hx += super[i] * x[i + 1];
    y[i] = x[i] + c * hx;
  };
  const double* xp = reinterpret_cast<const double*>(x.data());
  double* yp = reinterpret_cast<double*>(y.data());
  const __m256d cr = splat(c.real());
  const __m256d ci = _mm256_set_pd(c.imag(), -c.imag(), c.imag(), -c.imag());
  auto dup = [](const double* v) {
    return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(v)), 0b01010000);
  };

  edge(0);
  std::size_t i = 1;
  for (; i + 2 <= n - 1; i += 2) {
    const __m256d xm = _mm256_loadu_pd(xp + 2 * (i - 1));
    const __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
    const __m256d xq = _mm256_loadu_pd(xp + 2 * (i + 1));
    __m256d hx = _mm256_mul_pd(dup(diag.data() + i), x0);
    hx = _mm256_fmadd_pd(dup(sub.data() + i), xm, hx);
    hx = _mm256_fmadd_pd(dup(super.data() + i), xq, hx);
    const __m256d sw = _mm256_permute_pd(hx, 0b0101);
    const __m256d out = _mm256_fmadd_pd(sw, ci, _mm256_fmadd_pd(hx, cr, x0));
    _mm256_storeu_pd(yp + 2 * i, out);
  }
  for (; i < n; ++i) edge(i);
}

}  // namespace twist::kernels::avx2
