#include <doctest.h>

#include <complex>
#include <random>
#include <vector>

#include <boost/math/special_functions/laguerre.hpp>

#include "twist/kernels.hpp"
#include "twist/laguerre.hpp"

using namespace twist;
namespace k = twist::kernels;

namespace {

/// Runs `fn` on the scalar path and, when present, the AVX2 path; outputs are
/// compared normwise so isolated zeros of the reference do not dominate.
template <typename Fn>
void both_backends(Fn&& fn, double tol = 1e-12) {
  const k::Backend saved = k::active_backend();
  REQUIRE(k::set_backend(k::Backend::scalar));
  auto ref = fn();
  if (k::avx2_available()) {
    REQUIRE(k::set_backend(k::Backend::avx2));
    auto vec = fn();
    REQUIRE(ref.size() == vec.size());
    double scale = 1e-300, worst = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      scale = std::max(scale, std::abs(ref[i]));
      worst = std::max(worst, std::abs(vec[i] - ref[i]));
    }
    CHECK(worst / scale < tol);
  } else {
    MESSAGE("AVX2 not available; scalar path only");
  }
  k::set_backend(saved);
}

std::vector<double> uniform(std::size_t n, double lo, double hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("laguerre kernel agrees with boost") {
  const auto x = uniform(37, 0.0, 40.0, 3);
  for (int n = 0; n <= 8; ++n) {
    for (unsigned m = 0; m <= 12; m += 3) {
      std::vector<double> out(x.size());
      k::laguerre(n, m, x, out);
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double ref = boost::math::laguerre(static_cast<unsigned>(n), m, x[i]);
        CHECK(out[i] == doctest::Approx(ref).epsilon(1e-11).scale(1.0));
      }
    }
  }
}

TEST_CASE("scalar and AVX2 laguerre agree") {
  const auto x = uniform(1003, 0.0, 60.0, 11);
  for (int n : {0, 1, 2, 5, 13}) {
    for (double alpha : {0.0, 1.0, 2.5, 40.0}) {
      both_backends([&] {
        std::vector<double> out(x.size());
        k::laguerre(n, alpha, x, out);
        return out;
      });
    }
  }
}

TEST_CASE("scalar and AVX2 radial amplitudes agree, including large l") {
  for (int ell : {0, 1, 3, 40, 10000}) {
    for (int n : {0, 1, 4}) {
      const double w = 5e-8;
      const double centre = w * std::sqrt((2.0 * n + ell + 1.0) / 2.0);
      const auto r = uniform(517, 0.0, 3.0 * centre + 2.0 * w, 17 + ell);
      both_backends([&] {
        std::vector<double> out(r.size());
        k::lg_radial_amplitude(n, ell, w, lg_log_norm(n, ell), r, out);
        return out;
      }, std::max(1e-12, 1e-15 * ell));  // exponent magnitude grows like l ln(r/w)
    }
  }
}

TEST_CASE("scalar and AVX2 reductions agree") {
  const auto a = uniform(1021, -1.0, 1.0, 5);
  const auto b = uniform(1021, -1.0, 1.0, 6);
  std::vector<std::complex<double>> psi(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) psi[i] = {a[i], b[i]};
  both_backends([&] { return std::vector<double>{k::dot(a, b)}; });
  both_backends([&] { return std::vector<double>{k::weighted_abs2_sum(a, psi)}; });
}

TEST_CASE("scalar and AVX2 tridiagonal apply agree") {
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 17u, 256u}) {
    const auto sub = uniform(n, -1.0, 1.0, 21);
    const auto diag = uniform(n, -1.0, 1.0, 22);
    const auto sup = uniform(n, -1.0, 1.0, 23);
    const auto re = uniform(n, -1.0, 1.0, 24);
    const auto im = uniform(n, -1.0, 1.0, 25);
    std::vector<std::complex<double>> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = {re[i], im[i]};
    const std::complex<double> c(0.3, -0.7);
    both_backends([&] {
      std::vector<std::complex<double>> y(n);
      k::tridiagonal_apply(sub, diag, sup, c, x, y);
      std::vector<double> flat;
      for (auto v : y) {
        flat.push_back(v.real());
        flat.push_back(v.imag());
      }
      return flat;
    });
    // reference by hand
    k::set_backend(k::Backend::scalar);
    std::vector<std::complex<double>> y(n);
    k::tridiagonal_apply(sub, diag, sup, c, x, y);
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> hx = diag[i] * x[i];
      if (i > 0) hx += sub[i] * x[i - 1];
      if (i + 1 < n) hx += sup[i] * x[i + 1];
      const auto expect = x[i] + c * hx;
      CHECK(std::abs(y[i] - expect) < 1e-14);
    }
  }
}

TEST_CASE("backend selection") {
  const k::Backend saved = k::active_backend();
  CHECK(k::set_backend(k::Backend::scalar));
  CHECK(k::active_backend() == k::Backend::scalar);
  CHECK(k::set_backend(k::Backend::avx2) == k::avx2_available());
  k::set_backend(saved);
  CHECK(std::string(k::to_string(k::Backend::avx2)) == "avx2");
}
