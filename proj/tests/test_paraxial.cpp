#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "twist/beamstate.hpp"
#include "twist/errors.hpp"
#include "twist/modes.hpp"
#include "twist/paraxial_oracle.hpp"

using namespace twist;

namespace {

constexpr double kK = 1e4;  // eV: slow enough that z_m stays short

std::vector<double> grid(double z_max, int samples) {
  std::vector<double> z;
  for (int i = 0; i <= samples; ++i) z.push_back(z_max * i / samples);
  return z;
}

}  // namespace

TEST_CASE("LG input has unit norm and the requested width") {
  const double w0 = 6e-8;
  for (int ell : {0, 2, -3}) {
    for (int n : {0, 1}) {
      const auto psi = make_lg_wavefunction(n, ell, w0, kK, 1.0, 12 * w0, 2048);
      CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(extract_width(psi, n, ell) == doctest::Approx(w0).epsilon(1e-4));
    }
  }
}

TEST_CASE("Landau input stays put in the field") {
  const double wm = magnetic_width(1.0, ParticleSpecies::electron());
  const double zm = rayleigh_in_field(1.0, kK);
  const auto cmp = envelope_oracle(0, 2, wm, kK, 1.0, grid(3 * oracle::kPi * zm, 24));
  CHECK(cmp.max_rel_err < 5e-3);
  for (double w : cmp.w_numeric) CHECK(w == doctest::Approx(wm).epsilon(5e-3));
  CHECK(cmp.max_norm_drift < 1e-10);
}

TEST_CASE("narrow input breathes between w0 and w_m^2/w0") {
  const double wm = magnetic_width(1.0, ParticleSpecies::electron());
  const double w0 = wm / std::sqrt(2.0);
  const double zm = rayleigh_in_field(1.0, kK);
  const auto cmp = envelope_oracle(0, 2, w0, kK, 1.0, grid(2 * oracle::kPi * zm, 64));
  CHECK(cmp.max_rel_err < 1e-2);
  double lo = 1e300, hi = 0.0;
  for (double w : cmp.w_numeric) {
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  CHECK(lo == doctest::Approx(w0).epsilon(1e-2));
  CHECK(hi == doctest::Approx(std::sqrt(2.0) * wm).epsilon(1e-2));
  // back to the waist after one period pi z_m
  CHECK(cmp.w_numeric[32] == doctest::Approx(w0).epsilon(1e-2));
}

TEST_CASE("free space follows the Rayleigh envelope") {
  const double w0 = 5e-8;
  const double zr = kK * w0 * w0 / 2.0 / 1.973269804e-7;  // k w0^2 / 2 with k in 1/m
  const auto cmp = envelope_oracle(1, 1, w0, kK, 0.0, grid(2 * zr, 20));
  const auto gauss = envelope_oracle(0, 0, w0, kK, 0.0, grid(2 * zr, 20));
  CHECK(gauss.max_rel_err < 1e-2);
  CHECK(cmp.max_rel_err < 1e-2);
  CHECK(cmp.w_numeric.back() == doctest::Approx(w0 * std::sqrt(5.0)).epsilon(1e-2));
  CHECK(std::isnan(cmp.gouy_slope));
}

TEST_CASE("Gouy slope agrees with the paraxial prefactor") {
  const double wm = magnetic_width(1.0, ParticleSpecies::electron());
  const double zm = rayleigh_in_field(1.0, kK);
  for (double s_z : {-0.5, 0.5}) {
    for (int ell : {2, -2}) {
      SchemeParams p;
      p.s_z = s_z;
      const auto cmp = envelope_oracle(0, ell, wm, kK, 1.0, grid(zm, 16), p);
      const double expected = paraxial_gouy(0, ell, s_z, 1.0, 1.0);
      CHECK(cmp.gouy_slope == doctest::Approx(expected).epsilon(2e-2).scale(0.1));
    }
  }
}

TEST_CASE("propagation is independent of the z grid") {
  const double wm = magnetic_width(2.0, ParticleSpecies::electron());
  const double zm = rayleigh_in_field(2.0, kK);
  const auto coarse = envelope_oracle(0, 3, 0.8 * wm, kK, 2.0, grid(zm, 4));
  const auto fine = envelope_oracle(0, 3, 0.8 * wm, kK, 2.0, grid(zm, 16));
  CHECK(coarse.w_numeric.back() == doctest::Approx(fine.w_numeric.back()).epsilon(1e-3));
}

TEST_CASE("compare_envelope") {
  const std::vector<double> ana{1.0, 2.0, 4.0};
  CHECK(compare_envelope(std::vector<double>{1.0, 2.0, 4.0}, ana) == 0.0);
  CHECK(compare_envelope(std::vector<double>{1.0, 2.2, 3.8}, ana) == doctest::Approx(0.1));
}

TEST_CASE("solver refuses a grid the beam spills over") {
  const double wm = magnetic_width(1.0, ParticleSpecies::electron());
  const double zm = rayleigh_in_field(1.0, kK);
  SchemeParams p;
  p.r_max = 1.5 * wm;
  CHECK_THROWS_AS(envelope_oracle(0, 2, 0.5 * wm, kK, 1.0, grid(zm, 8), p), SolverError);
  CHECK_THROWS_AS(make_lg_wavefunction(0, 0, wm, kK, 1.0, -1.0, 16), DomainError);
}
