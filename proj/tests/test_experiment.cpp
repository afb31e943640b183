#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "twist/beamstate.hpp"
#include "twist/errors.hpp"
#include "twist/experiment.hpp"
#include "twist/fields.hpp"

using namespace twist;

namespace {

constexpr double kHbarCEvM = oracle::kHbarJs * oracle::kC / oracle::kCharge;
constexpr double kMassEv = oracle::kMassKg * oracle::kC * oracle::kC / oracle::kCharge;

}  // namespace

TEST_CASE("magnetic moment of a twisted beam") {
  const auto pos = ParticleSpecies::positron();
  // mu_B = e hbar / 2m in eV/T
  const double bohr = oracle::kHbarJs / (2.0 * oracle::kMassKg);
  CHECK(magnetic_moment(1.0, 0.0, pos, 1.0) == doctest::Approx(bohr).epsilon(1e-8));
  CHECK(magnetic_moment(1e4, 0.0, pos, 1.0) == doctest::Approx(0.58).epsilon(0.01));
  CHECK(magnetic_moment(1e4, 0.0, ParticleSpecies::electron(), 1.0) == -magnetic_moment(1e4, 0.0, pos, 1.0));
  CHECK(magnetic_moment(1e4, 0.0, pos, 4.0) == doctest::Approx(magnetic_moment(1e4, 0.0, pos, 1.0) / 4.0));
  CHECK(magnetic_moment(0.0, 0.5, pos, 1.0) == doctest::Approx(bohr).epsilon(1e-8));
  CHECK_THROWS_AS(magnetic_moment(1.0, 0.0, pos, 0.5), DomainError);
}

TEST_CASE("Stern-Gerlach force is the gradient of mu.B") {
  const auto pos = ParticleSpecies::positron();
  const double bt = 2e-7, kappa = 1.3e-3, gamma = 1.0001;
  for (double l : {1e4, -3e3, 1.0}) {
    const double mu = magnetic_moment(l, 0.0, pos, gamma);
    auto energy = [&](double x) { return mu * quadrupole_field(bt, kappa, x, 0.0).b.z; };
    const double h = 1e-3;
    const double gradient = (energy(h) - energy(-h)) / (2.0 * h);
    CHECK(sg_force(l, kappa, pos, gamma) == doctest::Approx(gradient).epsilon(1e-6));
  }
}

TEST_CASE("opposite OAM hits land mirror-symmetric") {
  const TwistedBeam beam;
  const AnalyzerGeometry geometry;
  const DeflectionOutcome out = deflection_sim(beam, geometry);
  CHECK(out.separation > 0.0);
  CHECK(out.plus.relative.x == doctest::Approx(-out.minus.relative.x).epsilon(1e-3));
  CHECK(out.mirror_asymmetry < 1e-3);
  CHECK(out.y_deflection != 0.0);
  CHECK(out.y_mismatch < 1e-3);
  CHECK(out.resolvable);
  CHECK(!out.flagged);
  // positron with L > 0 is pushed towards +x for kappa > 0
  CHECK(out.plus.relative.x > 0.0);
}

TEST_CASE("no gradient, no separation") {
  AnalyzerGeometry g;
  g.kappa = 0.0;
  const DeflectionOutcome out = deflection_sim(TwistedBeam{}, g);
  CHECK(out.separation == 0.0);
  CHECK(!out.resolvable);
}

TEST_CASE("separation grows with the square of the analyzer length") {
  AnalyzerGeometry g;
  g.z_begin = 0.0;
  g.z_end = 0.01;
  g.z_target = g.z_end;
  const double short_sep = deflection_sim(TwistedBeam{}, g).separation;
  g.z_end = 0.02;
  g.z_target = g.z_end;
  const double long_sep = deflection_sim(TwistedBeam{}, g).separation;
  CHECK(long_sep / short_sep == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("aperture and field-sign flags") {
  AnalyzerGeometry g;
  g.aperture_radius = 1e-9;
  CHECK(deflection_sim(TwistedBeam{}, g).flagged);
  AnalyzerGeometry bad;
  bad.z_target = 0.0;
  CHECK_THROWS_AS(deflection_sim(TwistedBeam{}, bad), DomainError);
  bad = AnalyzerGeometry{};
  bad.b_tilde = 0.0;
  CHECK_THROWS_AS(deflection_sim(TwistedBeam{}, bad), DomainError);
}

TEST_CASE("effective mass") {
  const auto e = ParticleSpecies::electron();
  const double wm = oracle::magnetic_width(1.0);
  for (int n : {0, 1, 2}) {
    for (int ell : {0, 3, 10000}) {
      const double x = 2.0 * (2.0 * n + ell + 1.0) * kHbarCEvM * kHbarCEvM / (wm * wm);
      const double expected = std::sqrt(kMassEv * kMassEv + x) - kMassEv;
      CHECK(effective_mass_excess(e, n, ell, wm) == doctest::Approx(expected).epsilon(1e-6));
      CHECK(effective_mass(e, n, ell, wm) - e.mass == doctest::Approx(expected).epsilon(1e-3));
    }
  }
  CHECK(effective_mass_excess(e, 1, 10000, wm) == doctest::Approx(0.3).epsilon(0.05));
  CHECK(effective_mass_excess(e, 0, 0, wm) == doctest::Approx(2.9e-5).epsilon(0.01));
  // monotone in n, |l|, and decreasing in w0
  CHECK(effective_mass(e, 1, 5, wm) > effective_mass(e, 0, 5, wm));
  CHECK(effective_mass(e, 0, -6, wm) > effective_mass(e, 0, 5, wm));
  CHECK(effective_mass(e, 0, 5, 2 * wm) < effective_mass(e, 0, 5, wm));
  CHECK_THROWS_AS(effective_mass(e, 0, 0, 0.0), DomainError);
}

TEST_CASE("positronium stability") {
  const double mps = default_positronium_mass();
  CHECK(mps == doctest::Approx(2.0 * kMassEv - 6.8).epsilon(1e-9));  // mass restated from SI
  const auto stable = positronium_threshold(mps + 0.3);
  CHECK(stable.stable);
  CHECK(stable.margin == doctest::Approx(6.5).epsilon(1e-6));
  CHECK(!positronium_threshold(mps + 6.8).stable);
  const auto beyond = positronium_threshold(mps + 7.0);
  CHECK(!beyond.stable);
  CHECK(beyond.margin == doctest::Approx(-0.2).epsilon(1e-6));
  CHECK_THROWS_AS(positronium_threshold(mps - 1.0), DomainError);
  CHECK(retained_oam(1e4, 0.25) == 2.5e3);
  CHECK_THROWS_AS(retained_oam(1e4, 1.5), DomainError);
}

TEST_CASE("boost to the rest frame") {
  // two back-to-back photons are already at rest; a moving pair is boosted there
  const FourMomentum pair{1.022e6, {0.0, 0.0, 0.0}};
  CHECK(boost_to_rest(pair).energy == 1.022e6);
  const double m = 1.022e6, p = 3e5;
  const FourMomentum moving{std::sqrt(m * m + p * p), {p * 0.6, 0.0, p * 0.8}};
  const FourMomentum rest = boost_to_rest(moving);
  CHECK(rest.energy == doctest::Approx(m).epsilon(1e-12));
  CHECK(norm(rest.momentum) < 1e-9 * m);
  CHECK_THROWS_AS(boost_to_rest({1.0, {2.0, 0.0, 0.0}}), DomainError);
}
