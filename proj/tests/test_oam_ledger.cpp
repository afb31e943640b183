#include <doctest.h>

#include <numeric>

#include "twist/beamstate.hpp"
#include "twist/errors.hpp"
#include "twist/oam_ledger.hpp"
#include "twist/units.hpp"

using namespace twist;
using units::kPi;

TEST_CASE("Landau kinetic OAM: three routes agree exactly") {
  for (const auto& sp : {ParticleSpecies::electron(), ParticleSpecies::positron()}) {
    for (double b : {1.0, -0.25}) {
      const int field_sign = b > 0 ? 1 : -1;
      for (int n = 0; n <= 3; ++n) {
        for (int ell = -6; ell <= 6; ++ell) {
          const LandauKinetic lk = landau_kinetic(n, ell, sp, field_sign);
          const long long via_radius = kinetic_from_canonical(static_cast<long long>(ell), b, sp,
                                                              mean_square_radius(n, ell, b, sp));
          CHECK(lk.kinetic == via_radius);
          CHECK(lk.kinetic_minus_twice_canonical == lk.kinetic - 2 * ell);
          // floating route, rounded
          const double r2 = mean_square_radius(n, ell, b, sp).si();
          CHECK(kinetic_from_canonical(static_cast<double>(ell), b, sp, r2) ==
                doctest::Approx(static_cast<double>(lk.kinetic)).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("exact route refuses a radius built for another field") {
  const auto e = ParticleSpecies::electron();
  CHECK_THROWS_AS(kinetic_from_canonical(2LL, 2.0, e, mean_square_radius(0, 2, 1.0, e)), DomainError);
}

TEST_CASE("basic Landau states: kinetic and canonical OAM never oppose") {
  const auto e = ParticleSpecies::electron();
  for (int n = 0; n <= 3; ++n) {
    for (int ell = 1; ell <= 6; ++ell) {
      // basic for e < 0: sgn(e) l <= 0, i.e. l >= 0
      const long long kin = landau_kinetic(n, ell, e).kinetic;
      CHECK(kin * ell >= 0);
    }
  }
}

TEST_CASE("classical limit drops n and the zero-point term") {
  for (const auto& sp : {ParticleSpecies::electron(), ParticleSpecies::positron()}) {
    for (int ell = -6; ell <= 6; ++ell) {
      if (ell == 0) continue;
      const double classical = classical_limit_kinetic(ell, sp);
      // l - sgn(qB)|l| for B > 0
      const double expected = ell - sp.charge_sign() * std::abs(ell);
      CHECK(classical == expected);
      const long long full = landau_kinetic(0, ell, sp).kinetic;
      const long long quantum_part = -static_cast<long long>(sp.charge_sign()) * 1;  // -sgn(qB)(2n + 1)
      CHECK(static_cast<double>(full - quantum_part) == classical);
    }
  }
  // nonbasic states carry no kinetic OAM classically
  CHECK(classical_limit_kinetic(-3.0, ParticleSpecies::electron()) == 0.0);
  CHECK(classical_limit_kinetic(3.0, ParticleSpecies::electron()) == 6.0);
}

TEST_CASE("intrinsic canonical OAM from the azimuthal momentum") {
  const double r = 1e-7;
  const double pi_phi = 10.0;  // eV
  const double value = intrinsic_canonical(r, pi_phi, ParticleSpecies::electron());
  CHECK(value == doctest::Approx(r * pi_phi / units::kHbarCEvM / 2.0).epsilon(1e-14));
  CHECK(intrinsic_canonical(r, -pi_phi, ParticleSpecies::positron()) == doctest::Approx(-value).epsilon(1e-14));
}

TEST_CASE("time-dependent kinetic OAM averages to the symmetric-gauge form") {
  const auto e = ParticleSpecies::electron();
  const double b = 1.0, r0 = 3e-8, r = 5e-8, l = 4.0;
  const int m = 720;
  double avg = 0.0;
  for (int i = 0; i < m; ++i) avg += time_dependent_kinetic(l, b, e, r0, r, 2.0 * kPi * i / m);
  avg /= m;
  CHECK(avg == doctest::Approx(kinetic_from_canonical(l, b, e, r0 * r0 + r * r)).epsilon(1e-12));
}

TEST_CASE("ledger of a resident state") {
  BeamQuantumState s;
  s.species = ParticleSpecies::electron();
  s.n = 1;
  s.ell = 3;
  const double b = 1.0;
  s.w0 = magnetic_width(b, s.species);
  const OamLedger ledger = ledger_for_state(s, b);
  CHECK(ledger.canonical_intrinsic == 3.0);
  CHECK(ledger.kinetic_intrinsic == doctest::Approx(static_cast<double>(landau_kinetic(1, 3, s.species).kinetic)).epsilon(1e-12));
  CHECK(!ledger.nonbasic);
  CHECK(ledger.canonical_extrinsic == 0.0);

  s.ell = -2;
  CHECK(ledger_for_state(s, b).nonbasic);

  s.axis_offset = {1e-6, 0.0};
  const OamLedger off = ledger_for_state(s, b);
  // canonical extrinsic (qB/2) R0^2 for a beam resting off-axis; kinetic extrinsic zero
  const double expected = -kinetic_from_canonical(0.0, b, s.species, 1e-12);
  CHECK(off.canonical_extrinsic == doctest::Approx(expected).epsilon(1e-12));
  CHECK(off.kinetic_extrinsic == 0.0);
  CHECK(off.contributions.size() == 3);
  CHECK(off.canonical_total() == doctest::Approx(off.canonical_intrinsic + off.canonical_extrinsic));
}

TEST_CASE("ledger in vacuum has no field terms") {
  BeamQuantumState s;
  s.ell = 5;
  const OamLedger ledger = ledger_for_state(s, 0.0);
  CHECK(ledger.kinetic_total() == 5.0);
  CHECK(ledger.canonical_total() == 5.0);
  CHECK(!ledger.nonbasic);
}
