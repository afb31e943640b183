#include <doctest.h>

#include <cmath>
#include <vector>

#include "beamline.hpp"
#include "oracles.hpp"
#include "twist/beamstate.hpp"
#include "twist/dynamics.hpp"
#include "twist/errors.hpp"
#include "twist/transitions.hpp"

using namespace twist;

namespace {

FieldMap uniform(double b) { return FieldMap({fixture::region("bore", b, -10.0, 10.0, 0.0)}); }

double total_energy(double mass, Vec3 p) { return std::sqrt(mass * mass + dot(p, p)); }

}  // namespace

TEST_CASE("uniform field: gyroradius and cyclotron frequency") {
  const auto e = ParticleSpecies::electron();
  for (double b : {0.01, 0.1, 1.0, 10.0}) {
    const Vec3 p{2e3, 0.0, 1e5};  // eV
    const double radius = p.x / (oracle::kC * b);  // m, |q| = e
    const double period_z = 2.0 * oracle::kPi * p.z / (oracle::kC * b);
    const FieldMap map = uniform(b);
    IntegrationOptions opt;
    opt.tolerance = 1e-11;
    const Trajectory tr = integrate_trajectory(e, {0.0, 0.0, 0.0}, p, map, 1.5 * period_z, opt);
    const CircleFit fit = fit_transverse_circle(tr);
    CHECK(fit.radius == doctest::Approx(radius).epsilon(1e-3));
    CHECK(fit.rms_residual < 1e-6 * radius);
    const double energy = total_energy(e.mass, p);
    const double omega = measured_angular_frequency(tr, fit.center);
    // the polar angle advances against q B: counter-clockwise for an electron in +B
    CHECK(omega == doctest::Approx(-cyclotron_frequency(e, b, energy)).epsilon(1e-3));
    // SI: e c^2 B / E[J]
    CHECK(std::abs(omega) == doctest::Approx(oracle::kC * oracle::kC * b / energy).epsilon(1e-3));
    CHECK(tr.max_energy_drift < 1e-10);
  }
}

TEST_CASE("electron and positron circle in opposite senses") {
  const FieldMap map = uniform(1.0);
  const Vec3 p{1e3, 0.0, 1e5};
  const double zmax = 1e-3;
  const auto te = integrate_trajectory(ParticleSpecies::electron(), {}, p, map, zmax);
  const auto tp = integrate_trajectory(ParticleSpecies::positron(), {}, p, map, zmax);
  CHECK(te.back().position.y == doctest::Approx(-tp.back().position.y).epsilon(1e-8));
  CHECK(te.back().position.y != 0.0);
}

TEST_CASE("fringe kick matches the azimuthal kick law for any edge width") {
  const auto e = ParticleSpecies::electron();
  const double r0 = 1e-6, pz = 1e10;
  for (double lambda : {1e-4, 1e-3, 1e-2}) {
    for (double bt : {0.0, 0.5, -1.0}) {
      const auto m = fixture::measure_kick(e, 1.0, bt, lambda, r0, pz, 1e-11);
      const double predicted = azimuthal_kick_extrinsic(r0, 1.0, bt, e);
      // SI oracle: q (B - B~) R / 2 with q = -e
      CHECK(predicted == doctest::Approx(-oracle::kick_ev(1.0 - bt, r0)).epsilon(1e-9));
      CHECK(m.measured == doctest::Approx(predicted).epsilon(1e-3));
      const CanonicalDrift drift = canonical_conservation(m.trajectory, fixture::crossing(1.0, bt, lambda), e);
      CHECK(drift.relative < 10.0 * 1e-11);
    }
  }
}

TEST_CASE("a resting particle far upstream still sees a narrow fringe") {
  const auto e = ParticleSpecies::electron();
  const double r0 = 5e-7;
  for (double lambda : {1e-4, 0.0}) {
    const FieldMap map({fixture::region("in", 1.0, -0.05, 0.0, lambda), fixture::region("out", -1.0, 0.0, 0.05, lambda)});
    const Trajectory tr = integrate_trajectory(e, {r0, 0.0, -0.05}, {0.0, 0.0, 1e9}, map, 0.002);
    // the fringe sits 500 widths away; the kick must not be stepped over
    CHECK(norm(tr.back().momentum.transverse()) == doctest::Approx(oracle::kick_ev(2.0, r0)).epsilon(1e-3));
  }
}

TEST_CASE("sharp edges act as impulses in either direction") {
  const auto e = ParticleSpecies::electron();
  const double r0 = 8e-7;
  const FieldMap map({fixture::region("in", 1.0, -0.01, 0.0, 0.0), fixture::region("out", 0.25, 0.0, 0.01, 0.0)});
  IntegrationOptions opt;
  opt.tolerance = 1e-11;
  const Trajectory fwd = integrate_trajectory(e, {r0, 0.0, -0.01}, {0.0, 0.0, 1e9}, map, 1e-5, opt);
  const double expected = azimuthal_kick_extrinsic(r0, 1.0, 0.25, e);
  const Vec3 end = fwd.back().position;
  CHECK(fixture::azimuthal({end.x, end.y}, fwd.back().momentum.transverse()) == doctest::Approx(expected).epsilon(1e-4));
  CHECK(canonical_conservation(fwd, map, e).relative < 10.0 * opt.tolerance);
  CHECK(fwd.max_energy_drift < 1e-12);
  // reversed motion across the same edge undoes the field change
  const Trajectory back = integrate_trajectory(e, {r0, 0.0, 0.01}, {0.0, 0.0, -1e9}, map, -1e-5, opt);
  const Vec3 end_b = back.back().position;
  CHECK(fixture::azimuthal({end_b.x, end_b.y}, back.back().momentum.transverse()) ==
        doctest::Approx(-expected).epsilon(1e-4));
  CHECK(canonical_conservation(back, map, e).relative < 10.0 * opt.tolerance);
}

TEST_CASE("canonical momentum is conserved along an axis-aligned crossing") {
  const auto e = ParticleSpecies::positron();
  for (double tol : {1e-8, 1e-10}) {
    const FieldMap map = fixture::crossing(1.0, -1.0, 1e-3);
    IntegrationOptions opt;
    opt.tolerance = tol;
    const Trajectory tr = integrate_trajectory(e, {1e-6, 2e-7, -8e-3}, {3.0, -2.0, 1e9}, map, 8e-3, opt);
    const CanonicalDrift drift = canonical_conservation(tr, map, e);
    CHECK(drift.scale > 0.0);
    CHECK(drift.relative < 10.0 * tol);
  }
}

TEST_CASE("a gauge axis off the symmetry axis is not conserved") {
  const auto e = ParticleSpecies::electron();
  const FieldMap map = fixture::crossing(1.0, 0.0, 1e-3);
  const Trajectory tr = integrate_trajectory(e, {1e-6, 0.0, -8e-3}, {0.0, 0.0, 1e9}, map, 8e-3);
  const double on_axis = canonical_conservation(tr, map, e).relative;
  const double off_axis = canonical_conservation(tr, map, e, {5e-7, 0.0}).relative;
  CHECK(off_axis > 1e3 * std::max(on_axis, 1e-14));
}

TEST_CASE("uniform circle keeps its canonical momentum") {
  const auto e = ParticleSpecies::electron();
  const FieldMap map = uniform(2.0);
  IntegrationOptions opt;
  opt.tolerance = 1e-10;
  const Trajectory tr = integrate_trajectory(e, {2e-6, -1e-6, 0.0}, {800.0, 300.0, 1e5}, map, 3e-3, opt);
  CHECK(canonical_conservation(tr, map, e).relative < 10.0 * opt.tolerance);
}

TEST_CASE("energy drift shrinks with the tolerance") {
  const auto e = ParticleSpecies::electron();
  const FieldMap map = fixture::crossing(1.0, 0.3, 1e-3);
  double previous = 1.0;
  std::size_t steps = 0;
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    IntegrationOptions opt;
    opt.tolerance = tol;
    const Trajectory tr = integrate_trajectory(e, {1e-6, 0.0, -8e-3}, {50.0, 10.0, 1e6}, map, 8e-3, opt);
    const double drift = canonical_conservation(tr, map, e).relative;
    CHECK(drift <= previous);
    CHECK(tr.accepted_steps >= steps);
    previous = std::max(drift, 1e-16);
    steps = tr.accepted_steps;
  }
}

TEST_CASE("orbit radius matches the gyroradius after a crossing") {
  const auto e = ParticleSpecies::electron();
  const double r0 = 2e-6, pz = 1e6, lambda = 1e-6;
  for (double bt : {-1.0, 0.5, 2.0}) {
    const double period = 2.0 * oracle::kPi * pz / (oracle::kC * std::abs(bt));
    const FieldMap map = fixture::crossing(1.0, bt, lambda, 2.0 * period);
    IntegrationOptions opt;
    opt.tolerance = 1e-11;
    const Trajectory tr = integrate_trajectory(e, {r0, 0.0, -20 * lambda}, {0.0, 0.0, pz}, map, 1.2 * period, opt);
    const CircleFit fit = fit_transverse_circle(tr, 20 * lambda);
    const KickSet kick = general_transition_kick({r0, 0.0}, {}, {}, 1.0, bt, 0.0, e);
    const OrbitGeometry orbit = orbit_radius(kick.total, bt, e);
    CHECK(fit.radius == doctest::Approx(orbit.radius).epsilon(5e-3));
    if (bt == -1.0) CHECK(orbit.radius == doctest::Approx(r0).epsilon(1e-12));
  }
}

TEST_CASE("integration errors") {
  const auto e = ParticleSpecies::electron();
  const FieldMap map = uniform(1.0);
  CHECK_THROWS(integrate_trajectory(e, {}, {0.0, 0.0, 0.0}, map, 1.0));
  IntegrationOptions opt;
  opt.max_steps = 3;
  CHECK_THROWS_AS(integrate_trajectory(e, {}, {5e3, 0.0, 1e4}, map, 1.0, opt), IntegrationError);
}

TEST_CASE("phase spread") {
  BeamQuantumState s;
  s.species = ParticleSpecies::electron();
  s.p_z = 1e4;
  s.w0 = magnetic_width(1.0, s.species);
  std::vector<double> z;
  for (int i = 0; i <= 20; ++i) z.push_back(i * 1e-3);

  SUBCASE("zero for l = 0 at fixed p_z") {
    s.ell = 0;
    const auto rep = phase_spread(s, 1.0, z);
    for (double v : rep.var_phi) CHECK(v == 0.0);
    CHECK(!rep.divergent);
  }
  SUBCASE("grows with z and with the p_z spread") {
    for (int ell : {2, -3, 5}) {
      s.ell = ell;
      const auto sharp = phase_spread(s, 1.0, z);
      const auto spread = phase_spread(s, 1.0, z, 10.0);
      for (std::size_t i = 1; i < z.size(); ++i) {
        CHECK(sharp.var_phi[i] > sharp.var_phi[i - 1]);
        CHECK(spread.var_phi[i] > sharp.var_phi[i]);
      }
      CHECK(sharp.var_omega > 0.0);
      // ledger is a property of the state, not of the spreading
      CHECK(sharp.ledger.canonical_intrinsic == ell);
    }
  }
  SUBCASE("|l| = 1 is flagged") {
    s.ell = 1;
    CHECK(phase_spread(s, 1.0, z).divergent);
  }
  SUBCASE("mean precession is the Larmor rate for l = 0") {
    s.ell = 0;
    const auto rep = phase_spread(s, 1.0, z);
    const double eps = landau_energy(s, 1.0);
    CHECK(rep.mean_omega == doctest::Approx(-0.5 * cyclotron_frequency(s.species, 1.0, eps)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(phase_spread(s, 0.0, z), DomainError);
}
