#include "twist/oam_ledger.hpp"

#include <cmath>
#include <cstdlib>

#include "twist/errors.hpp"

namespace twist {

namespace {

using units::kNatural;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double half_qb(double b_tesla, const ParticleSpecies& species) { return 0.5 * charge_field(species, b_tesla); }

}  // namespace

double kinetic_from_canonical(double canonical, double b_z_tesla, const ParticleSpecies& species, double r_sq_m2) {
  if (r_sq_m2 < 0.0) throw DomainError("r^2 must be non-negative");
  return canonical - half_qb(b_z_tesla, species) * kNatural.area_from_si(r_sq_m2);
}

long long kinetic_from_canonical(long long canonical, double b_z_tesla, const ParticleSpecies& species,
                                 const MeanSquareRadius& r_sq) {
  const double abs_qb = std::abs(charge_field(species, b_z_tesla));
  if (abs_qb == 0.0) return canonical;
  if (abs_qb != r_sq.abs_qb)
    throw DomainError("exact Landau substitution needs the field the radius was built for");
  // (q B / 2) * 2 quanta / |q B| = sgn(q B) quanta
  return canonical - sign_of(species.charge * b_z_tesla) * r_sq.quanta;
}

LandauKinetic landau_kinetic(int n, int ell, const ParticleSpecies& species, int field_sign) {
  species.require_charged();
  if (n < 0) throw DomainError("radial quantum number n must be >= 0");
  const long long l = ell;
  const int s = species.charge_sign() * (field_sign < 0 ? -1 : 1);
  LandauKinetic k;
  k.kinetic = l - s * (2LL * n + std::llabs(l) + 1);
  k.kinetic_minus_twice_canonical = -s * (2LL * n + std::llabs(l) + s * l + 1);
  return k;
}

double classical_limit_kinetic(double canonical, const ParticleSpecies& species) {
  return canonical - sign_of(species.charge) * std::abs(canonical);
}

double intrinsic_canonical(double r_m, double pi_phi_ev, const ParticleSpecies& species) {
  if (r_m < 0.0) throw DomainError("radius must be non-negative");
  return -sign_of(species.charge) * kNatural.length_from_si(r_m) * std::abs(pi_phi_ev) / 2.0;
}

double time_dependent_kinetic(double canonical, double b_z_tesla, const ParticleSpecies& species, double r0_m,
                              double r_m, double phase) {
  if (r0_m < 0.0 || r_m < 0.0) throw DomainError("radii must be non-negative");
  const double bracket = r0_m * r0_m + r_m * r_m + 2.0 * r0_m * r_m * std::cos(phase);
  return canonical - half_qb(b_z_tesla, species) * kNatural.area_from_si(bracket);
}

void OamLedger::add(OamContribution c) {
  if (c.component == "intrinsic") {
    canonical_intrinsic += c.canonical;
    kinetic_intrinsic += c.kinetic;
  } else {
    canonical_extrinsic += c.canonical;
    kinetic_extrinsic += c.kinetic;
  }
  contributions.push_back(std::move(c));
}

OamLedger ledger_for_state(const BeamQuantumState& state, double b_z_tesla) {
  state.validate();
  OamLedger ledger;
  const auto& sp = state.species;
  if (sp.charge != 0.0 && b_z_tesla != 0.0) ledger.nonbasic = sign_of(sp.charge * b_z_tesla) * state.ell > 0;

  const double r_sq = 0.5 * (2.0 * state.n + std::abs(state.ell) + 1.0) * state.w0 * state.w0;
  const double ell = state.ell;
  ledger.add({"intrinsic", "mode quantum number l", ell, ell});
  if (b_z_tesla != 0.0) {
    ledger.add({"intrinsic", "field term -(qB/2)<r^2>", 0.0, kinetic_from_canonical(0.0, b_z_tesla, sp, r_sq)});
  }

  const double r0_sq = norm2(state.axis_offset);
  const double orbital = kNatural.length_from_si(1.0) * cross(state.axis_offset, state.extrinsic_momentum);
  if (orbital != 0.0) ledger.add({"extrinsic", "beam motion R0 x pi0", orbital, orbital});
  if (b_z_tesla != 0.0 && r0_sq > 0.0) {
    // Canonical picks up +(qB/2) R0^2 from e R0 x A0; the kinetic part does not.
    ledger.add({"extrinsic", "axis offset (qB/2) R0^2", -kinetic_from_canonical(0.0, b_z_tesla, sp, r0_sq), 0.0});
  }
  return ledger;
}

}  // namespace twist
