#include "twist/beamstate.hpp"

#include <cmath>
#include <cstdlib>

#include "twist/errors.hpp"

namespace twist {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

ParticleSpecies ParticleSpecies::electron(double spin_z) {
  return {"electron", -1.0, units::kElectronMassEv, spin_z};
}

ParticleSpecies ParticleSpecies::positron(double spin_z) {
  return {"positron", +1.0, units::kElectronMassEv, spin_z};
}

int ParticleSpecies::charge_sign() const { return sign_of(charge); }

void ParticleSpecies::validate() const {
  if (!(mass > 0.0)) throw DomainError("species '" + name + "': mass must be positive");
  if (std::abs(spin_z) > 0.5) throw DomainError("species '" + name + "': |s_z| must not exceed 1/2");
  if (std::abs(2.0 * spin_z - std::round(2.0 * spin_z)) > 0.0)
    throw DomainError("species '" + name + "': s_z must be a multiple of 1/2");
}

void ParticleSpecies::require_charged() const {
  validate();
  if (charge == 0.0) throw DomainError("species '" + name + "' is neutral");
}

void BeamQuantumState::validate() const {
  species.validate();
  if (n < 0) throw DomainError("radial quantum number n must be >= 0");
  if (!(w0 > 0.0)) throw DomainError("beam waist w0 must be positive");
  if (!(p_z > 0.0)) throw DomainError("longitudinal momentum p_z must be positive");
}

double charge_field(const ParticleSpecies& species, double b_tesla) {
  return species.charge * units::kNatural.field_from_si(b_tesla);
}

double magnetic_width_natural(double b_tesla, const ParticleSpecies& species) {
  species.require_charged();
  if (b_tesla == 0.0) throw DomainError("magnetic width undefined for zero field");
  return 2.0 / std::sqrt(std::abs(charge_field(species, b_tesla)));
}

double magnetic_width(double b_tesla, const ParticleSpecies& species) {
  return units::kNatural.length_to_si(magnetic_width_natural(b_tesla, species));
}

long long landau_orbital_quanta(int n, int ell, int charge_field_sign) {
  const long long l = ell;
  return 2LL * n + 1 + std::llabs(l) - charge_field_sign * l;
}

double landau_energy(const BeamQuantumState& state, double b_tesla) {
  state.validate();
  state.species.require_charged();
  if (b_tesla == 0.0) throw DomainError("Landau energy undefined for zero field");
  const double qb = charge_field(state.species, b_tesla);
  const long long orbital = landau_orbital_quanta(state.n, state.ell, sign_of(qb));
  // Integer part first so that degenerate (n, l) give bit-identical sums.
  const double quanta = static_cast<double>(orbital) + 2.0 * state.species.spin_z * sign_of(b_tesla);
  const double m = state.species.mass;
  const double radicand = m * m + state.p_z * state.p_z + quanta * std::abs(qb);
  if (radicand < 0.0) throw DomainError("negative radicand in Landau energy");
  return std::sqrt(radicand);
}

MeanSquareRadius mean_square_radius(int n, int ell, double b_tesla, const ParticleSpecies& species) {
  species.require_charged();
  if (n < 0) throw DomainError("radial quantum number n must be >= 0");
  if (b_tesla == 0.0) throw DomainError("Landau radius undefined for zero field");
  MeanSquareRadius r;
  r.quanta = 2LL * n + std::llabs(static_cast<long long>(ell)) + 1;
  r.abs_qb = std::abs(charge_field(species, b_tesla));
  r.b_tesla = b_tesla;
  r.charge = species.charge;
  return r;
}

StateClass classify_state(const ParticleSpecies& species, int ell) {
  species.require_charged();
  return species.charge_sign() * ell <= 0 ? StateClass::basic : StateClass::nonbasic;
}

const char* to_string(StateClass c) { return c == StateClass::basic ? "basic" : "nonbasic"; }

}  // namespace twist
