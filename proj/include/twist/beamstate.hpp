#pragma once

#include <string>

#include "twist/units.hpp"
#include "twist/vec.hpp"

namespace twist {

/// Charged (or neutral) particle kind. charge is a signed multiple of the
/// elementary charge, mass is in eV, spin_z is the spin projection.
struct ParticleSpecies {
  std::string name = "electron";
  double charge = -1.0;
  double mass = units::kElectronMassEv;
  double spin_z = -0.5;

  static ParticleSpecies electron(double spin_z = -0.5);
  static ParticleSpecies positron(double spin_z = 0.5);

  /// -1, 0 or +1.
  int charge_sign() const;
  /// Throws DomainError for neutral species or bad mass/spin.
  void require_charged() const;
  void validate() const;
};

/// Twisted-beam quantum state transported through field regions.
struct BeamQuantumState {
  ParticleSpecies species;
  int n = 0;
  int ell = 0;
  double p_z = 1.0e6;           // eV
  double w0 = 5.0e-8;           // m, waist at the reference plane
  Vec2 axis_offset;             // m, solenoid axis -> state symmetry axis
  Vec2 extrinsic_momentum;      // eV, transverse kinetic momentum of the beam as a whole

  void validate() const;
};

/// Signed q B in eV^2 (natural units) for a field given in tesla.
double charge_field(const ParticleSpecies& species, double b_tesla);

/// w_m = 2 / sqrt(|e B|), natural units (eV^-1).
double magnetic_width_natural(double b_tesla, const ParticleSpecies& species);
/// w_m in metres.
double magnetic_width(double b_tesla, const ParticleSpecies& species);

/// Integer part 2n + 1 + |l| - sgn(qB) l of the Landau quantum-number sum.
long long landau_orbital_quanta(int n, int ell, int charge_field_sign);

/// E = sqrt(m^2 + p_z^2 + (2n+1+|l| - sgn(qB) l + 2 s_z sgn(B)) |qB|), eV.
/// For negative charge in B > 0 this is the textbook level formula; the
/// orbital term follows l -> -l for positive charge, the spin term follows
/// the field direction.
double landau_energy(const BeamQuantumState& state, double b_tesla);

/// <r^2> of a Landau state kept as the exact count 2n+|l|+1 together with
/// the field it refers to.
struct MeanSquareRadius {
  long long quanta = 1;     // 2n + |l| + 1
  double abs_qb = 1.0;      // |q B|, eV^2
  double b_tesla = 0.0;     // signed source field
  double charge = -1.0;

  /// 2 (2n+|l|+1) / |qB|, eV^-2.
  double natural() const { return 2.0 * static_cast<double>(quanta) / abs_qb; }
  /// m^2.
  double si() const { return units::kNatural.area_to_si(natural()); }
};

MeanSquareRadius mean_square_radius(int n, int ell, double b_tesla, const ParticleSpecies& species);

enum class StateClass { basic, nonbasic };

/// basic iff sgn(e) l <= 0 (field along +z).
StateClass classify_state(const ParticleSpecies& species, int ell);

const char* to_string(StateClass c);

}  // namespace twist
