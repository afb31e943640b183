#pragma once

#include <string>
#include <vector>

#include "twist/beamstate.hpp"

namespace twist {

// All OAM values are in units of hbar.

/// L - (q B_z / 2) r^2 with r^2 in m^2.
double kinetic_from_canonical(double canonical, double b_z_tesla, const ParticleSpecies& species, double r_sq_m2);

/// Exact form for a Landau radius: the substitution collapses to
/// L - sgn(q B_z) (2n+|l|+1). Requires |B_z| equal to the field the radius
/// was built for, otherwise the result is not an integer and DomainError is thrown.
long long kinetic_from_canonical(long long canonical, double b_z_tesla, const ParticleSpecies& species,
                                 const MeanSquareRadius& r_sq);

struct LandauKinetic {
  long long kinetic = 0;                     // <L_kin> = l - sgn(qB)(2n+|l|+1)
  long long kinetic_minus_twice_canonical = 0;  // <L_kin> - 2 l
};

/// Field along +z unless field_sign = -1.
LandauKinetic landau_kinetic(int n, int ell, const ParticleSpecies& species, int field_sign = +1);

/// L - sgn(e)|L|: 2L for sgn(e)L <= 0, else 0.
double classical_limit_kinetic(double canonical, const ParticleSpecies& species);

/// -sgn(e) r |pi_phi| / 2; r in m, pi_phi in eV.
double intrinsic_canonical(double r_m, double pi_phi_ev, const ParticleSpecies& species);

/// L - (q B/2)[R0^2 + r^2 + 2 R0 r cos(phase)]; lengths in m.
double time_dependent_kinetic(double canonical, double b_z_tesla, const ParticleSpecies& species, double r0_m,
                              double r_m, double phase);

struct OamContribution {
  std::string component;  // "intrinsic", "extrinsic", "transition"
  std::string source;     // what produced the value
  double canonical = 0.0;
  double kinetic = 0.0;
};

/// Snapshot of the canonical/kinetic x intrinsic/extrinsic split about the solenoid axis.
/// Tags are diagnostic; only the totals are physical.
struct OamLedger {
  double canonical_intrinsic = 0.0;
  double canonical_extrinsic = 0.0;
  double kinetic_intrinsic = 0.0;
  double kinetic_extrinsic = 0.0;
  bool nonbasic = false;
  std::vector<OamContribution> contributions;

  double canonical_total() const { return canonical_intrinsic + canonical_extrinsic; }
  double kinetic_total() const { return kinetic_intrinsic + kinetic_extrinsic; }
  void add(OamContribution c);
};

/// Ledger of a state resident in a uniform field B_z (may be 0). The
/// intrinsic radius is <r^2> = (2n+|l|+1) w0^2 / 2.
OamLedger ledger_for_state(const BeamQuantumState& state, double b_z_tesla);

}  // namespace twist
