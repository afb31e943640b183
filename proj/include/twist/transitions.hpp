#pragma once

#include <optional>

#include "twist/beamstate.hpp"
#include "twist/fields.hpp"
#include "twist/oam_ledger.hpp"

namespace twist {

// Momenta in eV, lengths in m, fields in tesla (signed z components).

/// e r (B - B~) / 2. Covers antiparallel (B + |B~|), parallel (B - |B~|) and vacuum (B).
double azimuthal_kick_intrinsic(double r_m, double b, double b_tilde, const ParticleSpecies& species);
/// Same law at the state axis offset R0: moves the beam as a whole.
double azimuthal_kick_extrinsic(double r0_m, double b, double b_tilde, const ParticleSpecies& species);

struct KickSet {
  Vec2 total;
  Vec2 intrinsic;
  Vec2 extrinsic;
};

/// Misaligned-solenoid kick. d is the vector from the first to the second
/// solenoid axis, b0 the field between them.
KickSet general_transition_kick(Vec2 r0, Vec2 r, Vec2 d, double b, double b_tilde, double b0,
                                const ParticleSpecies& species);
/// Vector-field form; throws DomainError unless all three fields are along z.
KickSet general_transition_kick(Vec2 r0, Vec2 r, Vec2 d, const Vec3& b, const Vec3& b_tilde, const Vec3& b0,
                                const ParticleSpecies& species);

/// Circular orbit of the beam centroid in the second field.
struct OrbitGeometry {
  bool drifts = false;   // B~ = 0: no orbit, straight-line motion
  double radius = 0.0;   // m
  Vec2 center_from_beam; // m, orbit centre minus beam position
  double kinetic_oam = 0.0;  // (rho x pi)_z about the centre, hbar
};

OrbitGeometry orbit_radius(Vec2 delta_pi0, double b_tilde, const ParticleSpecies& species);

/// Nearest integer; exact half-integers round toward zero.
long long round_half_toward_zero(double x);

struct VacuumExit {
  BeamQuantumState state;       // w0 = width at the boundary, same (n, l)
  Vec2 extrinsic_kick;          // eV
  Vec2 drift_slope;             // dx/dz, dy/dz of the centroid
  OamLedger ledger_after;       // extrinsic parts zero
};

struct TransitionReport {
  KickSet kicks;                // intrinsic kick evaluated at r = (sqrt<r^2>, 0)
  OrbitGeometry orbit;
  Vec2 orbit_center;            // m, relative to the second axis
  long long frak_l = 0;         // quantized extra canonical OAM
  double classical_frak_l = 0.0;           // -(e/2) B~ R^2
  double delta_canonical_extrinsic = 0.0;  // = frak_l
  double delta_kinetic_extrinsic = 0.0;    // frak_l - (e/2) B~ R^2
  double classical_delta_kinetic = 0.0;    // -e B~ R^2
  double kinetic_intrinsic_mode = 0.0;     // l - (e/2) B~ <r^2>
  long long canonical_intrinsic_total = 0; // l + frak_l
  /// As written: L~ - e B~ (R^2 + <r^2>).
  double kinetic_intrinsic_total = 0.0;
  /// Sum of the mode and orbit parts: L~ - (e/2) B~ (R^2 + <r^2>).
  double kinetic_intrinsic_total_additive = 0.0;
  bool factor_mismatch = false;  // the two totals above disagree
  BeamQuantumState new_state;
  OamLedger ledger_before;
  OamLedger ledger_after;
  std::optional<VacuumExit> vacuum;
};

/// State resident in `from` crossing into `to`. Delegates to vacuum_exit when
/// `to` carries no axial field. b0 is the field between the two solenoids.
TransitionReport post_transition_state(const BeamQuantumState& state, const FieldRegion& from, const FieldRegion& to,
                                       double b0 = 0.0);

/// width_at_boundary <= 0 uses state.w0.
VacuumExit vacuum_exit(const BeamQuantumState& state, const FieldRegion& from, double width_at_boundary = 0.0,
                       double gap_field = 0.0, Vec2 d = {});

struct AntiparallelInvariants {
  double delta_pi_perp_sq = 0.0;  // eV^2, 2 q B l
  double delta_pz_sq = 0.0;       // eV^2, -2 q B (l + 2 s_z)
};

/// Target field exactly -B.
AntiparallelInvariants antiparallel_invariants(const BeamQuantumState& state, double b_tesla);

}  // namespace twist
