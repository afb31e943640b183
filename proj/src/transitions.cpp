#include "twist/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "twist/errors.hpp"

namespace twist {

namespace {

using units::kNatural;

// e (B - B~) x r / 2 for one coordinate length in metres, result in eV.
double kick_scale(double delta_b, const ParticleSpecies& species) {
  return 0.5 * species.charge * units::kEvPerTeslaMetre * delta_b;
}

Vec2 field_cross(double coeff_b, const ParticleSpecies& species, Vec2 v) {
  return z_cross(kick_scale(coeff_b, species), v);
}

double mean_r_sq(const BeamQuantumState& s) {
  return 0.5 * (2.0 * s.n + std::abs(s.ell) + 1.0) * s.w0 * s.w0;
}

}  // namespace

double azimuthal_kick_intrinsic(double r_m, double b, double b_tilde, const ParticleSpecies& species) {
  if (r_m < 0.0) throw DomainError("radius must be non-negative");
  return kick_scale(b - b_tilde, species) * r_m;
}

double azimuthal_kick_extrinsic(double r0_m, double b, double b_tilde, const ParticleSpecies& species) {
  if (r0_m < 0.0) throw DomainError("axis offset must be non-negative");
  return kick_scale(b - b_tilde, species) * r0_m;
}

KickSet general_transition_kick(Vec2 r0, Vec2 r, Vec2 d, double b, double b_tilde, double b0,
                                const ParticleSpecies& species) {
  KickSet k;
  k.intrinsic = field_cross(b - b_tilde, species, r);
  k.extrinsic = field_cross(b - b_tilde, species, r0) + field_cross(b_tilde - b0, species, d);
  k.total = field_cross(b - b_tilde, species, r0 + r) + field_cross(b_tilde - b0, species, d);
  return k;
}

KickSet general_transition_kick(Vec2 r0, Vec2 r, Vec2 d, const Vec3& b, const Vec3& b_tilde, const Vec3& b0,
                                const ParticleSpecies& species) {
  for (const Vec3* v : {&b, &b_tilde, &b0}) {
    if (v->x != 0.0 || v->y != 0.0) throw DomainError("transition kick needs fields along z");
  }
  return general_transition_kick(r0, r, d, b.z, b_tilde.z, b0.z, species);
}

OrbitGeometry orbit_radius(Vec2 delta_pi0, double b_tilde, const ParticleSpecies& species) {
  species.require_charged();
  OrbitGeometry g;
  if (b_tilde == 0.0) {
    g.drifts = true;
    return g;
  }
  const double qb = charge_field(species, b_tilde);
  g.radius = kNatural.length_to_si(norm(delta_pi0) / std::abs(qb));
  // Beam sits at centre + (z x pi)/(qB); Lorentz force points back at the centre.
  g.center_from_beam = -kNatural.length_to_si(1.0) * (z_cross(1.0, delta_pi0) / qb);
  g.kinetic_oam = -norm2(delta_pi0) / qb;
  return g;
}

long long round_half_toward_zero(double x) {
  const double f = std::floor(x);
  const double frac = x - f;
  if (frac > 0.5) return static_cast<long long>(f) + 1;
  if (frac < 0.5) return static_cast<long long>(f);
  return x > 0.0 ? static_cast<long long>(f) : static_cast<long long>(f) + 1;
}

VacuumExit vacuum_exit(const BeamQuantumState& state, const FieldRegion& from, double width_at_boundary,
                       double gap_field, Vec2 d) {
  state.validate();
  VacuumExit out;
  const double b = from.axial_field();
  out.extrinsic_kick = field_cross(b - gap_field, state.species, state.axis_offset) +
                       field_cross(gap_field, state.species, d);
  out.state = state;
  out.state.w0 = width_at_boundary > 0.0 ? width_at_boundary : state.w0;
  out.state.axis_offset = state.axis_offset - d;
  out.state.extrinsic_momentum = state.extrinsic_momentum + out.extrinsic_kick;
  out.drift_slope = out.state.extrinsic_momentum / state.p_z;

  const double ell = state.ell;
  out.ledger_after.add({"intrinsic", "mode quantum number l", ell, ell});
  out.ledger_after.add({"extrinsic", "vacuum: no extrinsic OAM", 0.0, 0.0});
  return out;
}

TransitionReport post_transition_state(const BeamQuantumState& state, const FieldRegion& from, const FieldRegion& to,
                                       double b0) {
  state.validate();
  state.species.require_charged();
  TransitionReport rep;
  const double b = from.axial_field();
  const double bt = to.axial_field();
  const Vec2 d = to.axis_offset - from.axis_offset;
  const double r_sq = mean_r_sq(state);
  const auto& sp = state.species;

  rep.ledger_before = ledger_for_state(state, b);
  rep.kicks = general_transition_kick(state.axis_offset, {std::sqrt(r_sq), 0.0}, d, b, bt, b0, sp);

  if (bt == 0.0) {
    rep.vacuum = vacuum_exit(state, from, 0.0, b0, d);
    rep.new_state = rep.vacuum->state;
    rep.ledger_after = rep.vacuum->ledger_after;
    rep.orbit.drifts = true;
    rep.kinetic_intrinsic_mode = state.ell;
    rep.canonical_intrinsic_total = state.ell;
    rep.kinetic_intrinsic_total = state.ell;
    rep.kinetic_intrinsic_total_additive = state.ell;
    return rep;
  }

  const Vec2 pi0 = state.extrinsic_momentum + rep.kicks.extrinsic;
  const Vec2 beam_pos = state.axis_offset - d;
  rep.orbit = orbit_radius(pi0, bt, sp);
  rep.orbit_center = beam_pos + rep.orbit.center_from_beam;

  const double half_qbt = 0.5 * charge_field(sp, bt);
  const double big_r_sq = kNatural.area_from_si(rep.orbit.radius * rep.orbit.radius);
  const double r_sq_nat = kNatural.area_from_si(r_sq);
  rep.classical_frak_l = -half_qbt * big_r_sq;
  rep.frak_l = round_half_toward_zero(rep.classical_frak_l);
  rep.delta_canonical_extrinsic = static_cast<double>(rep.frak_l);
  rep.delta_kinetic_extrinsic = rep.frak_l - half_qbt * big_r_sq;
  rep.classical_delta_kinetic = -2.0 * half_qbt * big_r_sq;
  rep.kinetic_intrinsic_mode = state.ell - half_qbt * r_sq_nat;
  rep.canonical_intrinsic_total = state.ell + rep.frak_l;
  rep.kinetic_intrinsic_total =
      static_cast<double>(rep.canonical_intrinsic_total) - 2.0 * half_qbt * (big_r_sq + r_sq_nat);
  rep.kinetic_intrinsic_total_additive =
      static_cast<double>(rep.canonical_intrinsic_total) - half_qbt * (big_r_sq + r_sq_nat);
  const double scale = std::max(1.0, std::abs(rep.kinetic_intrinsic_total_additive));
  rep.factor_mismatch = std::abs(rep.kinetic_intrinsic_total - rep.kinetic_intrinsic_total_additive) > 1e-9 * scale;

  rep.new_state = state;
  rep.new_state.axis_offset = beam_pos;
  rep.new_state.extrinsic_momentum = pi0;

  const double ell = state.ell;
  rep.ledger_after.nonbasic = charge_field(sp, bt) * state.ell > 0.0;
  rep.ledger_after.add({"intrinsic", "mode quantum number l", ell, ell});
  rep.ledger_after.add({"intrinsic", "field term -(qB~/2)<r^2>", 0.0, -half_qbt * r_sq_nat});
  rep.ledger_after.add(
      {"intrinsic", "transition orbit frak_l", static_cast<double>(rep.frak_l), rep.delta_kinetic_extrinsic});
  const double c_sq = kNatural.area_from_si(norm2(rep.orbit_center));
  if (c_sq > 0.0) rep.ledger_after.add({"extrinsic", "orbit centre offset (qB~/2) C^2", half_qbt * c_sq, 0.0});
  return rep;
}

AntiparallelInvariants antiparallel_invariants(const BeamQuantumState& state, double b_tesla) {
  state.validate();
  state.species.require_charged();
  const double qb = charge_field(state.species, b_tesla);
  return {2.0 * qb * state.ell, -2.0 * qb * (state.ell + 2.0 * state.species.spin_z)};
}

}  // namespace twist
