#include "twist/experiment.hpp"

#include <cmath>

#include "twist/errors.hpp"

namespace twist {

namespace {

void require_gamma(double gamma) {
  if (!(gamma >= 1.0)) throw DomainError("Lorentz factor must be >= 1");
}

FieldMap analyzer_map(const AnalyzerGeometry& g) {
  FieldRegion quad;
  quad.name = "analyzer";
  quad.kind = RegionKind::quadrupole;
  quad.z_begin = g.z_begin;
  quad.z_end = g.z_end;
  quad.kappa = g.kappa;
  quad.b_uniform = g.b_tilde;
  std::vector<FieldRegion> regions{quad};
  if (g.z_target > g.z_end) {
    FieldRegion drift;
    drift.name = "drift";
    drift.kind = RegionKind::vacuum;
    drift.z_begin = g.z_end;
    drift.z_end = g.z_target;
    regions.push_back(drift);
  }
  return FieldMap(std::move(regions));
}

BeamHit track(const ParticleSpecies& sp, double l_z, double p_z, const AnalyzerGeometry& g, const FieldMap& map,
              const IntegrationOptions& base) {
  IntegrationOptions opt = base;
  opt.force = [&, l_z](const Vec3& pos, const Vec3& pi) {
    if (pos.z < g.z_begin || pos.z >= g.z_end) return Vec3{};
    const double gamma = std::sqrt(sp.mass * sp.mass + dot(pi, pi)) / sp.mass;
    return Vec3{sg_force(l_z, g.kappa, sp, gamma), 0.0, 0.0};
  };
  if (opt.max_step <= 0.0) opt.max_step = g.length() / 50.0;
  const Trajectory tr = integrate_trajectory(sp, {0.0, 0.0, g.z_begin}, {0.0, 0.0, p_z}, map, g.z_target, opt);
  BeamHit hit;
  hit.l_z = l_z;
  hit.hit = tr.back().position.transverse();
  for (const auto& p : tr.points) {
    if (g.aperture_radius > 0.0 && norm(p.position.transverse()) > g.aperture_radius) hit.left_aperture = true;
    if (p.position.z >= g.z_begin && p.position.z < g.z_end && g.b_tilde + g.kappa * p.position.x <= 0.0)
      hit.field_reversed = true;
  }
  return hit;
}

}  // namespace

double magnetic_moment(double l_z, double s_z, const ParticleSpecies& species, double gamma) {
  require_gamma(gamma);
  species.validate();
  return species.charge * (l_z + 2.0 * s_z) * units::kTeslaToEv2 / (2.0 * gamma * species.mass);
}

double sg_force(double l_z, double kappa, const ParticleSpecies& species, double gamma) {
  return magnetic_moment(l_z, 0.0, species, gamma) * kappa;
}

void AnalyzerGeometry::validate() const {
  if (!(z_end > z_begin)) throw DomainError("analyzer length must be positive");
  if (z_target < z_end) throw DomainError("target plane must lie at or behind the analyzer exit");
  if (outlet_diameter < 0.0 || aperture_radius < 0.0) throw DomainError("diameters must be non-negative");
  if (!(b_tilde > 0.0)) throw DomainError("analyzer needs B~ > 0 on axis");
}

DeflectionOutcome deflection_sim(const TwistedBeam& beam, const AnalyzerGeometry& g, const IntegrationOptions& opt) {
  g.validate();
  beam.species.require_charged();
  if (!(beam.p_z > 0.0)) throw DomainError("beam p_z must be positive");
  const FieldMap map = analyzer_map(g);
  DeflectionOutcome out;
  out.reference = track(beam.species, 0.0, beam.p_z, g, map, opt);
  out.plus = track(beam.species, beam.l_z, beam.p_z, g, map, opt);
  out.minus = track(beam.species, -beam.l_z, beam.p_z, g, map, opt);
  for (BeamHit* h : {&out.plus, &out.minus, &out.reference}) h->relative = h->hit - out.reference.hit;

  out.separation = std::abs(out.plus.relative.x - out.minus.relative.x);
  out.mirror_asymmetry = out.separation > 0.0 ? std::abs(out.plus.relative.x + out.minus.relative.x) / out.separation : 0.0;
  out.y_deflection = 0.5 * (out.plus.hit.y + out.minus.hit.y);
  out.y_mismatch = out.y_deflection != 0.0 ? std::abs(out.plus.hit.y - out.minus.hit.y) / std::abs(out.y_deflection) : 0.0;
  out.outlet_margin = out.separation - g.outlet_diameter;
  out.resolvable = out.outlet_margin > 0.0;
  for (const BeamHit* h : {&out.plus, &out.minus, &out.reference})
    out.flagged = out.flagged || h->left_aperture || h->field_reversed;
  return out;
}

double effective_mass_excess(const ParticleSpecies& species, int n, int ell, double w0_m) {
  species.validate();
  if (!(w0_m > 0.0)) throw DomainError("beam waist w0 must be positive");
  if (n < 0) throw DomainError("radial quantum number n must be >= 0");
  const double w = units::kNatural.length_from_si(w0_m);
  const double x = 2.0 * (2.0 * n + std::abs(static_cast<double>(ell)) + 1.0) / (w * w);
  const double m = species.mass;
  return x / (std::sqrt(m * m + x) + m);
}

double effective_mass(const ParticleSpecies& species, int n, int ell, double w0_m) {
  return species.mass + effective_mass_excess(species, n, ell, w0_m);
}

double default_positronium_mass() { return 2.0 * units::kElectronMassEv - units::kPositroniumBindingEv; }

PositroniumVerdict positronium_threshold(double effective_mass_ev, double m_ps_ev) {
  if (effective_mass_ev < m_ps_ev) throw DomainError("effective mass below the positronium rest mass");
  const double excess = effective_mass_ev - m_ps_ev;
  return {excess < units::kPositroniumBindingEv, units::kPositroniumBindingEv - excess};
}

double retained_oam(double l_z, double retention_factor) {
  if (!(retention_factor >= 0.0 && retention_factor <= 1.0)) throw DomainError("retention factor must be in [0, 1]");
  return retention_factor * l_z;
}

FourMomentum boost_to_rest(const FourMomentum& total) {
  const double p2 = dot(total.momentum, total.momentum);
  if (!(total.energy * total.energy > p2)) throw DomainError("total four-momentum is not timelike");
  const double mass = std::sqrt(total.energy * total.energy - p2);
  if (p2 == 0.0) return {mass, {}};
  const double gamma = total.energy / mass;
  const Vec3 beta = total.momentum * (1.0 / total.energy);
  const double b2 = dot(beta, beta);
  const double bp = dot(beta, total.momentum);
  FourMomentum out;
  out.energy = gamma * (total.energy - bp);
  out.momentum = total.momentum + beta * ((gamma - 1.0) * bp / b2 - gamma * total.energy);
  return out;
}

}  // namespace twist
