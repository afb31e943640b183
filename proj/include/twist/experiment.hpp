#pragma once

#include <vector>

#include "twist/beamstate.hpp"
#include "twist/dynamics.hpp"

namespace twist {

/// mu = q (L + 2 s_z) / (2 gamma m) in eV/T; L in hbar.
double magnetic_moment(double l_z, double s_z, const ParticleSpecies& species, double gamma);

/// f_x = q L kappa / (2 gamma m) in eV/m.
double sg_force(double l_z, double kappa, const ParticleSpecies& species, double gamma);

/// Quadrupole analyzer followed by a field-free drift to the target plane.
struct AnalyzerGeometry {
  double b_tilde = 2.0e-7;      // T
  double kappa = 1.3e-3;        // T/m
  double z_begin = -0.01;       // m
  double z_end = 0.01;          // m
  double z_target = 0.2;        // m
  double outlet_diameter = 10e-6;  // m
  double aperture_radius = 0.0;    // m; 0 disables the check

  double length() const { return z_end - z_begin; }
  void validate() const;
};

struct TwistedBeam {
  ParticleSpecies species = ParticleSpecies::positron();
  double l_z = 1.0e4;   // hbar; simulated as +l_z and -l_z
  double p_z = 160.0;   // eV
};

struct BeamHit {
  double l_z = 0.0;
  Vec2 hit;           // m, absolute position at the target
  Vec2 relative;      // m, relative to the l_z = 0 reference
  bool left_aperture = false;
  bool field_reversed = false;  // B~ + kappa x <= 0 somewhere inside the analyzer
};

struct DeflectionOutcome {
  BeamHit plus;
  BeamHit minus;
  BeamHit reference;
  double separation = 0.0;        // |x+ - x-|, m
  double mirror_asymmetry = 0.0;  // |x+ + x-| / separation, relative to the reference
  double y_deflection = 0.0;      // m, Lorentz part shared by both beams
  double y_mismatch = 0.0;        // |y+ - y-| / |y_deflection|
  double outlet_margin = 0.0;     // separation - outlet diameter
  bool resolvable = false;
  bool flagged = false;           // aperture or field-sign problem
};

DeflectionOutcome deflection_sim(const TwistedBeam& beam, const AnalyzerGeometry& geometry,
                                 const IntegrationOptions& options = {});

/// M = sqrt(m^2 + 2(2n+|l|+1)/w0^2), eV.
double effective_mass(const ParticleSpecies& species, int n, int ell, double w0_m);
/// M - m without cancellation.
double effective_mass_excess(const ParticleSpecies& species, int n, int ell, double w0_m);

/// 2 m_e - 6.8 eV.
double default_positronium_mass();

struct PositroniumVerdict {
  bool stable = false;
  double margin = 0.0;  // eV, 6.8 - (M - m_Ps)
};

PositroniumVerdict positronium_threshold(double effective_mass_ev, double m_ps_ev = default_positronium_mass());

/// OAM kept after thermalization, factor in [0, 1].
double retained_oam(double l_z, double retention_factor);

struct FourMomentum {
  double energy = 0.0;  // eV
  Vec3 momentum;        // eV
};

/// Boost to the frame where the total momentum vanishes; the energy there is the invariant mass.
FourMomentum boost_to_rest(const FourMomentum& total);

}  // namespace twist
