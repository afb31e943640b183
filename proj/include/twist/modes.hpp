#pragma once

#include <complex>
#include <span>
#include <vector>

#include "twist/beamstate.hpp"

namespace twist {

/// Psi = A exp(i Phi), Phi = l phi + k r^2 / (2R) - Phi_G. Lengths in metres;
/// the amplitude is normalized so that \int |Psi|^2 r dr dphi = 1 with r in m.
struct ModeAmplitude {
  std::complex<double> value;
  int n = 0;
  int ell = 0;
  double width = 0.0;            // w at this z, m
  double radial = 0.0;           // real factor A, 1/m
  double azimuthal_phase = 0.0;  // l phi
  double curvature_phase = 0.0;  // k r^2 / (2R)
  double gouy_phase = 0.0;       // Phi_G

  double abs2() const { return std::norm(value); }
};

/// Width, inverse curvature and Gouy phase at one z. inv_radius == 0 is a flat wavefront.
struct EnvelopePoint {
  double width = 0.0;       // m
  double inv_radius = 0.0;  // 1/m
  double gouy = 0.0;        // rad

  bool flat() const { return inv_radius == 0.0; }
};

struct EnvelopeTrace {
  std::vector<double> z;           // m
  std::vector<double> width;       // m
  std::vector<double> inv_radius;  // 1/m
  std::vector<double> gouy;        // rad
};

/// Real radial factor of an LG profile of width w for a batch of radii (m).
void lg_radial_profile(int n, int ell, double width, std::span<const double> r, std::span<double> out);
double lg_radial_factor(int n, int ell, double width, double r);

/// Free-space envelope; k is the wavenumber in eV.
EnvelopePoint vacuum_envelope(int n, int ell, double w0, double k_ev, double z);

ModeAmplitude lg_vacuum_amplitude(int n, int ell, double w0, double k_ev, double r, double phi, double z);

/// Transverse Landau profile (no exp(i p_z z) factor).
ModeAmplitude landau_mode(int n, int ell, double b_tesla, const ParticleSpecies& species, double r, double phi);

/// In-field LG envelope. The secular Gouy term uses l_eff = -sgn(qB) l and
/// 2 s_z sgn(B), so an electron in B > 0 reproduces the textbook form.
EnvelopePoint field_envelope(int n, int ell, double s_z, double w0, double b_tesla, double k_ev, double z,
                             const ParticleSpecies& species = ParticleSpecies::electron());

ModeAmplitude lg_field_amplitude(int n, int ell, double s_z, double w0, double b_tesla, double k_ev,
                                 double r, double phi, double z,
                                 const ParticleSpecies& species = ParticleSpecies::electron());

/// z_m = k w_m^2 / 2 in metres.
double rayleigh_in_field(double b_tesla, double k_ev, const ParticleSpecies& species = ParticleSpecies::electron());

/// (2n+1+|l|+l+2 s_z) z / z_m, negative-charge convention.
double paraxial_gouy(int n, int ell, double s_z, double z, double z_m);

EnvelopeTrace sample_vacuum_envelope(int n, int ell, double w0, double k_ev, std::span<const double> z);
EnvelopeTrace sample_field_envelope(int n, int ell, double s_z, double w0, double b_tesla, double k_ev,
                                    std::span<const double> z,
                                    const ParticleSpecies& species = ParticleSpecies::electron());

/// 2 pi \int A^2 r dr for the library's own profile, adaptive quadrature.
double lg_profile_norm(int n, int ell, double width);

}  // namespace twist
