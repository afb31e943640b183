#include "twist/modes.hpp"

#include <cmath>
#include <cstdlib>

#include "twist/errors.hpp"
#include "twist/kernels.hpp"
#include "twist/laguerre.hpp"
#include "twist/quadrature.hpp"

namespace twist {

namespace {

using units::kNatural;
using units::kPi;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw DomainError(std::string(what) + " must be positive");
}

ModeAmplitude assemble(int n, int ell, double width, double k_si, double inv_radius, double gouy,
                       double r, double phi) {
  if (r < 0.0) throw DomainError("radius must be non-negative");
  ModeAmplitude a;
  a.n = n;
  a.ell = ell;
  a.width = width;
  a.radial = lg_radial_factor(n, ell, width, r);
  a.azimuthal_phase = ell * phi;
  a.curvature_phase = 0.5 * k_si * r * r * inv_radius;
  a.gouy_phase = gouy;
  a.value = std::polar(1.0, a.azimuthal_phase + a.curvature_phase - a.gouy_phase) * a.radial;
  return a;
}

// atan(a tan(theta)) continued across the branch points so it grows by pi per half period.
double unwrapped_atan_tan(double a, double theta) {
  const double m = std::round(theta / kPi);
  return m * kPi + std::atan(a * std::tan(theta - m * kPi));
}

}  // namespace

void lg_radial_profile(int n, int ell, double width, std::span<const double> r, std::span<double> out) {
  if (n < 0) throw DomainError("radial quantum number n must be >= 0");
  require_positive(width, "beam width");
  if (out.size() < r.size()) throw DomainError("output span too short");
  kernels::lg_radial_amplitude(n, std::abs(ell), width, lg_log_norm(n, ell), r, out);
}

double lg_radial_factor(int n, int ell, double width, double r) {
  double out = 0.0;
  lg_radial_profile(n, ell, width, std::span<const double>(&r, 1), std::span<double>(&out, 1));
  return out;
}

EnvelopePoint vacuum_envelope(int n, int ell, double w0, double k_ev, double z) {
  require_positive(w0, "beam waist w0");
  require_positive(k_ev, "wavenumber k");
  const double k = kNatural.wavenumber_to_si(k_ev);
  const double zr = 0.5 * k * w0 * w0;
  EnvelopePoint p;
  p.width = w0 * std::sqrt(1.0 + (z / zr) * (z / zr));
  p.inv_radius = z / (z * z + zr * zr);
  p.gouy = (2.0 * n + std::abs(ell) + 1.0) * std::atan(z / zr);
  return p;
}

ModeAmplitude lg_vacuum_amplitude(int n, int ell, double w0, double k_ev, double r, double phi, double z) {
  const EnvelopePoint e = vacuum_envelope(n, ell, w0, k_ev, z);
  return assemble(n, ell, e.width, kNatural.wavenumber_to_si(k_ev), e.inv_radius, e.gouy, r, phi);
}

ModeAmplitude landau_mode(int n, int ell, double b_tesla, const ParticleSpecies& species, double r, double phi) {
  const double wm = magnetic_width(b_tesla, species);
  return assemble(n, ell, wm, 0.0, 0.0, 0.0, r, phi);
}

double rayleigh_in_field(double b_tesla, double k_ev, const ParticleSpecies& species) {
  require_positive(k_ev, "wavenumber k");
  const double wm = magnetic_width(b_tesla, species);
  return 0.5 * kNatural.wavenumber_to_si(k_ev) * wm * wm;
}

EnvelopePoint field_envelope(int n, int ell, double s_z, double w0, double b_tesla, double k_ev, double z,
                             const ParticleSpecies& species) {
  require_positive(w0, "beam waist w0");
  const double wm = magnetic_width(b_tesla, species);
  const double k = kNatural.wavenumber_to_si(k_ev);
  const double zm = rayleigh_in_field(b_tesla, k_ev, species);
  const double a = (wm * wm) / (w0 * w0);
  const double rho = a * a;
  const double theta = z / zm;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double q = c * c + rho * s * s;

  EnvelopePoint p;
  p.width = w0 * std::sqrt(q);
  // sin(2 theta) is computed as 2 s c so that exact zeros stay exact.
  p.inv_radius = (rho - 1.0) * 2.0 * s * c / (k * wm * wm * q);
  if (rho == 1.0) p.inv_radius = 0.0;
  const int qb_sign = sign_of(species.charge * b_tesla);
  const double ell_eff = -qb_sign * static_cast<double>(ell);
  const double spin = 2.0 * s_z * sign_of(b_tesla);
  p.gouy = (2.0 * n + std::abs(ell) + 1.0) * unwrapped_atan_tan(a, theta) + (ell_eff + spin) * theta;
  return p;
}

ModeAmplitude lg_field_amplitude(int n, int ell, double s_z, double w0, double b_tesla, double k_ev,
                                 double r, double phi, double z, const ParticleSpecies& species) {
  const EnvelopePoint e = field_envelope(n, ell, s_z, w0, b_tesla, k_ev, z, species);
  return assemble(n, ell, e.width, kNatural.wavenumber_to_si(k_ev), e.inv_radius, e.gouy, r, phi);
}

double paraxial_gouy(int n, int ell, double s_z, double z, double z_m) {
  require_positive(z_m, "z_m");
  return (2.0 * n + 1.0 + std::abs(ell) + ell + 2.0 * s_z) * z / z_m;
}

EnvelopeTrace sample_vacuum_envelope(int n, int ell, double w0, double k_ev, std::span<const double> z) {
  EnvelopeTrace t;
  for (double zi : z) {
    const EnvelopePoint p = vacuum_envelope(n, ell, w0, k_ev, zi);
    t.z.push_back(zi);
    t.width.push_back(p.width);
    t.inv_radius.push_back(p.inv_radius);
    t.gouy.push_back(p.gouy);
  }
  return t;
}

EnvelopeTrace sample_field_envelope(int n, int ell, double s_z, double w0, double b_tesla, double k_ev,
                                    std::span<const double> z, const ParticleSpecies& species) {
  EnvelopeTrace t;
  for (double zi : z) {
    const EnvelopePoint p = field_envelope(n, ell, s_z, w0, b_tesla, k_ev, zi, species);
    t.z.push_back(zi);
    t.width.push_back(p.width);
    t.inv_radius.push_back(p.inv_radius);
    t.gouy.push_back(p.gouy);
  }
  return t;
}

double lg_profile_norm(int n, int ell, double width) {
  const auto window = lg_radial_window(n, std::abs(ell), width);
  return radial_integral(
      [&](double r) {
        const double a = lg_radial_factor(n, ell, width, r);
        return a * a;
      },
      window, lg_quadrature_tolerance(n, std::abs(ell)));
}

}  // namespace twist
