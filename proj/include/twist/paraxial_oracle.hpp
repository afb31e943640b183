#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "twist/beamstate.hpp"

namespace twist {

/// Fixed-l radial wavefunction on a uniform cell-centred grid, r_j = (j + 1/2) dr.
/// Normalized as \int |psi|^2 r dr = 1 (the 2 pi of the azimuth is not included).
struct RadialWavefunction {
  std::vector<double> r;                     // m
  std::vector<std::complex<double>> psi;     // 1/m
  int n = 0;                                 // label only; not used by the propagator
  int ell = 0;
  double k_ev = 0.0;
  double b_tesla = 0.0;
  double z = 0.0;                            // m

  double spacing() const { return r.size() > 1 ? r[1] - r[0] : 2.0 * r.front(); }
  double norm() const;
};

struct SchemeParams {
  std::size_t radial_points = 1024;
  double r_max = 0.0;           // m; 0 = 6 x the widest analytic envelope on the z grid
  double steps_per_unit = 400;  // CN steps per natural length z_u = k l_u^2 / 2
  double max_norm_drift = 1e-10;  // per step
  double edge_fraction = 1e-6;    // tolerated norm in the outer 10% of the grid
  double s_z = 0.0;
  ParticleSpecies species = ParticleSpecies::electron();
};

/// LG profile of width w0 with flat phase, normalized on the sampled grid.
RadialWavefunction make_lg_wavefunction(int n, int ell, double w0, double k_ev, double b_tesla, double r_max,
                                        std::size_t points);

struct Propagation {
  std::vector<RadialWavefunction> snapshots;  // one per requested z
  double max_norm_drift = 0.0;                // largest per-step relative change
  std::size_t steps = 0;
  double length_unit = 0.0;   // m: w_m, or w0 when B = 0
  double z_unit = 0.0;        // m: k l_u^2 / 2
};

/// Crank-Nicolson propagation of i d psi/dz = [pi_perp^2 - 2 s_z |qB| sgn(B) ... ] psi / (2k)
/// with pi_perp^2 = -(1/r) d_r r d_r + l^2/r^2 - qB l + (qB)^2 r^2 / 4. z_grid ascending,
/// measured from initial.z.
Propagation propagate_radial(const RadialWavefunction& initial, std::span<const double> z_grid, double b_tesla,
                             const SchemeParams& params = {});

/// sqrt(2 <r^2> / (2n + |l| + 1)).
double extract_width(const RadialWavefunction& psi, int n, int ell);

/// max |num - ana| / ana.
double compare_envelope(std::span<const double> numeric, std::span<const double> analytic);

struct EnvelopeComparison {
  std::vector<double> z;
  std::vector<double> w_numeric;
  std::vector<double> w_analytic;
  std::vector<double> rel_err;
  double max_rel_err = 0.0;
  double max_norm_drift = 0.0;
  /// -d arg<psi0|psi(z)> / d(z/z_m), least squares; NaN when B = 0.
  double gouy_slope = 0.0;
};

/// Builds an LG input of waist w0 at z = 0, propagates over z_grid and compares
/// with the closed-form envelope (in-field for B != 0, free-space otherwise).
EnvelopeComparison envelope_oracle(int n, int ell, double w0, double k_ev, double b_tesla,
                                   std::span<const double> z_grid, const SchemeParams& params = {});

}  // namespace twist
