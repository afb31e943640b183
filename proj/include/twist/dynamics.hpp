#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "twist/beamstate.hpp"
#include "twist/fields.hpp"
#include "twist/oam_ledger.hpp"

namespace twist {

struct TrajectoryPoint {
  double t = 0.0;   // s
  Vec3 position;    // m
  Vec3 momentum;    // kinetic pi, eV
  double energy = 0.0;  // eV
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  double tolerance = 0.0;
  double max_energy_drift = 0.0;  // relative; only meaningful without a body force

  const TrajectoryPoint& front() const { return points.front(); }
  const TrajectoryPoint& back() const { return points.back(); }
};

/// Extra force on the particle, eV/m, as a function of position and kinetic momentum.
using BodyForce = std::function<Vec3(const Vec3& position, const Vec3& momentum)>;

struct IntegrationOptions {
  double tolerance = 1e-10;     // relative, on scaled state
  double max_step = 0.0;        // m; 0 = unlimited
  double initial_step = 0.0;    // m; 0 = automatic
  double length_scale = 0.0;    // m; 0 = automatic
  std::size_t max_steps = 5'000'000;
  BodyForce force;              // optional
};

/// Relativistic Lorentz-force motion with z as the independent variable
/// (adaptive Dormand-Prince 5(4)). Requires pi_z of one sign throughout.
Trajectory integrate_trajectory(const ParticleSpecies& species, Vec3 position, Vec3 momentum, const FieldMap& fields,
                                double z_final, const IntegrationOptions& options = {});

struct CanonicalDrift {
  double max_abs = 0.0;    // hbar
  double scale = 0.0;      // hbar, largest magnitude of the two terms
  double relative = 0.0;   // max_abs / scale
};

/// L_z = (R x pi)_z + q R A_phi about `gauge_axis` with A_phi = R b/2 - R^3 b''/16,
/// b the axial profile of the map's solenoids. Conserved only on a symmetry axis.
CanonicalDrift canonical_conservation(const Trajectory& trajectory, const FieldMap& fields,
                                      const ParticleSpecies& species, Vec2 gauge_axis = {});

struct CircleFit {
  Vec2 center;
  double radius = 0.0;
  double rms_residual = 0.0;
};

/// Algebraic (Kasa) least-squares circle.
CircleFit fit_circle(std::span<const Vec2> points);
CircleFit fit_transverse_circle(const Trajectory& trajectory, double z_from = -std::numeric_limits<double>::infinity());

/// q c^2 B / eps in rad/s (signed).
double cyclotron_frequency(const ParticleSpecies& species, double b_tesla, double energy_ev);
/// Slope of the unwrapped polar angle about `center` against t.
double measured_angular_frequency(const Trajectory& trajectory, Vec2 center);

struct PhaseSpreadReport {
  double mean_omega = 0.0;    // rad/s
  double var_omega = 0.0;     // rad^2/s^2
  double energy = 0.0;        // eV
  bool divergent = false;     // |l| = 1: <1/r^4> diverges at the axis
  std::vector<double> z;      // m
  std::vector<double> var_phi;  // rad^2
  double threshold = 0.0;       // rad^2
  double z_threshold = std::numeric_limits<double>::infinity();  // first z with var_phi >= threshold
  OamLedger ledger;             // untouched by the spreading
};

/// Semiclassical phase variance of omega(r) = (l/r^2 - qB/2)/eps over the
/// mode density of width state.w0. sigma_pz > 0 adds a Gaussian p_z spread (eV).
PhaseSpreadReport phase_spread(const BeamQuantumState& state, double b_tesla, std::span<const double> z_grid,
                               double sigma_pz = 0.0, double threshold = -1.0);

}  // namespace twist
