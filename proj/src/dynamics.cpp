#include "twist/dynamics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "twist/errors.hpp"
#include "twist/laguerre.hpp"
#include "twist/modes.hpp"
#include "twist/quadrature.hpp"

namespace twist {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 6>;  // x, y, pi_x, pi_y, pi_z, t (scaled)
using units::kNatural;
using units::kPi;
using units::kSpeedOfLight;

struct Scales {
  double length;
  double p_perp;
  double p_z;
  double time;
};

struct System {
  const FieldMap& fields;
  const ParticleSpecies& species;
  const BodyForce& force;
  Scales s;

  void operator()(const State& u, State& du, double z) const {
    const Vec3 pos{u[0] * s.length, u[1] * s.length, z};
    const Vec3 pi{u[2] * s.p_perp, u[3] * s.p_perp, u[4] * s.p_z};
    if (pi.z == 0.0) throw IntegrationError("longitudinal momentum vanished (particle reflected)");
    const double eps = std::sqrt(species.mass * species.mass + dot(pi, pi));
    const Vec3 b = fields.field(pos);
    // d pi/dz = q c (pi x B)/pi_z, eV/m
    Vec3 dpi = cross(pi, b) * (species.charge * kSpeedOfLight / pi.z);
    if (force) dpi += force(pos, pi) * (eps / pi.z);
    du[0] = pi.x / pi.z / s.length;
    du[1] = pi.y / pi.z / s.length;
    du[2] = dpi.x / s.p_perp;
    du[3] = dpi.y / s.p_perp;
    du[4] = dpi.z / s.p_z;
    du[5] = eps / (pi.z * kSpeedOfLight) / s.time;
  }
};

double max_field_estimate(const FieldMap& fields) {
  double b = 0.0;
  for (const auto& r : fields.regions()) {
    b = std::max({b, std::abs(r.axial_field()), std::abs(r.b_uniform)});
  }
  return b;
}

struct StepCap {
  double length = std::numeric_limits<double>::infinity();
  const FieldFeature* sharp = nullptr;  // set when the cap lands exactly on a sharp edge
};

/// Largest step from z (moving along dir) that neither jumps into a fringe
/// window nor strides across one: a field change invisible at both ends of a
/// step would otherwise be skipped whenever the motion is locally trivial.
StepCap feature_step_cap(std::span<const FieldFeature> features, double z, double dir) {
  constexpr double kWindow = 12.0;  // tanh tails are below 1e-10 beyond this many widths
  constexpr double kInside = 0.25;
  StepCap cap;
  for (const FieldFeature& f : features) {
    const double ahead = dir * (f.z - z);
    const double half = kWindow * f.width;
    double c = std::numeric_limits<double>::infinity();
    if (f.width > 0.0 && std::abs(ahead) <= half) {
      c = kInside * f.width;
    } else if (ahead > half) {
      c = ahead - half + kInside * f.width;
    }
    if (c < cap.length) cap = {c, f.width == 0.0 ? &f : nullptr};
  }
  return cap;
}

/// Limit of a fringe of vanishing width: canonical momentum is continuous, so the
/// kinetic one jumps by -q c dA; |pi| is kept since the magnetic force does no work.
void apply_edge_impulse(State& u, double z, double dir, const FieldMap& fields, const ParticleSpecies& sp,
                        const Scales& s) {
  const Vec2 r{u[0] * s.length, u[1] * s.length};
  const Vec2 da = fields.sharp_edge_potential_jump(r, z) * dir;
  if (da.x == 0.0 && da.y == 0.0) return;
  const Vec3 pi{u[2] * s.p_perp, u[3] * s.p_perp, u[4] * s.p_z};
  const Vec2 perp = Vec2{pi.x, pi.y} - da * (sp.charge * kSpeedOfLight);
  const double pz2 = dot(pi, pi) - norm2(perp);
  if (!(pz2 > 0.0)) throw IntegrationError("particle reflected at a sharp field edge");
  u[2] = perp.x / s.p_perp;
  u[3] = perp.y / s.p_perp;
  u[4] = std::copysign(std::sqrt(pz2), pi.z) / s.p_z;
}

TrajectoryPoint unpack(const State& u, double z, const Scales& s, double mass) {
  TrajectoryPoint p;
  p.position = {u[0] * s.length, u[1] * s.length, z};
  p.momentum = {u[2] * s.p_perp, u[3] * s.p_perp, u[4] * s.p_z};
  p.t = u[5] * s.time;
  p.energy = std::sqrt(mass * mass + dot(p.momentum, p.momentum));
  return p;
}

}  // namespace

Trajectory integrate_trajectory(const ParticleSpecies& species, Vec3 position, Vec3 momentum, const FieldMap& fields,
                                double z_final, const IntegrationOptions& opt) {
  species.validate();
  if (!(norm(momentum) > 0.0)) throw DomainError("initial momentum must be non-zero");
  if (momentum.z == 0.0) throw DomainError("z-stepping needs pi_z != 0");
  const double span = z_final - position.z;
  if (span != 0.0 && (span > 0.0) != (momentum.z > 0.0))
    throw DomainError("z_final lies behind the particle");
  if (!(opt.tolerance > 0.0)) throw DomainError("tolerance must be positive");

  const double p_perp0 = std::hypot(momentum.x, momentum.y);
  const double b_max = max_field_estimate(fields);
  // The smallest physical length sets the absolute resolution of the scaled state.
  double length = std::abs(span) > 0.0 ? std::abs(span) : 1.0;
  const double r0 = std::hypot(position.x, position.y);
  if (r0 > 0.0) length = std::min(length, r0);
  if (b_max > 0.0 && species.charge != 0.0 && p_perp0 > 0.0)
    length = std::min(length, kNatural.length_to_si(p_perp0 / std::abs(charge_field(species, b_max))));
  Scales s;
  s.length = opt.length_scale > 0.0 ? opt.length_scale : std::max(length, 1e-15);
  s.p_perp = std::max({p_perp0, std::abs(species.charge) * kSpeedOfLight * b_max * s.length, 1e-3});
  s.p_z = std::abs(momentum.z);
  s.time = std::max(std::abs(span), s.length) / kSpeedOfLight;

  Trajectory traj;
  traj.tolerance = opt.tolerance;
  State u{position.x / s.length, position.y / s.length, momentum.x / s.p_perp, momentum.y / s.p_perp,
          momentum.z / s.p_z, 0.0};
  double z = position.z;
  traj.points.push_back(unpack(u, z, s, species.mass));
  if (span == 0.0) return traj;

  const BodyForce none;
  System sys{fields, species, opt.force ? opt.force : none, s};
  auto stepper = odeint::make_controlled(opt.tolerance, opt.tolerance, odeint::runge_kutta_dopri5<State>());

  const double dir = span > 0.0 ? 1.0 : -1.0;
  double h = opt.initial_step > 0.0 ? opt.initial_step : std::min(std::abs(span), s.length) * 1e-2;
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  h *= dir;
  const double e0 = traj.points.front().energy;
  const double h_floor = 1e-15 * std::max({std::abs(position.z), std::abs(z_final), s.length});
  const std::vector<FieldFeature> features = fields.features();

  while (dir * (z_final - z) > 0.0) {
    if (traj.accepted_steps + traj.rejected_steps >= opt.max_steps) {
      std::ostringstream os;
      os << "step budget exhausted at z = " << z << " m after " << traj.accepted_steps << " steps";
      throw IntegrationError(os.str());
    }
    const StepCap cap = feature_step_cap(features, z, dir);
    const FieldFeature* edge = nullptr;
    if (cap.length > h_floor && std::abs(h) >= cap.length) {
      h = dir * cap.length;
      edge = cap.sharp;
    }
    double remaining = z_final - z;
    bool last = false;
    if (dir * h >= dir * remaining) {
      h = remaining;
      last = true;
    }
    const double z_before = z;
    const auto res = stepper.try_step(sys, u, z, h);
    if (res == odeint::success) {
      ++traj.accepted_steps;
      if (last) z = z_final;
      if (edge && !last) {
        z = edge->z;
        apply_edge_impulse(u, z, dir, fields, species, s);
        // one ulp past the edge, so that the sharp profile reads its far-side value
        z = std::nextafter(z, dir * std::numeric_limits<double>::infinity());
        stepper.reset();  // the cached first-same-as-last derivative is stale now
      }
      traj.points.push_back(unpack(u, z, s, species.mass));
      if (!opt.force) {
        traj.max_energy_drift = std::max(traj.max_energy_drift, std::abs(traj.points.back().energy - e0) / e0);
      }
      if (opt.max_step > 0.0 && std::abs(h) > opt.max_step) h = dir * opt.max_step;
    } else {
      ++traj.rejected_steps;
      z = z_before;
      if (std::abs(h) < h_floor) {
        std::ostringstream os;
        os << "step size underflow at z = " << z << " m (h = " << h << " m, x = " << u[0] * s.length
           << " m, y = " << u[1] * s.length << " m, pi_z = " << u[4] * s.p_z << " eV)";
        throw IntegrationError(os.str());
      }
    }
  }
  return traj;
}

CanonicalDrift canonical_conservation(const Trajectory& trajectory, const FieldMap& fields,
                                      const ParticleSpecies& species, Vec2 gauge_axis) {
  CanonicalDrift out;
  if (trajectory.points.empty()) return out;
  const double inv_hc = 1.0 / units::kHbarCEvM;
  double first = 0.0;
  for (std::size_t k = 0; k < trajectory.points.size(); ++k) {
    const auto& p = trajectory.points[k];
    const Vec2 rv = p.position.transverse() - gauge_axis;
    const double r2 = norm2(rv);
    const AxisProfile a = fields.axis_profile(p.position.z);
    const double kinetic = cross(rv, p.momentum.transverse()) * inv_hc;
    // q R A_phi with A_phi = R b/2 - R^3 b''/16, in hbar
    const double potential =
        species.charge * units::kTeslaToEv2 * r2 * (0.5 * a.b - r2 * a.d2b / 16.0) * inv_hc * inv_hc;
    const double l = kinetic + potential;
    if (k == 0) first = l;
    out.max_abs = std::max(out.max_abs, std::abs(l - first));
    out.scale = std::max({out.scale, std::abs(kinetic), std::abs(potential)});
  }
  out.relative = out.scale > 0.0 ? out.max_abs / out.scale : out.max_abs;
  return out;
}

CircleFit fit_circle(std::span<const Vec2> pts) {
  if (pts.size() < 3) throw DomainError("circle fit needs at least three points");
  Eigen::MatrixXd a(pts.size(), 3);
  Eigen::VectorXd rhs(pts.size());
  // x^2 + y^2 + D x + E y + F = 0
  const Vec2 ref = pts[0];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec2 q = pts[i] - ref;
    a(i, 0) = q.x;
    a(i, 1) = q.y;
    a(i, 2) = 1.0;
    rhs(i) = -(q.x * q.x + q.y * q.y);
  }
  const Eigen::Vector3d sol = a.colPivHouseholderQr().solve(rhs);
  CircleFit fit;
  const Vec2 c{-0.5 * sol(0), -0.5 * sol(1)};
  fit.radius = std::sqrt(std::max(0.0, norm2(c) - sol(2)));
  fit.center = c + ref;
  double ss = 0.0;
  for (const Vec2& p : pts) {
    const double d = norm(p - fit.center) - fit.radius;
    ss += d * d;
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(pts.size()));
  return fit;
}

CircleFit fit_transverse_circle(const Trajectory& trajectory, double z_from) {
  std::vector<Vec2> pts;
  for (const auto& p : trajectory.points) {
    if (p.position.z >= z_from) pts.push_back(p.position.transverse());
  }
  return fit_circle(pts);
}

double cyclotron_frequency(const ParticleSpecies& species, double b_tesla, double energy_ev) {
  if (!(energy_ev > 0.0)) throw DomainError("energy must be positive");
  return species.charge * kSpeedOfLight * kSpeedOfLight * b_tesla / energy_ev;
}

double measured_angular_frequency(const Trajectory& trajectory, Vec2 center) {
  const auto& pts = trajectory.points;
  if (pts.size() < 2) throw DomainError("need at least two samples");
  std::vector<double> angle(pts.size());
  double offset = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec2 d = pts[i].position.transverse() - center;
    const double a = std::atan2(d.y, d.x);
    if (i > 0) {
      double jump = a - prev;
      if (jump > kPi) offset -= 2.0 * kPi;
      if (jump < -kPi) offset += 2.0 * kPi;
    }
    prev = a;
    angle[i] = a + offset;
  }
  double st = 0.0, sa = 0.0, stt = 0.0, sta = 0.0;
  const double n = static_cast<double>(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    st += pts[i].t;
    sa += angle[i];
    stt += pts[i].t * pts[i].t;
    sta += pts[i].t * angle[i];
  }
  return (n * sta - st * sa) / (n * stt - st * st);
}

PhaseSpreadReport phase_spread(const BeamQuantumState& state, double b_tesla, std::span<const double> z_grid,
                               double sigma_pz, double threshold) {
  state.validate();
  if (b_tesla == 0.0) throw DomainError("phase spread needs a non-zero field");
  if (sigma_pz < 0.0) throw DomainError("p_z spread must be non-negative");
  PhaseSpreadReport rep;
  rep.threshold = threshold > 0.0 ? threshold : (2.0 * kPi) * (2.0 * kPi) / 12.0;
  rep.energy = landau_energy(state, b_tesla);
  rep.ledger = ledger_for_state(state, b_tesla);

  const int abs_ell = std::abs(state.ell);
  const double w = kNatural.length_from_si(state.w0);
  const double half_qb = 0.5 * charge_field(state.species, b_tesla);
  double mean_inv_r2 = 0.0;
  double var_inv_r2 = 0.0;
  if (abs_ell >= 1) {
    // Moments of 1/r^2 over the radial density in natural units.
    const auto window = lg_radial_window(state.n, abs_ell, w);
    const double tol = lg_quadrature_tolerance(state.n, abs_ell);
    auto density = [&](double r) {
      const double a = lg_radial_factor(state.n, state.ell, w, r);
      return a * a;
    };
    mean_inv_r2 = radial_integral([&](double r) { return r > 0.0 ? density(r) / (r * r) : 0.0; }, window, tol);
    if (abs_ell == 1) {
      rep.divergent = true;
      var_inv_r2 = std::numeric_limits<double>::infinity();
    } else {
      const double m4 =
          radial_integral([&](double r) { return r > 0.0 ? density(r) / (r * r * r * r) : 0.0; }, window, tol);
      var_inv_r2 = std::max(0.0, m4 - mean_inv_r2 * mean_inv_r2);
    }
  }
  const double ell = state.ell;
  const double mean_k = ell * mean_inv_r2 - half_qb;  // eV^2
  const double var_k = abs_ell == 0 ? 0.0 : ell * ell * var_inv_r2;
  const double hbar = units::kHbarEvS;
  rep.mean_omega = mean_k / rep.energy / hbar;
  rep.var_omega = var_k / (rep.energy * rep.energy) / (hbar * hbar);

  // phi = K z / p_z, independent of eps; linearized in the p_z spread.
  const double p = state.p_z;
  const double rel2 = (sigma_pz / p) * (sigma_pz / p);
  for (double z_si : z_grid) {
    const double z = kNatural.length_from_si(z_si);
    const double base = var_k * z * z / (p * p);
    const double spread = (mean_k * mean_k + var_k) * z * z / (p * p) * rel2;
    const double v = z == 0.0 ? 0.0 : (sigma_pz > 0.0 ? base + spread : base);
    rep.z.push_back(z_si);
    rep.var_phi.push_back(v);
    if (v >= rep.threshold && z_si < rep.z_threshold) rep.z_threshold = z_si;
  }
  return rep;
}

}  // namespace twist
