#include "twist/paraxial_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "twist/errors.hpp"
#include "twist/kernels.hpp"
#include "twist/modes.hpp"

namespace twist {

namespace {

using cplx = std::complex<double>;
using units::kNatural;
using units::kPi;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Reduced operator in rho = r/l_u, zeta = z/z_u:
//   h = 1/4 (-lap_rho + l^2/rho^2) + beta^2 rho^2 + beta (-sigma l + 2 s_z sgnB),
// beta = |qB| l_u^2 / 4. Flux stencil with zero flux through rho = 0.
struct Operator {
  std::vector<double> sub, diag, super;
};

Operator build_operator(std::size_t n, double h, int ell, double beta, double shift) {
  Operator op;
  op.sub.resize(n);
  op.diag.resize(n);
  op.super.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double r = (j + 0.5) * h;
    const double r_lo = j * h;
    const double r_hi = (j + 1.0) * h;
    const double inv = 1.0 / (r * h * h);
    op.sub[j] = -0.25 * r_lo * inv;
    op.super[j] = -0.25 * r_hi * inv;
    op.diag[j] = 0.25 * (r_lo + r_hi) * inv + 0.25 * ell * ell / (r * r) + beta * beta * r * r + shift;
  }
  op.sub[0] = 0.0;
  op.super[n - 1] = 0.0;
  return op;
}

// (I + c H) x = rhs, factorized once.
class TridiagonalSolver {
 public:
  TridiagonalSolver(const Operator& op, cplx c) : lower_(op.sub.size()), cp_(op.sub.size()), inv_(op.sub.size()) {
    const std::size_t n = op.diag.size();
    for (std::size_t j = 0; j < n; ++j) {
      lower_[j] = c * op.sub[j];
      const cplx d = 1.0 + c * op.diag[j];
      const cplx u = c * op.super[j];
      const cplx denom = j == 0 ? d : d - lower_[j] * cp_[j - 1];
      if (std::abs(denom) == 0.0) throw SolverError("singular Crank-Nicolson matrix");
      inv_[j] = 1.0 / denom;
      cp_[j] = u * inv_[j];
    }
  }

  void solve(std::span<cplx> x) const {
    const std::size_t n = x.size();
    x[0] *= inv_[0];
    for (std::size_t j = 1; j < n; ++j) x[j] = (x[j] - lower_[j] * x[j - 1]) * inv_[j];
    for (std::size_t j = n - 1; j-- > 0;) x[j] -= cp_[j] * x[j + 1];
  }

 private:
  std::vector<cplx> lower_, cp_, inv_;
};

double weighted_norm(std::span<const double> r, std::span<const cplx> psi, double h) {
  return kernels::weighted_abs2_sum(r, psi) * h;
}

}  // namespace

double RadialWavefunction::norm() const { return weighted_norm(r, psi, spacing()); }

RadialWavefunction make_lg_wavefunction(int n, int ell, double w0, double k_ev, double b_tesla, double r_max,
                                        std::size_t points) {
  if (points < 8) throw DomainError("radial grid needs at least 8 points");
  if (!(r_max > 0.0)) throw DomainError("r_max must be positive");
  RadialWavefunction wf;
  wf.n = n;
  wf.ell = ell;
  wf.k_ev = k_ev;
  wf.b_tesla = b_tesla;
  const double h = r_max / static_cast<double>(points);
  wf.r.resize(points);
  for (std::size_t j = 0; j < points; ++j) wf.r[j] = (j + 0.5) * h;
  std::vector<double> a(points);
  lg_radial_profile(n, ell, w0, wf.r, a);
  wf.psi.resize(points);
  for (std::size_t j = 0; j < points; ++j) wf.psi[j] = a[j];
  // Normalize on the grid itself: the scheme conserves the discrete norm, and the
  // midpoint sum differs from the continuum one at O(h^2) when psi(0) != 0.
  const double norm = wf.norm();
  if (!(norm > 0.0)) throw DomainError("LG profile vanishes on the grid");
  const double s = 1.0 / std::sqrt(norm);
  for (auto& v : wf.psi) v *= s;
  return wf;
}

Propagation propagate_radial(const RadialWavefunction& initial, std::span<const double> z_grid, double b_tesla,
                             const SchemeParams& params) {
  const std::size_t n = initial.r.size();
  if (n < 8 || initial.psi.size() != n) throw DomainError("malformed radial wavefunction");
  if (!(initial.k_ev > 0.0)) throw DomainError("wavenumber must be positive");
  for (std::size_t i = 1; i < z_grid.size(); ++i)
    if (z_grid[i] < z_grid[i - 1]) throw DomainError("z grid must be ascending");

  Propagation out;
  const double k = kNatural.wavenumber_to_si(initial.k_ev);
  double beta = 0.0;
  double shift = 0.0;
  if (b_tesla != 0.0) {
    params.species.require_charged();
    out.length_unit = magnetic_width(b_tesla, params.species);
    beta = 1.0;
    const int sigma = sign_of(params.species.charge * b_tesla);
    shift = beta * (-sigma * initial.ell + 2.0 * params.s_z * sign_of(b_tesla));
  } else {
    // Natural scale of a free beam: its own rms-calibrated width.
    out.length_unit = extract_width(initial, initial.n, initial.ell);
  }
  out.z_unit = 0.5 * k * out.length_unit * out.length_unit;

  const double h_si = initial.spacing();
  const double h = h_si / out.length_unit;
  const Operator op = build_operator(n, h, initial.ell, beta, shift);

  const double norm0 = initial.norm();
  if (std::abs(norm0 - 1.0) > 1e-6) throw DomainError("initial wavefunction is not normalized");

  std::vector<double> rho(n);
  for (std::size_t j = 0; j < n; ++j) rho[j] = initial.r[j] / out.length_unit;
  const std::size_t edge_start = n - n / 10;

  RadialWavefunction cur = initial;
  std::vector<cplx> rhs(n);
  double zeta = 0.0;
  double step = 1.0 / params.steps_per_unit;
  std::unique_ptr<TridiagonalSolver> solver;
  double solver_step = -1.0;

  for (double z_target : z_grid) {
    const double zeta_target = (z_target - initial.z) / out.z_unit;
    if (zeta_target < zeta - 1e-12) throw DomainError("z grid starts before the initial plane");
    const double remaining = zeta_target - zeta;
    const auto count = static_cast<std::size_t>(std::ceil(remaining / (1.0 / params.steps_per_unit) - 1e-9));
    if (count > 0) {
      step = remaining / static_cast<double>(count);
      if (solver_step != step) {
        solver = std::make_unique<TridiagonalSolver>(op, cplx(0.0, 0.5 * step));
        solver_step = step;
      }
      for (std::size_t s = 0; s < count; ++s) {
        const double before = weighted_norm(rho, cur.psi, h);
        kernels::tridiagonal_apply(op.sub, op.diag, op.super, cplx(0.0, -0.5 * step), cur.psi, rhs);
        solver->solve(rhs);
        cur.psi.swap(rhs);
        const double after = weighted_norm(rho, cur.psi, h);
        const double drift = std::abs(after - before) / before;
        out.max_norm_drift = std::max(out.max_norm_drift, drift);
        if (drift > params.max_norm_drift)
          throw SolverError("norm drift " + std::to_string(drift) + " per step exceeds the limit");
        ++out.steps;
      }
      zeta = zeta_target;
    }
    double edge = 0.0;
    for (std::size_t j = edge_start; j < n; ++j) edge += initial.r[j] * std::norm(cur.psi[j]) * h_si;
    if (edge > params.edge_fraction * norm0)
      throw SolverError("wavefunction reaches the grid edge; increase r_max");
    cur.z = z_target;
    out.snapshots.push_back(cur);
  }
  return out;
}

double extract_width(const RadialWavefunction& psi, int n, int ell) {
  const std::size_t m = psi.r.size();
  std::vector<double> r3(m);
  for (std::size_t j = 0; j < m; ++j) r3[j] = psi.r[j] * psi.r[j] * psi.r[j];
  const double second = kernels::weighted_abs2_sum(r3, psi.psi);
  const double zeroth = kernels::weighted_abs2_sum(psi.r, psi.psi);
  if (!(zeroth > 0.0)) throw DomainError("empty wavefunction");
  return std::sqrt(2.0 * (second / zeroth) / (2.0 * n + std::abs(ell) + 1.0));
}

double compare_envelope(std::span<const double> numeric, std::span<const double> analytic) {
  if (numeric.size() != analytic.size()) throw DomainError("envelope samples differ in length");
  double worst = 0.0;
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    worst = std::max(worst, std::abs(numeric[i] - analytic[i]) / analytic[i]);
  }
  return worst;
}

EnvelopeComparison envelope_oracle(int n, int ell, double w0, double k_ev, double b_tesla,
                                   std::span<const double> z_grid, const SchemeParams& params) {
  EnvelopeComparison cmp;
  for (double z : z_grid) {
    const EnvelopePoint p = b_tesla != 0.0
                                ? field_envelope(n, ell, params.s_z, w0, b_tesla, k_ev, z, params.species)
                                : vacuum_envelope(n, ell, w0, k_ev, z);
    cmp.z.push_back(z);
    cmp.w_analytic.push_back(p.width);
  }
  double r_max = params.r_max;
  if (r_max <= 0.0) {
    double widest = w0;
    for (double w : cmp.w_analytic) widest = std::max(widest, w);
    if (b_tesla != 0.0) {
      const double wm = magnetic_width(b_tesla, params.species);
      widest = std::max(widest, wm * wm / w0);
    }
    // Higher modes spread further: scale by the rms extent of the LG density.
    r_max = 6.0 * widest * std::sqrt(std::max(1.0, (2.0 * n + std::abs(ell) + 1.0) / 2.0));
  }
  const RadialWavefunction init = make_lg_wavefunction(n, ell, w0, k_ev, b_tesla, r_max, params.radial_points);
  const Propagation prop = propagate_radial(init, z_grid, b_tesla, params);
  cmp.max_norm_drift = prop.max_norm_drift;

  std::vector<double> t, phase;
  double unwrap = 0.0;
  double prev = 0.0;
  const double h = init.spacing();
  for (std::size_t i = 0; i < prop.snapshots.size(); ++i) {
    const auto& s = prop.snapshots[i];
    const double w = extract_width(s, n, ell);
    cmp.w_numeric.push_back(w);
    cmp.rel_err.push_back(std::abs(w - cmp.w_analytic[i]) / cmp.w_analytic[i]);
    cplx overlap = 0.0;
    for (std::size_t j = 0; j < s.psi.size(); ++j) overlap += std::conj(init.psi[j]) * s.psi[j] * s.r[j] * h;
    const double a = -std::arg(overlap);
    if (i > 0) {
      double d = a - prev;
      while (d > kPi) { d -= 2.0 * kPi; unwrap -= 2.0 * kPi; }
      while (d < -kPi) { d += 2.0 * kPi; unwrap += 2.0 * kPi; }
    }
    prev = a;
    phase.push_back(a + unwrap);
    t.push_back(z_grid[i]);
  }
  cmp.max_rel_err = compare_envelope(cmp.w_numeric, cmp.w_analytic);

  cmp.gouy_slope = std::numeric_limits<double>::quiet_NaN();
  if (b_tesla != 0.0 && t.size() >= 2) {
    const double zm = rayleigh_in_field(b_tesla, k_ev, params.species);
    double st = 0, sp = 0, stt = 0, stp = 0;
    const double m = static_cast<double>(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double x = t[i] / zm;
      st += x;
      sp += phase[i];
      stt += x * x;
      stp += x * phase[i];
    }
    cmp.gouy_slope = (m * stp - st * sp) / (m * stt - st * st);
  }
  return cmp;
}

}  // namespace twist
