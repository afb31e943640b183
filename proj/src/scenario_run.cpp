#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <boost/random/normal_distribution.hpp>
#include <fmt/format.h>

#include "twist/csv.hpp"
#include "twist/dynamics.hpp"
#include "twist/errors.hpp"
#include "twist/modes.hpp"
#include "twist/oam_ledger.hpp"
#include "twist/paraxial_oracle.hpp"
#include "twist/scenario.hpp"
#include "twist/transitions.hpp"

namespace twist {

namespace {

using units::kPi;

/// Field seen by the state at the start of the beamline.
double initial_field(const Scenario& sc) { return sc.regions.front().axial_field(); }

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / (count - 1);
  return out;
}

/// Three in-field periods, or three Rayleigh lengths in free space.
double default_z_max(const Scenario& sc) {
  if (sc.settings.z_max > 0.0) return sc.settings.z_max;
  const auto& s = sc.state;
  const double b = initial_field(sc);
  if (b != 0.0) return 3.0 * kPi * rayleigh_in_field(b, s.p_z, s.species);
  return 3.0 * 0.5 * units::kNatural.wavenumber_to_si(s.p_z) * s.w0 * s.w0;
}

std::string num(double v) { return fmt::format("{:.9g}", v); }

void write_ledger(std::ostream& os, const OamLedger& ledger, std::string_view title) {
  os << title << (ledger.nonbasic ? "  [nonbasic state]" : "") << '\n';
  os << fmt::format("  {:<11} {:>16} {:>16}  {}\n", "component", "canonical/hbar", "kinetic/hbar", "source");
  for (const auto& c : ledger.contributions) {
    os << fmt::format("  {:<11} {:>16} {:>16}  {}\n", c.component, num(c.canonical), num(c.kinetic), c.source);
  }
  os << fmt::format("  {:<11} {:>16} {:>16}\n", "total", num(ledger.canonical_total()), num(ledger.kinetic_total()));
}

void write_transition(std::ostream& os, const TransitionReport& rep, const FieldRegion& from,
                      const FieldRegion& to) {
  os << "Transition '" << from.name << "' -> '" << to.name << "'\n";
  const auto vec = [](Vec2 v) { return "(" + num(v.x) + ", " + num(v.y) + ")"; };
  os << "  kick total      [eV]  " << vec(rep.kicks.total) << '\n';
  os << "  kick intrinsic  [eV]  " << vec(rep.kicks.intrinsic) << '\n';
  os << "  kick extrinsic  [eV]  " << vec(rep.kicks.extrinsic) << '\n';
  if (rep.vacuum) {
    os << "  vacuum exit: drift slope " << vec(rep.vacuum->drift_slope) << '\n';
  } else {
    os << "  orbit radius R  [m]   " << num(rep.orbit.radius) << '\n';
    os << "  orbit centre    [m]   " << vec(rep.orbit_center) << '\n';
    os << "  frak_l          [hbar] " << rep.frak_l << " (classical " << num(rep.classical_frak_l) << ")\n";
    os << "  delta L_ext     [hbar] " << num(rep.delta_canonical_extrinsic) << '\n';
    os << "  delta Lkin_ext  [hbar] " << num(rep.delta_kinetic_extrinsic) << " (classical "
       << num(rep.classical_delta_kinetic) << ")\n";
    os << "  L~ total        [hbar] " << rep.canonical_intrinsic_total << '\n';
    os << "  Lkin~ total     [hbar] " << num(rep.kinetic_intrinsic_total) << " as written, "
       << num(rep.kinetic_intrinsic_total_additive) << " additive"
       << (rep.factor_mismatch ? "  [factor mismatch]" : "") << '\n';
  }
  write_ledger(os, rep.ledger_after, "  ledger after crossing");
}

struct Context {
  const Scenario& sc;
  std::filesystem::path dir;
  std::ostringstream report;
};

AnalysisOutcome run_modes(Context& ctx) {
  const auto& s = ctx.sc.state;
  const double b = initial_field(ctx.sc);
  AnalysisOutcome out{Analysis::modes, true, {}, {}};
  CsvTable csv({"r [m]", "phi [rad]", "z [m]", "re [1/m]", "im [1/m]", "abs2 [1/m^2]"});
  const double z_max = default_z_max(ctx.sc);
  const double r_max = 4.0 * s.w0 * std::sqrt(std::max(1.0, 2.0 * s.n + std::abs(s.ell) + 1.0));
  for (double z : {0.0, 0.5 * z_max}) {
    for (double phi : {0.0, 0.5 * kPi}) {
      for (double r : linspace(0.0, r_max, ctx.sc.settings.samples)) {
        const ModeAmplitude a = b != 0.0
                                    ? lg_field_amplitude(s.n, s.ell, s.species.spin_z, s.w0, b, s.p_z, r, phi, z, s.species)
                                    : lg_vacuum_amplitude(s.n, s.ell, s.w0, s.p_z, r, phi, z);
        csv.add(r, phi, z, a.value.real(), a.value.imag(), a.abs2());
      }
    }
  }
  const auto path = ctx.dir / "modes.csv";
  csv.save(path);
  out.files.push_back(path);

  const double norm = lg_profile_norm(s.n, s.ell, s.w0);
  out.passed = std::abs(norm - 1.0) < 1e-8;
  std::string extra;
  if (b != 0.0) {
    const auto r2 = mean_square_radius(s.n, s.ell, b, s.species);
    extra = fmt::format(", Landau <r^2> = {} m^2, class {}", num(r2.si()), to_string(classify_state(s.species, s.ell)));
  }
  out.summary = fmt::format("profile norm {} (|1 - norm| < 1e-8 required){}", num(norm), extra);
  return out;
}

AnalysisOutcome run_envelope(Context& ctx) {
  const auto& s = ctx.sc.state;
  const double b = initial_field(ctx.sc);
  AnalysisOutcome out{Analysis::envelope, true, {}, {}};
  const auto z = linspace(0.0, default_z_max(ctx.sc), ctx.sc.settings.samples);
  const EnvelopeTrace tr = b != 0.0 ? sample_field_envelope(s.n, s.ell, s.species.spin_z, s.w0, b, s.p_z, z, s.species)
                                    : sample_vacuum_envelope(s.n, s.ell, s.w0, s.p_z, z);
  CsvTable csv({"z [m]", "w [m]", "inv_R [1/m]", "gouy [rad]"});
  double w_min = tr.width.front(), w_max = tr.width.front();
  for (std::size_t i = 0; i < tr.z.size(); ++i) {
    csv.add(tr.z[i], tr.width[i], tr.inv_radius[i], tr.gouy[i]);
    w_min = std::min(w_min, tr.width[i]);
    w_max = std::max(w_max, tr.width[i]);
  }
  const auto path = ctx.dir / "envelope.csv";
  csv.save(path);
  out.files.push_back(path);
  out.passed = w_min > 0.0 && std::isfinite(w_max);
  out.summary = fmt::format("w in [{}, {}] m over z in [0, {}] m", num(w_min), num(w_max), num(z.back()));
  return out;
}

AnalysisOutcome run_transition(Context& ctx) {
  const auto& regions = ctx.sc.regions;
  AnalysisOutcome out{Analysis::transition, true, {}, {}};
  CsvTable csv({"from", "to", "kick_x [eV]", "kick_y [eV]", "kick_int_x [eV]", "kick_int_y [eV]", "kick_ext_x [eV]",
                "kick_ext_y [eV]", "orbit_radius [m]", "center_x [m]", "center_y [m]", "frak_l [hbar]",
                "canonical_intrinsic [hbar]", "kinetic_intrinsic [hbar]", "kinetic_total_after [hbar]"});
  BeamQuantumState state = ctx.sc.state;
  ctx.report << "== transitions ==\n";
  write_ledger(ctx.report, ledger_for_state(state, regions.front().axial_field()),
               "Initial ledger in '" + regions.front().name + "'");
  int crossings = 0;
  for (std::size_t i = 1; i < regions.size(); ++i) {
    const auto& from = regions[i - 1];
    const auto& to = regions[i];
    // A vacuum region's residual field is the gap field between the solenoids on either side.
    const double b0 = to.kind == RegionKind::vacuum ? to.gap_field : 0.0;
    const TransitionReport rep = post_transition_state(state, from, to, b0);
    write_transition(ctx.report, rep, from, to);
    csv.add(from.name, to.name, rep.kicks.total.x, rep.kicks.total.y, rep.kicks.intrinsic.x, rep.kicks.intrinsic.y,
            rep.kicks.extrinsic.x, rep.kicks.extrinsic.y, rep.orbit.radius, rep.orbit_center.x, rep.orbit_center.y,
            rep.frak_l, static_cast<long long>(rep.canonical_intrinsic_total), rep.kinetic_intrinsic_total_additive,
            rep.ledger_after.kinetic_total());
    if (!std::isfinite(rep.ledger_after.kinetic_total()) || !std::isfinite(rep.kicks.total.x)) out.passed = false;
    state = rep.new_state;
    ++crossings;
  }
  ctx.report << '\n';
  const auto path = ctx.dir / "transitions.csv";
  csv.save(path);
  out.files.push_back(path);
  out.summary = fmt::format("{} boundary crossing(s) evaluated", crossings);
  return out;
}

AnalysisOutcome run_trajectory(Context& ctx) {
  const auto& sc = ctx.sc;
  const auto& s = sc.state;
  AnalysisOutcome out{Analysis::trajectory, true, {}, {}};
  const FieldMap map(sc.regions);
  const double z0 = sc.regions.front().z_begin;
  const double z1 = sc.regions.back().z_end;
  const Vec2 axis = sc.regions.front().axis_offset;
  const bool coaxial = std::all_of(sc.regions.begin(), sc.regions.end(), [&](const FieldRegion& r) {
    return r.axis_offset.x == axis.x && r.axis_offset.y == axis.y && r.kind != RegionKind::quadrupole;
  });

  std::mt19937_64 rng(sc.seed);
  boost::random::normal_distribution<double> jitter(0.0, sc.settings.jitter);
  IntegrationOptions opt;
  opt.tolerance = sc.tolerance;

  CsvTable csv({"particle", "z [m]", "x [m]", "y [m]", "px [eV]", "py [eV]", "pz [eV]", "energy [eV]", "t [s]"});
  CsvTable summary({"particle", "x0 [m]", "y0 [m]", "energy_drift [rel]", "canonical_drift [hbar]",
                    "canonical_scale [hbar]", "accepted_steps", "rejected_steps"});
  double worst_energy = 0.0;
  double worst_canonical = 0.0;
  const int count = std::max(1, sc.settings.ensemble);
  for (int p = 0; p < count; ++p) {
    Vec2 start = axis + s.axis_offset;
    if (p > 0) start = start + Vec2{jitter(rng), jitter(rng)};
    const Vec3 pos{start.x, start.y, z0};
    const Vec3 mom{s.extrinsic_momentum.x, s.extrinsic_momentum.y, s.p_z};
    const Trajectory tr = integrate_trajectory(s.species, pos, mom, map, z1, opt);
    const std::size_t stride = std::max<std::size_t>(1, tr.points.size() / static_cast<std::size_t>(sc.settings.samples));
    for (std::size_t i = 0; i < tr.points.size(); i += stride) {
      const auto& pt = tr.points[i];
      csv.add(p, pt.position.z, pt.position.x, pt.position.y, pt.momentum.x, pt.momentum.y, pt.momentum.z, pt.energy,
              pt.t);
    }
    double can = 0.0, scale = 0.0;
    if (coaxial) {
      const auto drift = canonical_conservation(tr, map, s.species, axis);
      can = drift.max_abs;
      scale = drift.scale;
      worst_canonical = std::max(worst_canonical, drift.relative);
    }
    worst_energy = std::max(worst_energy, tr.max_energy_drift);
    summary.add(p, start.x, start.y, tr.max_energy_drift, can, scale, tr.accepted_steps, tr.rejected_steps);
  }
  const auto path = ctx.dir / "trajectory.csv";
  const auto spath = ctx.dir / "trajectory_summary.csv";
  csv.save(path);
  summary.save(spath);
  out.files = {path, spath};
  const double bound = 10.0 * sc.tolerance;
  out.passed = worst_energy < bound && (!coaxial || worst_canonical < bound);
  out.summary = fmt::format("{} particle(s); max energy drift {}, max relative canonical drift {} (bound {}){}", count,
                            num(worst_energy), coaxial ? num(worst_canonical) : std::string("n/a"), num(bound),
                            map.validity_exceeded() ? "; paraxial field expansion exceeded" : "");
  return out;
}

AnalysisOutcome run_oracle(Context& ctx) {
  const auto& sc = ctx.sc;
  const auto& s = sc.state;
  AnalysisOutcome out{Analysis::oracle, true, {}, {}};
  const double b = initial_field(sc);
  const auto z = linspace(0.0, default_z_max(sc), sc.settings.samples);
  SchemeParams params;
  params.radial_points = static_cast<std::size_t>(sc.settings.oracle_points);
  params.s_z = s.species.spin_z;
  params.species = s.species;
  const EnvelopeComparison cmp = envelope_oracle(s.n, s.ell, s.w0, s.p_z, b, z, params);
  CsvTable csv({"z [m]", "w_numeric [m]", "w_analytic [m]", "rel_err"});
  for (std::size_t i = 0; i < cmp.z.size(); ++i) csv.add(cmp.z[i], cmp.w_numeric[i], cmp.w_analytic[i], cmp.rel_err[i]);
  const auto path = ctx.dir / "oracle.csv";
  csv.save(path);
  out.files.push_back(path);
  out.passed = cmp.max_rel_err < sc.settings.oracle_tolerance;
  out.summary = fmt::format("max width error {} (tolerance {}), norm drift {}, Gouy slope {}", num(cmp.max_rel_err),
                            num(sc.settings.oracle_tolerance), num(cmp.max_norm_drift),
                            std::isnan(cmp.gouy_slope) ? std::string("n/a") : num(cmp.gouy_slope));
  return out;
}

AnalysisOutcome run_experiment(Context& ctx) {
  const auto& sc = ctx.sc;
  AnalysisOutcome out{Analysis::experiment, true, {}, {}};
  const TwistedBeam beam;  // the positron proposal: |L| = 1e4, 160 eV
  IntegrationOptions opt;
  opt.tolerance = sc.tolerance;
  const DeflectionOutcome d = deflection_sim(beam, sc.settings.analyzer, opt);

  const double b = initial_field(sc) != 0.0 ? std::abs(initial_field(sc)) : 1.0;
  const double w = magnetic_width(b, beam.species);
  const double excess = effective_mass_excess(beam.species, 1, static_cast<int>(beam.l_z), w);
  const double m_ps = default_positronium_mass();
  const double retained = retained_oam(beam.l_z, sc.settings.retention);
  // The bound pair inherits the excess of whatever OAM survives thermalization.
  const double kept = effective_mass_excess(beam.species, 1, static_cast<int>(std::lround(retained)), w);
  const PositroniumVerdict v = positronium_threshold(m_ps + kept);

  CsvTable csv({"quantity", "value", "unit"});
  csv.add("x_plus", d.plus.relative.x, "m");
  csv.add("x_minus", d.minus.relative.x, "m");
  csv.add("y_plus", d.plus.relative.y, "m");
  csv.add("y_minus", d.minus.relative.y, "m");
  csv.add("separation", d.separation, "m");
  csv.add("outlet_margin", d.outlet_margin, "m");
  csv.add("mirror_asymmetry", d.mirror_asymmetry, "1");
  csv.add("y_deflection", d.y_deflection, "m");
  csv.add("y_mismatch", d.y_mismatch, "1");
  csv.add("resolvable", d.resolvable, "bool");
  csv.add("flagged", d.flagged, "bool");
  csv.add("sg_force_per_gamma", sg_force(beam.l_z, sc.settings.analyzer.kappa, beam.species, 1.0), "eV/m");
  csv.add("magnetic_width", w, "m");
  csv.add("effective_mass_excess", excess, "eV");
  csv.add("retained_oam", retained, "hbar");
  csv.add("positronium_margin", v.margin, "eV");
  csv.add("positronium_stable", v.stable, "bool");
  const auto path = ctx.dir / "experiment.csv";
  csv.save(path);
  out.files.push_back(path);
  out.passed = !d.flagged && d.mirror_asymmetry < 1e-3 && d.y_mismatch < 1e-3;
  out.summary = fmt::format("separation {} m ({}), mirror asymmetry {}, y mismatch {}; M - m = {} eV, positronium {}",
                            num(d.separation), d.resolvable ? "resolvable" : "not resolvable", num(d.mirror_asymmetry),
                            num(d.y_mismatch), num(excess), v.stable ? "stable" : "unstable");
  return out;
}

AnalysisOutcome run_phase_spread(Context& ctx) {
  const auto& sc = ctx.sc;
  AnalysisOutcome out{Analysis::phase_spread, true, {}, {}};
  const auto z = linspace(0.0, sc.settings.z_max > 0.0 ? sc.settings.z_max : 1.0, sc.settings.samples);
  const PhaseSpreadReport rep = phase_spread(sc.state, initial_field(sc), z, sc.settings.sigma_pz);
  CsvTable csv({"z [m]", "var_phi [rad^2]"});
  for (std::size_t i = 0; i < rep.z.size(); ++i) csv.add(rep.z[i], rep.var_phi[i]);
  const auto path = ctx.dir / "phase_spread.csv";
  csv.save(path);
  out.files.push_back(path);
  out.passed = std::all_of(rep.var_phi.begin(), rep.var_phi.end(), [](double v) { return v >= 0.0; });
  out.summary = rep.divergent ? std::string("|l| = 1: <1/r^4> diverges, spread is infinite for z > 0")
                              : fmt::format("<omega> = {} rad/s, Var(omega) = {} rad^2/s^2, threshold reached at z = {} m",
                                            num(rep.mean_omega), num(rep.var_omega), num(rep.z_threshold));
  ctx.report << "== phase spread ==\n";
  write_ledger(ctx.report, rep.ledger, "Ledger (unchanged by the spreading)");
  ctx.report << '\n';
  return out;
}

}  // namespace

int RunResult::exit_code() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const AnalysisOutcome& o) { return o.passed; }) ? 0 : 1;
}

RunResult run_scenario(const Scenario& scenario) {
  scenario.validate();
  std::filesystem::create_directories(scenario.output_dir);
  Context ctx{scenario, scenario.output_dir, {}};
  RunResult result;

  const auto& s = scenario.state;
  ctx.report << "twistsim report\n";
  ctx.report << fmt::format("species {} (q = {}, m = {} eV, s_z = {}); n = {}, l = {}, p_z = {} eV, w0 = {} m\n",
                            s.species.name, num(s.species.charge), num(s.species.mass), num(s.species.spin_z), s.n,
                            s.ell, num(s.p_z), num(s.w0));
  ctx.report << "regions:\n";
  for (const auto& r : scenario.regions) {
    ctx.report << fmt::format("  {:<12} {:<10} z [{}, {}] m, B = {} T, axis ({}, {}) m\n", r.name, to_string(r.kind),
                              num(r.z_begin), num(r.z_end), num(r.axial_field()), num(r.axis_offset.x),
                              num(r.axis_offset.y));
  }
  ctx.report << '\n';
  write_ledger(ctx.report, ledger_for_state(s, initial_field(scenario)), "OAM ledger of the initial state");
  ctx.report << '\n';

  for (Analysis a : scenario.analyses) {
    AnalysisOutcome o{a, true, {}, {}};
    try {
      switch (a) {
        case Analysis::modes: o = run_modes(ctx); break;
        case Analysis::envelope: o = run_envelope(ctx); break;
        case Analysis::transition: o = run_transition(ctx); break;
        case Analysis::trajectory: o = run_trajectory(ctx); break;
        case Analysis::oracle: o = run_oracle(ctx); break;
        case Analysis::experiment: o = run_experiment(ctx); break;
        case Analysis::phase_spread: o = run_phase_spread(ctx); break;
      }
    } catch (const std::exception& e) {
      o.passed = false;
      o.summary = fmt::format("error in analysis '{}': {}", to_string(a), e.what());
    }
    result.outcomes.push_back(o);
  }

  ctx.report << "== summary ==\n";
  for (const auto& o : result.outcomes) {
    ctx.report << fmt::format("{:<13} {}  {}\n", to_string(o.analysis), o.passed ? "PASS" : "FAIL", o.summary);
  }
  result.report = scenario.output_dir / "report.txt";
  std::ofstream f(result.report, std::ios::binary);
  if (!f) throw DomainError("cannot write " + result.report.string());
  f << ctx.report.str();
  return result;
}

}  // namespace twist
