// twistsim: run twisted-beam analyses from a scenario file.
//
//   twistsim envelope --config beam.cfg --out out/
//   twistsim all --B 2 --ell 3
//
// Without --config the built-in scenario (electron, 1 T solenoid, l = 2,
// w0 = w_m, followed by vacuum) is used.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "twist/beamstate.hpp"
#include "twist/errors.hpp"
#include "twist/kernels.hpp"
#include "twist/scenario.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<double> b;       // T, first solenoid
  std::optional<double> w0;      // m
  std::optional<int> ell;
  std::optional<int> n;
  std::optional<double> kappa;   // T/m, analyzer gradient
  std::optional<double> p_z;     // eV
  std::optional<double> z_max;   // m
  std::string kernels;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Scenario file")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--seed", o.seed, "Random seed for ensemble sampling");
  cmd->add_option("--tolerance", o.tolerance, "Integrator tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--B", o.b, "Axial field of the first solenoid [T]");
  cmd->add_option("--w0", o.w0, "Beam waist [m]")->check(CLI::PositiveNumber);
  cmd->add_option("--ell", o.ell, "OAM quantum number l");
  cmd->add_option("--n", o.n, "Radial quantum number")->check(CLI::NonNegativeNumber);
  cmd->add_option("--kappa", o.kappa, "Analyzer gradient [T/m]");
  cmd->add_option("--pz", o.p_z, "Longitudinal momentum [eV]")->check(CLI::PositiveNumber);
  cmd->add_option("--z-max", o.z_max, "Propagation length [m]")->check(CLI::PositiveNumber);
  cmd->add_option("--kernels", o.kernels, "Kernel backend")->check(CLI::IsMember({"auto", "scalar", "avx2"}));
}

twist::Scenario build(const Overrides& o, std::vector<twist::Analysis> analyses) {
  twist::Scenario sc = o.config.empty() ? twist::default_scenario() : twist::parse_scenario(o.config);
  if (!o.out.empty()) sc.output_dir = o.out;
  if (o.seed) sc.seed = *o.seed;
  if (o.tolerance) sc.tolerance = *o.tolerance;
  if (o.b) {
    auto it = std::find_if(sc.regions.begin(), sc.regions.end(),
                           [](const twist::FieldRegion& r) { return r.kind == twist::RegionKind::solenoid; });
    if (it == sc.regions.end()) throw twist::DomainError("--B given but the scenario has no solenoid region");
    it->b_axis = *o.b;
  }
  if (o.ell) sc.state.ell = *o.ell;
  if (o.n) sc.state.n = *o.n;
  if (o.p_z) sc.state.p_z = *o.p_z;
  if (o.kappa) sc.settings.analyzer.kappa = *o.kappa;
  if (o.z_max) sc.settings.z_max = *o.z_max;
  if (o.w0) {
    sc.state.w0 = *o.w0;
    sc.w0_is_magnetic = false;
  } else if (sc.w0_is_magnetic) {
    sc.state.w0 = twist::magnetic_width(sc.regions.front().axial_field(), sc.state.species);
  }
  if (!analyses.empty()) sc.analyses = std::move(analyses);
  sc.validate();
  return sc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted charged-particle beams in piecewise solenoid fields"};
  app.require_subcommand(1);
  Overrides o;

  std::optional<twist::Analysis> selected;
  bool run_all = false;
  for (twist::Analysis a : twist::all_analyses()) {
    auto* cmd = app.add_subcommand(twist::to_string(a), std::string("Run the ") + twist::to_string(a) + " analysis");
    add_common(cmd, o);
    cmd->callback([&selected, a] { selected = a; });
  }
  auto* all = app.add_subcommand("all", "Run every analysis listed in the scenario (all of them by default)");
  add_common(all, o);
  all->callback([&run_all] { run_all = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the diagnostic
    return code == 0 ? 0 : 2;
  }

  try {
    if (o.kernels == "scalar") twist::kernels::set_backend(twist::kernels::Backend::scalar);
    else if (o.kernels == "avx2" && !twist::kernels::set_backend(twist::kernels::Backend::avx2))
      throw twist::DomainError("AVX2 kernels are not available on this machine");

    std::vector<twist::Analysis> analyses;
    if (selected) analyses = {*selected};
    else if (run_all && o.config.empty()) analyses = twist::all_analyses();
    const twist::Scenario sc = build(o, analyses);
    const twist::RunResult result = twist::run_scenario(sc);
    for (const auto& out : result.outcomes) {
      std::printf("%-13s %s  %s\n", twist::to_string(out.analysis), out.passed ? "PASS" : "FAIL", out.summary.c_str());
    }
    std::printf("report: %s\n", result.report.string().c_str());
    return result.exit_code();
  } catch (const twist::ParseError& e) {
    std::fprintf(stderr, "twistsim: %s: %s\n", o.config.c_str(), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "twistsim: %s\n", e.what());
    return 2;
  }
}
