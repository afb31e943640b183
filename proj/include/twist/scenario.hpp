#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "twist/beamstate.hpp"
#include "twist/experiment.hpp"
#include "twist/fields.hpp"

namespace twist {

enum class Analysis { modes, envelope, transition, trajectory, oracle, experiment, phase_spread };

const char* to_string(Analysis a);
/// Accepts "phase-spread" and "phase_spread".
Analysis analysis_from_string(std::string_view name);
std::vector<Analysis> all_analyses();

/// Knobs of the individual analyses, all in SI.
struct AnalysisSettings {
  double z_max = 0.0;          // m; 0 = three in-field periods (or three Rayleigh lengths)
  int samples = 64;
  double sigma_pz = 0.0;       // eV
  int ensemble = 8;            // trajectory ensemble size
  double jitter = 1e-9;        // m, Gaussian spread of ensemble start points
  double oracle_tolerance = 0.01;
  int oracle_points = 1024;
  double retention = 1.0;      // OAM retention factor for the positronium estimate
  AnalyzerGeometry analyzer;
};

struct Scenario {
  std::vector<FieldRegion> regions;
  BeamQuantumState state;
  bool w0_is_magnetic = false;   // w0 follows w_m of the first region
  std::vector<Analysis> analyses;
  AnalysisSettings settings;
  std::filesystem::path output_dir = "twist_out";
  std::uint64_t seed = 1;
  double tolerance = 1e-9;       // integrator tolerance and pass threshold for energy drift

  /// Checks contiguity and state validity; throws ParseError / DomainError.
  void validate() const;
};

/// Sectioned key = value text; every dimensional value needs a unit suffix.
Scenario parse_scenario_text(std::string_view text);
Scenario parse_scenario(const std::filesystem::path& path);

/// One electron in a 1 T solenoid with l = 2, w0 = w_m, then vacuum.
Scenario default_scenario();

struct AnalysisOutcome {
  Analysis analysis;
  bool passed = true;
  std::string summary;
  std::vector<std::filesystem::path> files;
};

struct RunResult {
  std::vector<AnalysisOutcome> outcomes;
  std::filesystem::path report;
  int exit_code() const;
};

/// Runs the requested analyses in order, writing CSV files and report.txt to output_dir.
RunResult run_scenario(const Scenario& scenario);

}  // namespace twist
