#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "twist/beamstate.hpp"
#include "twist/errors.hpp"
#include "twist/scenario.hpp"

using namespace twist;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(
[species]
name = electron

[state]
ell = 2
p_z = 1 MeV
w0 = magnetic

[region]
name = bore
kind = solenoid
B = 1 T
z_begin = 0 m
z_end = 10 cm

[analysis]
run = envelope
)";

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("twist_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

template <typename Fn>
std::string parse_error(Fn&& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.what();
  }
  return "no error";
}

}  // namespace

TEST_CASE("minimal scenario") {
  const Scenario sc = parse_scenario_text(kMinimal);
  REQUIRE(sc.regions.size() == 1);
  CHECK(sc.regions[0].b_axis == 1.0);
  CHECK(sc.regions[0].z_end == doctest::Approx(0.1));
  CHECK(sc.state.ell == 2);
  CHECK(sc.state.p_z == 1e6);
  CHECK(sc.w0_is_magnetic);
  CHECK(sc.state.w0 == doctest::Approx(magnetic_width(1.0, sc.state.species)).epsilon(1e-15));
  REQUIRE(sc.analyses.size() == 1);
  CHECK(sc.analyses[0] == Analysis::envelope);
  CHECK_NOTHROW(sc.validate());
}

TEST_CASE("units are converted on the way in") {
  const std::string text = replace(replace(kMinimal, "B = 1 T", "B = 5000 G"), "z_end = 10 cm", "z_end = 250 mm");
  const Scenario sc = parse_scenario_text(text);
  CHECK(sc.regions[0].b_axis == doctest::Approx(0.5));
  CHECK(sc.regions[0].z_end == doctest::Approx(0.25));
}

TEST_CASE("parse diagnostics") {
  CHECK(parse_error([] { parse_scenario_text(replace(kMinimal, "B = 1 T", "B = 1")); }).find("missing unit") !=
        std::string::npos);
  CHECK(parse_error([] { parse_scenario_text(replace(kMinimal, "B = 1 T", "B = 1 m")); }).find("line 13") !=
        std::string::npos);
  CHECK(parse_error([] { parse_scenario_text(replace(kMinimal, "ell = 2", "colour = blue")); }).find("unknown key 'colour'") !=
        std::string::npos);
  CHECK(parse_error([] { parse_scenario_text(replace(kMinimal, "[analysis]", "[analyses]")); }).find("unknown section") !=
        std::string::npos);
  CHECK(parse_error([] { parse_scenario_text(replace(kMinimal, "ell = 2", "ell = 2.5")); }) != "no error");
  CHECK(parse_error([] { parse_scenario_text(replace(kMinimal, "run = envelope", "run = everything")); }) != "no error");
}

TEST_CASE("a gap between regions names both of them") {
  const std::string text = std::string(kMinimal) + R"(
[region]
name = drift
kind = vacuum
z_begin = 12 cm
z_end = 20 cm
)";
  const std::string err = parse_error([&] { parse_scenario_text(text); });
  CHECK(err.find("'bore'") != std::string::npos);
  CHECK(err.find("'drift'") != std::string::npos);
  CHECK(err.find("gap") != std::string::npos);
}

TEST_CASE("Landau input gives a constant envelope column") {
  Scenario sc = parse_scenario_text(kMinimal);
  sc.output_dir = scratch("envelope");
  const RunResult res = run_scenario(sc);
  CHECK(res.exit_code() == 0);
  std::istringstream csv(slurp(sc.output_dir / "envelope.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line.find("[m]") != std::string::npos);
  const std::size_t w_col = [&] {
    std::size_t col = 0, pos = 0;
    while (line.compare(pos, 1, "w") != 0) {
      pos = line.find(',', pos) + 1;
      ++col;
    }
    return col;
  }();
  int rows = 0;
  while (std::getline(csv, line)) {
    std::stringstream cells(line);
    std::string cell;
    for (std::size_t c = 0; c <= w_col; ++c) std::getline(cells, cell, ',');
    CHECK(std::stod(cell) == doctest::Approx(sc.state.w0).epsilon(1e-12));
    ++rows;
  }
  CHECK(rows == sc.settings.samples);
}

TEST_CASE("antiparallel transition report lists the orbit and the kicks") {
  Scenario sc = parse_scenario(TWIST_SCENARIO_DIR "/antiparallel.ini");
  sc.analyses = {Analysis::transition};
  sc.output_dir = scratch("antiparallel");
  const RunResult res = run_scenario(sc);
  CHECK(res.exit_code() == 0);
  const std::string report = slurp(res.report);
  for (const char* key : {"frak_l", "orbit radius R", "kick total", "kick intrinsic", "kick extrinsic", "ledger after"})
    CHECK(report.find(key) != std::string::npos);
  CHECK(report.find("frak_l          [hbar] -190") != std::string::npos);
}

TEST_CASE("same seed, same bytes") {
  Scenario sc = parse_scenario(TWIST_SCENARIO_DIR "/landau_exit.ini");
  sc.analyses = {Analysis::trajectory, Analysis::transition, Analysis::phase_spread};
  sc.output_dir = scratch("det_a");
  run_scenario(sc);
  const fs::path a = sc.output_dir;
  sc.output_dir = scratch("det_b");
  run_scenario(sc);
  for (const auto& entry : fs::directory_iterator(a)) {
    CHECK(slurp(entry.path()) == slurp(sc.output_dir / entry.path().filename()));
  }
  sc.seed += 1;
  sc.output_dir = scratch("det_c");
  run_scenario(sc);
  CHECK(slurp(a / "trajectory.csv") != slurp(sc.output_dir / "trajectory.csv"));
}

TEST_CASE("failed analyses make a non-zero exit code") {
  Scenario sc = parse_scenario_text(kMinimal);
  sc.analyses = {Analysis::envelope, Analysis::oracle};
  sc.settings.oracle_tolerance = 1e-15;
  sc.output_dir = scratch("exit");
  const RunResult res = run_scenario(sc);
  REQUIRE(res.outcomes.size() == 2);
  CHECK(res.outcomes[0].passed);
  CHECK(!res.outcomes[1].passed);
  CHECK(res.exit_code() != 0);
}

TEST_CASE("analysis names") {
  for (Analysis a : all_analyses()) CHECK(analysis_from_string(to_string(a)) == a);
  CHECK(analysis_from_string("phase_spread") == Analysis::phase_spread);
  CHECK(std::string(to_string(Analysis::phase_spread)) == "phase-spread");
}
