#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "twist/errors.hpp"
#include "twist/scenario.hpp"

namespace twist {

namespace {

enum class Dim { none, integer, text, field, length, energy, gradient, angle, time };

struct UnitDef {
  std::string_view name;
  Dim dim;
  double factor;  // to SI (T, m, eV, T/m, rad, s)
};

constexpr UnitDef kUnits[] = {
    {"T", Dim::field, 1.0},        {"mT", Dim::field, 1e-3},     {"uT", Dim::field, 1e-6},
    {"G", Dim::field, 1e-4},       {"m", Dim::length, 1.0},      {"cm", Dim::length, 1e-2},
    {"mm", Dim::length, 1e-3},     {"um", Dim::length, 1e-6},    {"nm", Dim::length, 1e-9},
    {"eV", Dim::energy, 1.0},      {"keV", Dim::energy, 1e3},    {"MeV", Dim::energy, 1e6},
    {"GeV", Dim::energy, 1e9},     {"T/m", Dim::gradient, 1.0},  {"rad", Dim::angle, 1.0},
    {"s", Dim::time, 1.0},
};

const char* dim_name(Dim d) {
  switch (d) {
    case Dim::field: return "magnetic field (T, mT, uT, G)";
    case Dim::length: return "length (m, cm, mm, um, nm)";
    case Dim::energy: return "energy/momentum (eV, keV, MeV, GeV)";
    case Dim::gradient: return "field gradient (T/m)";
    case Dim::angle: return "angle (rad)";
    case Dim::time: return "time (s)";
    default: return "dimensionless";
  }
}

using KeyTable = std::map<std::string, Dim, std::less<>>;

const std::map<std::string, KeyTable, std::less<>>& key_tables() {
  static const std::map<std::string, KeyTable, std::less<>> t{
      {"", {{"seed", Dim::integer}, {"tolerance", Dim::none}}},
      {"species", {{"name", Dim::text}, {"charge", Dim::none}, {"mass", Dim::energy}, {"spin", Dim::none}}},
      {"state",
       {{"n", Dim::integer},
        {"ell", Dim::integer},
        {"p_z", Dim::energy},
        {"w0", Dim::length},
        {"axis_offset_x", Dim::length},
        {"axis_offset_y", Dim::length},
        {"extrinsic_px", Dim::energy},
        {"extrinsic_py", Dim::energy}}},
      {"region",
       {{"name", Dim::text},
        {"kind", Dim::text},
        {"B", Dim::field},
        {"z_begin", Dim::length},
        {"z_end", Dim::length},
        {"fringe", Dim::length},
        {"offset_x", Dim::length},
        {"offset_y", Dim::length},
        {"bore", Dim::length},
        {"gap_field", Dim::field},
        {"kappa", Dim::gradient},
        {"B_tilde", Dim::field}}},
      {"analysis",
       {{"run", Dim::text},
        {"z_max", Dim::length},
        {"samples", Dim::integer},
        {"sigma_pz", Dim::energy},
        {"ensemble", Dim::integer},
        {"jitter", Dim::length},
        {"oracle_tolerance", Dim::none},
        {"oracle_points", Dim::integer},
        {"retention", Dim::none},
        {"analyzer_B", Dim::field},
        {"analyzer_kappa", Dim::gradient},
        {"analyzer_begin", Dim::length},
        {"analyzer_end", Dim::length},
        {"target", Dim::length},
        {"outlet", Dim::length},
        {"aperture", Dim::length}}},
      {"output", {{"dir", Dim::text}}},
  };
  return t;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry, std::less<>>;

struct RawRegion {
  Section keys;
  int line = 0;
};

double parse_number(std::string_view text, std::string_view& rest, const std::string& key, int line) {
  double v = 0.0;
  const auto* begin = text.data();
  const auto res = std::from_chars(begin, begin + text.size(), v);
  if (res.ec != std::errc() || res.ptr == begin) throw ParseError("key '" + key + "': expected a number", line);
  rest = trim(std::string_view(res.ptr, static_cast<std::size_t>(begin + text.size() - res.ptr)));
  if (!std::isfinite(v)) throw ParseError("key '" + key + "': value must be finite", line);
  return v;
}

double quantity(const Entry& e, Dim dim, const std::string& key) {
  std::string_view unit;
  const double v = parse_number(e.value, unit, key, e.line);
  if (dim == Dim::none) {
    if (!unit.empty()) throw ParseError("key '" + key + "' is dimensionless; unexpected unit '" + std::string(unit) + "'", e.line);
    return v;
  }
  if (unit.empty()) throw ParseError("key '" + key + "': missing unit, expected " + dim_name(dim), e.line);
  for (const auto& u : kUnits) {
    if (u.name == unit) {
      if (u.dim != dim)
        throw ParseError("key '" + key + "': unit '" + std::string(unit) + "' is not a " + dim_name(dim), e.line);
      return v * u.factor;
    }
  }
  throw ParseError("key '" + key + "': unknown unit '" + std::string(unit) + "'", e.line);
}

long long integer(const Entry& e, const std::string& key) {
  long long v = 0;
  const std::string_view s = e.value;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError("key '" + key + "': expected an integer without unit", e.line);
  return v;
}

class Reader {
 public:
  explicit Reader(const Section& s) : s_(s) {}

  const Entry* find(std::string_view key) const {
    const auto it = s_.find(key);
    return it == s_.end() ? nullptr : &it->second;
  }
  void get(std::string_view key, Dim dim, double& out) const {
    if (const Entry* e = find(key)) out = quantity(*e, dim, std::string(key));
  }
  template <typename I>
  void get_int(std::string_view key, I& out) const {
    if (const Entry* e = find(key)) out = static_cast<I>(integer(*e, std::string(key)));
  }
  void get_text(std::string_view key, std::string& out) const {
    if (const Entry* e = find(key)) out = e->value;
  }

 private:
  const Section& s_;
};

RegionKind kind_from(const Entry& e) {
  if (e.value == "solenoid") return RegionKind::solenoid;
  if (e.value == "vacuum") return RegionKind::vacuum;
  if (e.value == "quadrupole") return RegionKind::quadrupole;
  throw ParseError("key 'kind': expected solenoid, vacuum or quadrupole, got '" + e.value + "'", e.line);
}

}  // namespace

const char* to_string(Analysis a) {
  switch (a) {
    case Analysis::modes: return "modes";
    case Analysis::envelope: return "envelope";
    case Analysis::transition: return "transition";
    case Analysis::trajectory: return "trajectory";
    case Analysis::oracle: return "oracle";
    case Analysis::experiment: return "experiment";
    case Analysis::phase_spread: return "phase-spread";
  }
  return "unknown";
}

Analysis analysis_from_string(std::string_view name) {
  for (Analysis a : all_analyses()) {
    if (name == to_string(a)) return a;
  }
  if (name == "phase_spread") return Analysis::phase_spread;
  throw DomainError("unknown analysis '" + std::string(name) + "'");
}

std::vector<Analysis> all_analyses() {
  return {Analysis::modes,  Analysis::envelope,   Analysis::transition,  Analysis::trajectory,
          Analysis::oracle, Analysis::experiment, Analysis::phase_spread};
}

void Scenario::validate() const {
  if (regions.empty()) throw DomainError("scenario needs at least one [region]");
  FieldMap check(regions);  // contiguity, per-region validity
  state.validate();
  if (analyses.empty()) throw DomainError("scenario requests no analyses");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
}

Scenario parse_scenario_text(std::string_view text) {
  const auto& tables = key_tables();
  Section top, species, state, analysis, output;
  std::vector<RawRegion> regions;
  std::set<std::string> seen_sections;
  std::string current;
  Section* target = &top;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("malformed section header", line_no);
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (!tables.contains(current) || current.empty())
        throw ParseError("unknown section [" + current + "]", line_no);
      if (current != "region" && !seen_sections.insert(current).second)
        throw ParseError("section [" + current + "] appears twice", line_no);
      if (current == "species") target = &species;
      else if (current == "state") target = &state;
      else if (current == "analysis") target = &analysis;
      else if (current == "output") target = &output;
      else {
        regions.push_back({{}, line_no});
        target = &regions.back().keys;
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError("empty key", line_no);
    const auto& table = tables.at(current);
    if (!table.contains(key)) {
      throw ParseError("unknown key '" + key + "'" + (current.empty() ? "" : " in [" + current + "]"), line_no);
    }
    if (value.empty()) throw ParseError("key '" + key + "' has no value", line_no);
    if (!target->emplace(key, Entry{value, line_no}).second) throw ParseError("duplicate key '" + key + "'", line_no);
  }

  Scenario sc;
  {
    Reader r(top);
    r.get_int("seed", sc.seed);
    r.get("tolerance", Dim::none, sc.tolerance);
  }
  {
    Reader r(species);
    std::string name = "electron";
    r.get_text("name", name);
    if (name == "electron") sc.state.species = ParticleSpecies::electron();
    else if (name == "positron") sc.state.species = ParticleSpecies::positron();
    else {
      sc.state.species.name = name;
      if (!r.find("charge") || !r.find("mass"))
        throw ParseError("custom species '" + name + "' needs charge and mass", species.at("name").line);
    }
    r.get("charge", Dim::none, sc.state.species.charge);
    r.get("mass", Dim::energy, sc.state.species.mass);
    r.get("spin", Dim::none, sc.state.species.spin_z);
  }
  {
    Reader r(state);
    r.get_int("n", sc.state.n);
    r.get_int("ell", sc.state.ell);
    r.get("p_z", Dim::energy, sc.state.p_z);
    if (const Entry* e = r.find("w0"); e && e->value == "magnetic") sc.w0_is_magnetic = true;
    else r.get("w0", Dim::length, sc.state.w0);
    r.get("axis_offset_x", Dim::length, sc.state.axis_offset.x);
    r.get("axis_offset_y", Dim::length, sc.state.axis_offset.y);
    r.get("extrinsic_px", Dim::energy, sc.state.extrinsic_momentum.x);
    r.get("extrinsic_py", Dim::energy, sc.state.extrinsic_momentum.y);
  }
  std::vector<int> region_lines;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    Reader r(regions[i].keys);
    FieldRegion reg;
    reg.name = "region" + std::to_string(i + 1);
    r.get_text("name", reg.name);
    if (const Entry* e = r.find("kind")) reg.kind = kind_from(*e);
    for (const char* req : {"z_begin", "z_end"}) {
      if (!r.find(req)) throw ParseError("region '" + reg.name + "' needs " + req, regions[i].line);
    }
    r.get("B", Dim::field, reg.b_axis);
    r.get("z_begin", Dim::length, reg.z_begin);
    r.get("z_end", Dim::length, reg.z_end);
    r.get("fringe", Dim::length, reg.fringe_length);
    r.get("offset_x", Dim::length, reg.axis_offset.x);
    r.get("offset_y", Dim::length, reg.axis_offset.y);
    r.get("bore", Dim::length, reg.bore_radius);
    r.get("gap_field", Dim::field, reg.gap_field);
    r.get("kappa", Dim::gradient, reg.kappa);
    r.get("B_tilde", Dim::field, reg.b_uniform);
    try {
      reg.validate();
    } catch (const DomainError& err) {
      throw ParseError(err.what(), regions[i].line);
    }
    sc.regions.push_back(reg);
    region_lines.push_back(regions[i].line);
  }
  if (sc.regions.empty()) throw ParseError("scenario needs at least one [region]", line_no);
  for (std::size_t i = 1; i < sc.regions.size(); ++i) {
    const auto& a = sc.regions[i - 1];
    const auto& b = sc.regions[i];
    const double gap = b.z_begin - a.z_end;
    if (std::abs(gap) > 1e-12 * std::max({1.0, std::abs(a.z_end), std::abs(b.z_begin)})) {
      std::ostringstream os;
      os << "regions '" << a.name << "' and '" << b.name << "' are not contiguous: " << (gap > 0 ? "gap" : "overlap")
         << " of " << std::abs(gap) << " m between z = " << a.z_end << " m and z = " << b.z_begin << " m";
      throw ParseError(os.str(), region_lines[i]);
    }
  }
  if (sc.w0_is_magnetic) sc.state.w0 = magnetic_width(sc.regions.front().axial_field(), sc.state.species);
  {
    Reader r(analysis);
    auto& s = sc.settings;
    if (const Entry* e = r.find("run")) {
      std::string_view list = e->value;
      while (!list.empty()) {
        const auto comma = list.find(',');
        const auto item = trim(list.substr(0, comma));
        if (item == "all") {
          for (Analysis a : all_analyses()) sc.analyses.push_back(a);
        } else {
          try {
            sc.analyses.push_back(analysis_from_string(item));
          } catch (const DomainError& err) {
            throw ParseError(err.what(), e->line);
          }
        }
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
      }
    }
    r.get("z_max", Dim::length, s.z_max);
    r.get_int("samples", s.samples);
    r.get("sigma_pz", Dim::energy, s.sigma_pz);
    r.get_int("ensemble", s.ensemble);
    r.get("jitter", Dim::length, s.jitter);
    r.get("oracle_tolerance", Dim::none, s.oracle_tolerance);
    r.get_int("oracle_points", s.oracle_points);
    r.get("retention", Dim::none, s.retention);
    r.get("analyzer_B", Dim::field, s.analyzer.b_tilde);
    r.get("analyzer_kappa", Dim::gradient, s.analyzer.kappa);
    r.get("analyzer_begin", Dim::length, s.analyzer.z_begin);
    r.get("analyzer_end", Dim::length, s.analyzer.z_end);
    r.get("target", Dim::length, s.analyzer.z_target);
    r.get("outlet", Dim::length, s.analyzer.outlet_diameter);
    r.get("aperture", Dim::length, s.analyzer.aperture_radius);
    if (s.samples < 2) throw ParseError("samples must be >= 2", analysis.at("samples").line);
    if (s.ensemble < 0) throw ParseError("ensemble must be >= 0", analysis.at("ensemble").line);
    if (s.oracle_points < 64) throw ParseError("oracle_points must be >= 64", analysis.at("oracle_points").line);
  }
  {
    Reader r(output);
    std::string dir;
    r.get_text("dir", dir);
    if (!dir.empty()) sc.output_dir = dir;
  }
  if (sc.analyses.empty()) sc.analyses = all_analyses();
  try {
    sc.validate();
  } catch (const DomainError& err) {
    throw ParseError(err.what(), line_no);
  }
  return sc;
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open scenario file " + path.string(), 0);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scenario_text(ss.str());
}

Scenario default_scenario() {
  Scenario sc;
  sc.state.species = ParticleSpecies::electron();
  sc.state.n = 0;
  sc.state.ell = 2;
  sc.state.p_z = 1e6;
  sc.w0_is_magnetic = true;
  FieldRegion sol;
  sol.name = "solenoid";
  sol.kind = RegionKind::solenoid;
  sol.b_axis = 1.0;
  sol.z_begin = -0.05;
  sol.z_end = 0.0;
  sol.fringe_length = 1e-3;
  FieldRegion vac;
  vac.name = "vacuum";
  vac.kind = RegionKind::vacuum;
  vac.z_begin = 0.0;
  vac.z_end = 0.05;
  sc.regions = {sol, vac};
  sc.state.w0 = magnetic_width(sol.b_axis, sc.state.species);
  sc.analyses = all_analyses();
  return sc;
}

}  // namespace twist
