#include "twist/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twist/errors.hpp"

namespace twist {

namespace {

constexpr double kValidityRatio = 0.1;

// S(z) = (1 + tanh((z - z_e)/lambda)) / 2 and derivatives.
AxisProfile step_profile(double z_edge, double lambda, double z) {
  AxisProfile s;
  if (lambda <= 0.0) {
    s.b = z > z_edge ? 1.0 : (z < z_edge ? 0.0 : 0.5);
    return s;
  }
  const double t = std::tanh((z - z_edge) / lambda);
  const double sech2 = 1.0 - t * t;
  s.b = 0.5 * (1.0 + t);
  s.db = 0.5 * sech2 / lambda;
  s.d2b = -t * sech2 / (lambda * lambda);
  s.d3b = sech2 * (3.0 * t * t - 1.0) / (lambda * lambda * lambda);
  return s;
}

AxisProfile box_profile(double b, double z0, double lambda0, bool open0, double z1, double lambda1, bool open1,
                        double z) {
  const AxisProfile up = open0 ? AxisProfile{1.0, 0.0, 0.0, 0.0} : step_profile(z0, lambda0, z);
  const AxisProfile down = open1 ? AxisProfile{} : step_profile(z1, lambda1, z);
  return {b * (up.b - down.b), b * (up.db - down.db), b * (up.d2b - down.d2b), b * (up.d3b - down.d3b)};
}

}  // namespace

const char* to_string(RegionKind k) {
  switch (k) {
    case RegionKind::solenoid: return "solenoid";
    case RegionKind::vacuum: return "vacuum";
    case RegionKind::quadrupole: return "quadrupole";
  }
  return "unknown";
}

double FieldRegion::axial_field() const {
  switch (kind) {
    case RegionKind::solenoid: return b_axis;
    case RegionKind::vacuum: return gap_field;
    case RegionKind::quadrupole: return 0.0;
  }
  return 0.0;
}

void FieldRegion::validate() const {
  if (!(z_end > z_begin)) throw DomainError("region '" + name + "': z_range is degenerate");
  if (fringe_length < 0.0) throw DomainError("region '" + name + "': fringe length must be >= 0");
  if (kind == RegionKind::vacuum && b_axis != 0.0)
    throw DomainError("region '" + name + "': vacuum region must have B_axis = 0 (use gap_field)");
  if (bore_radius < 0.0) throw DomainError("region '" + name + "': bore radius must be >= 0");
}

AxisProfile edge_profile(const Edge& edge, double z) {
  const AxisProfile s = step_profile(edge.z_edge, edge.lambda, z);
  const double jump = edge.b_after - edge.b_before;
  return {edge.b_before + jump * s.b, jump * s.db, jump * s.d2b, jump * s.d3b};
}

AxisProfile fringe_profile(const FieldRegion& region, double z, bool open_left, bool open_right) {
  return box_profile(region.axial_field(), region.z_begin, region.fringe_length, open_left, region.z_end,
                     region.fringe_length, open_right, z);
}

FieldSample solenoid_field(const FieldRegion& region, double radius, double phi, double z) {
  if (radius < 0.0) throw DomainError("radius must be non-negative");
  const AxisProfile p = fringe_profile(region, z);
  FieldSample s;
  s.b_r = -0.5 * radius * p.db;
  s.b_phi = 0.0;
  s.b_z = p.b - 0.25 * radius * radius * p.d2b;
  s.b = {s.b_r * std::cos(phi), s.b_r * std::sin(phi), s.b_z};
  s.beyond_validity = region.bore_radius > 0.0 && radius / region.bore_radius > kValidityRatio;
  return s;
}

Vec2 symmetric_gauge_potential(double b_tesla, Vec2 r0, Vec2 r) { return z_cross(0.5 * b_tesla, r0 + r); }

Vec2 symmetric_gauge_potential(const FieldRegion& region, Vec2 r0, Vec2 r) {
  return symmetric_gauge_potential(region.axial_field(), r0, r);
}

double gauge_jump(double b_before, double b_after, double radius) { return 0.5 * (b_after - b_before) * radius; }

FieldSample quadrupole_field(double b_tilde, double kappa, double x, double z) {
  FieldSample s;
  s.b = {kappa * z, 0.0, b_tilde + kappa * x};
  s.b_z = s.b.z;
  s.b_r = s.b.x;  // at phi = 0
  return s;
}

FieldLine field_line(double b_tilde, double kappa, double x0, double z0, const std::vector<double>& z_grid) {
  FieldLine line;
  line.z = z_grid;
  line.x_exact.reserve(z_grid.size());
  line.x_parabola.reserve(z_grid.size());
  if (b_tilde + kappa * x0 <= 0.0) throw DomainError("field line requires B~ + kappa x > 0 at the seed");
  for (double z : z_grid) {
    if (kappa == 0.0) {
      line.x_exact.push_back(x0);
      line.x_parabola.push_back(x0);
      continue;
    }
    const double a = b_tilde / kappa;
    const double c = z * z - z0 * z0 + (x0 + 2.0 * a) * x0;
    const double disc = a * a + c;
    if (disc < 0.0) throw DomainError("field line does not reach the requested z");
    const double root = std::copysign(std::sqrt(disc), kappa);
    const double denom = a + root;
    line.x_exact.push_back(denom != 0.0 ? c / denom : -a);
    line.x_parabola.push_back(x0 + kappa * (z * z - z0 * z0) / (2.0 * b_tilde));
  }
  return line;
}

FieldMap::FieldMap(std::vector<FieldRegion> regions) : regions_(std::move(regions)) {
  if (regions_.empty()) throw DomainError("field map needs at least one region");
  for (const auto& r : regions_) r.validate();
  constexpr double kGapTol = 1e-12;
  for (std::size_t i = 1; i < regions_.size(); ++i) {
    const auto& a = regions_[i - 1];
    const auto& b = regions_[i];
    const double gap = b.z_begin - a.z_end;
    if (std::abs(gap) > kGapTol * std::max({1.0, std::abs(a.z_end), std::abs(b.z_begin)})) {
      throw DomainError("regions '" + a.name + "' and '" + b.name + "' are not contiguous (" +
                        (gap > 0 ? "gap" : "overlap") + " of " + std::to_string(std::abs(gap)) + " m)");
    }
  }
  left_lambda_.resize(regions_.size());
  right_lambda_.resize(regions_.size());
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    const double own = regions_[i].fringe_length;
    left_lambda_[i] = i > 0 ? std::max(own, regions_[i - 1].fringe_length) : own;
    right_lambda_[i] = i + 1 < regions_.size() ? std::max(own, regions_[i + 1].fringe_length) : own;
  }
  for (const auto& r : regions_) {
    if (r.kind == RegionKind::quadrupole && r.fringe_length > 0.0)
      warnings_.push_back("region '" + r.name + "': quadrupole edges are treated as sharp");
  }
}

std::vector<FieldFeature> FieldMap::features() const {
  std::vector<FieldFeature> out;
  const std::size_t count = regions_.size();
  for (std::size_t i = 0; i < count; ++i) {
    const FieldRegion& reg = regions_[i];
    if (reg.kind == RegionKind::quadrupole) {
      out.push_back({reg.z_begin, 0.0});
      out.push_back({reg.z_end, 0.0});
      continue;
    }
    if (reg.axial_field() == 0.0) continue;
    if (i > 0) out.push_back({reg.z_begin, left_lambda_[i]});
    if (i + 1 < count) out.push_back({reg.z_end, right_lambda_[i]});
  }
  return out;
}

Vec2 FieldMap::sharp_edge_potential_jump(Vec2 r, double z) const {
  Vec2 jump;
  const std::size_t count = regions_.size();
  for (std::size_t i = 0; i < count; ++i) {
    const FieldRegion& reg = regions_[i];
    if (reg.kind == RegionKind::quadrupole || reg.axial_field() == 0.0) continue;
    double db = 0.0;
    if (i > 0 && z == reg.z_begin && left_lambda_[i] == 0.0) db += reg.axial_field();
    if (i + 1 < count && z == reg.z_end && right_lambda_[i] == 0.0) db -= reg.axial_field();
    if (db != 0.0) jump = jump + z_cross(0.5 * db, r - reg.axis_offset);
  }
  return jump;
}

int FieldMap::region_index(double z) const {
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (z >= regions_[i].z_begin && z < regions_[i].z_end) return static_cast<int>(i);
  }
  if (!regions_.empty() && z == regions_.back().z_end) return static_cast<int>(regions_.size()) - 1;
  return -1;
}

AxisProfile FieldMap::axis_profile(double z) const {
  AxisProfile sum;
  const std::size_t count = regions_.size();
  for (std::size_t i = 0; i < count; ++i) {
    const FieldRegion& reg = regions_[i];
    if (reg.kind == RegionKind::quadrupole || reg.axial_field() == 0.0) continue;
    const AxisProfile a = box_profile(reg.axial_field(), reg.z_begin, left_lambda_[i], i == 0, reg.z_end,
                                      right_lambda_[i], i + 1 == count, z);
    sum.b += a.b;
    sum.db += a.db;
    sum.d2b += a.d2b;
    sum.d3b += a.d3b;
  }
  return sum;
}

Vec3 FieldMap::field(const Vec3& p) const {
  Vec3 total;
  const std::size_t count = regions_.size();
  for (std::size_t i = 0; i < count; ++i) {
    const FieldRegion& reg = regions_[i];
    const Vec2 local = p.transverse() - reg.axis_offset;
    if (reg.kind == RegionKind::quadrupole) {
      if (p.z >= reg.z_begin && p.z < reg.z_end) {
        const double zc = 0.5 * (reg.z_begin + reg.z_end);
        const FieldSample q = quadrupole_field(reg.b_uniform, reg.kappa, local.x, p.z - zc);
        total = total + q.b;
      }
      continue;
    }
    if (reg.axial_field() == 0.0) continue;
    const AxisProfile a = box_profile(reg.axial_field(), reg.z_begin, left_lambda_[i], i == 0, reg.z_end,
                                      right_lambda_[i], i + 1 == count, p.z);
    const double r2 = norm2(local);
    // B_R carries the R^3 b'''/16 term so that the map is the exact curl of
    // A_phi = R b/2 - R^3 b''/16 and divergence-free.
    const double radial = -0.5 * a.db + r2 * a.d3b / 16.0;
    total.x += local.x * radial;
    total.y += local.y * radial;
    total.z += a.b - 0.25 * r2 * a.d2b;
    if (reg.bore_radius > 0.0 && std::sqrt(r2) / reg.bore_radius > kValidityRatio) validity_exceeded_ = true;
  }
  return total;
}

}  // namespace twist
