#pragma once

#include <string>
#include <vector>

#include "twist/vec.hpp"

namespace twist {

enum class RegionKind { solenoid, vacuum, quadrupole };

const char* to_string(RegionKind k);

/// One longitudinal segment of the beamline. Fields in tesla, lengths in metres.
struct FieldRegion {
  std::string name;
  RegionKind kind = RegionKind::solenoid;
  double b_axis = 0.0;          // B_z deep inside, on the region's own axis
  double z_begin = 0.0;
  double z_end = 0.0;
  Vec2 axis_offset;             // d, from the global axis
  double fringe_length = 0.0;   // lambda; 0 is a sharp edge
  double kappa = 0.0;           // quadrupole gradient, T/m
  double b_uniform = 0.0;       // quadrupole uniform part B~
  double gap_field = 0.0;       // vacuum only: residual axial field B^(0)
  double bore_radius = 0.0;     // optional; 0 disables the R << bore warning

  /// Axial field this region contributes on its axis (gap_field for vacuum).
  double axial_field() const;
  void validate() const;
};

/// On-axis B_z and its z-derivatives.
struct AxisProfile {
  double b = 0.0;
  double db = 0.0;
  double d2b = 0.0;
  double d3b = 0.0;
};

/// Single tanh edge from b_before to b_after centred at z_edge.
struct Edge {
  double z_edge = 0.0;
  double b_before = 0.0;
  double b_after = 0.0;
  double lambda = 0.0;
};

AxisProfile edge_profile(const Edge& edge, double z);

/// Box profile of one region on its own axis: zero outside, b_axis inside,
/// tanh edges of width fringe_length. Left/right edges can be suppressed so
/// that the first and last region of a map extend to infinity.
AxisProfile fringe_profile(const FieldRegion& region, double z, bool open_left = false,
                           bool open_right = false);

/// Cylindrical and Cartesian components at one point.
struct FieldSample {
  double b_r = 0.0;
  double b_phi = 0.0;
  double b_z = 0.0;
  Vec3 b;                    // Cartesian, tesla
  bool beyond_validity = false;  // R / bore > 0.1
};

/// Paraxial expansion about the region axis: B_R = -(R/2) b', B_z = b - (R^2/4) b''.
/// R is measured from the region's own axis.
FieldSample solenoid_field(const FieldRegion& region, double radius, double phi, double z);

/// A = (B/2) z x (R0 + r), T m. R0 is the state axis relative to the solenoid axis.
Vec2 symmetric_gauge_potential(const FieldRegion& region, Vec2 r0, Vec2 r);
Vec2 symmetric_gauge_potential(double b_tesla, Vec2 r0, Vec2 r);

/// A_phi(after) - A_phi(before) at radius R across a sharp boundary, T m.
double gauge_jump(double b_before, double b_after, double radius);

/// (B~_x, 0, B~_z) = (kappa z, 0, B~ + kappa x).
FieldSample quadrupole_field(double b_tilde, double kappa, double x, double z);

struct FieldLine {
  std::vector<double> z;
  std::vector<double> x_exact;
  std::vector<double> x_parabola;
};

FieldLine field_line(double b_tilde, double kappa, double x0, double z0, const std::vector<double>& z_grid);

/// A place where the field changes along z, and over how long (0 = sharp).
struct FieldFeature {
  double z = 0.0;
  double width = 0.0;
};

/// Ordered, contiguous regions sharing one global frame.
class FieldMap {
 public:
  FieldMap() = default;
  explicit FieldMap(std::vector<FieldRegion> regions);

  /// Total field (tesla) at a global Cartesian point.
  Vec3 field(const Vec3& position) const;
  /// Sum of the solenoid box profiles, each on its own axis (quadrupoles excluded).
  AxisProfile axis_profile(double z) const;
  /// Edges of every field-carrying region, with the fringe width the map uses there.
  std::vector<FieldFeature> features() const;
  /// Jump of the transverse symmetric-gauge potential, sum_i (db_i/2) z x (r - d_i),
  /// across the sharp solenoid edges located exactly at z (T m).
  Vec2 sharp_edge_potential_jump(Vec2 r, double z) const;
  /// Index of the region whose z_range contains z, or -1.
  int region_index(double z) const;

  const std::vector<FieldRegion>& regions() const { return regions_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Set when any evaluated point exceeded R / bore = 0.1.
  bool validity_exceeded() const { return validity_exceeded_; }

 private:
  std::vector<FieldRegion> regions_;
  std::vector<double> left_lambda_;
  std::vector<double> right_lambda_;
  std::vector<std::string> warnings_;
  mutable bool validity_exceeded_ = false;
};

}  // namespace twist
