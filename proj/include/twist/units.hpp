#pragma once

// Natural units (hbar = c = 1, energies in eV) are used internally; SI values
// enter and leave only through the conversions below.

namespace twist::units {

// CODATA 2018 exact / recommended values.
inline constexpr double kSpeedOfLight = 299792458.0;           // m/s
inline constexpr double kHbarEvS = 6.582119569e-16;            // eV s
inline constexpr double kElementaryCharge = 1.602176634e-19;   // C
inline constexpr double kElectronMassEv = 0.51099895000e6;     // eV
inline constexpr double kHbarCEvM = kHbarEvS * kSpeedOfLight;  // eV m
inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// |e| B for one elementary charge in a 1 T field, in eV^2 (hbar c^2 e / e).
inline constexpr double kTeslaToEv2 = kHbarEvS * kSpeedOfLight * kSpeedOfLight;
/// Momentum (eV/c) acquired per elementary charge per tesla-metre: c in eV/(T m).
inline constexpr double kEvPerTeslaMetre = kSpeedOfLight;
/// Bohr magneton in eV/T.
inline constexpr double kBohrMagnetonEvPerT = kTeslaToEv2 / (2.0 * kElectronMassEv);
/// Positronium binding energy used by the stability criterion, eV.
inline constexpr double kPositroniumBindingEv = 6.8;

/// Conversion between SI quantities and the internal natural units.
struct UnitContext {
  double hbar_c = kHbarCEvM;     // eV m
  double hbar = kHbarEvS;        // eV s
  double tesla = kTeslaToEv2;    // eV^2 per T (unit charge)

  constexpr double length_from_si(double metres) const { return metres / hbar_c; }
  constexpr double length_to_si(double inv_ev) const { return inv_ev * hbar_c; }
  constexpr double area_from_si(double m2) const { return m2 / (hbar_c * hbar_c); }
  constexpr double area_to_si(double inv_ev2) const { return inv_ev2 * hbar_c * hbar_c; }
  constexpr double time_from_si(double seconds) const { return seconds / hbar; }
  constexpr double time_to_si(double inv_ev) const { return inv_ev * hbar; }
  constexpr double field_from_si(double t) const { return t * tesla; }
  constexpr double field_to_si(double ev2) const { return ev2 / tesla; }
  /// Wavenumber: eV (momentum) <-> 1/m.
  constexpr double wavenumber_to_si(double ev) const { return ev / hbar_c; }
  constexpr double wavenumber_from_si(double per_m) const { return per_m * hbar_c; }
};

inline constexpr UnitContext kNatural{};

}  // namespace twist::units
