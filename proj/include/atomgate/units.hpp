#pragma once

#include <numbers>
#include <optional>

namespace atomgate {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double planck = 2.0 * std::numbers::pi * hbar;
inline constexpr double speed_of_light = 299792458.0;   // m/s
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double rb87_mass = 86.909180527 * atomic_mass_unit;
}  // namespace constants

/// An energy given either in recoil units or as h x frequency.
struct EnergySpec {
  enum class Unit { recoil, hertz };
  double value = 0.0;
  Unit unit = Unit::recoil;

  static EnergySpec recoil(double v) { return {v, Unit::recoil}; }
  static EnergySpec hertz(double v) { return {v, Unit::hertz}; }
};

/// Dimensional inputs, SI throughout. Defaults are the 87Rb / D1 setup.
struct PhysicalParams {
  double aperture_radius = 1.5 * 795.118e-9;       // m
  double trap_wavelength = 795.118e-9;             // m
  double trap_intensity = 2.5e9;                   // W/m^2 (2.5e5 W/cm^2)
  double atomic_line = 794.979e-9;                 // m
  std::optional<double> trap_minimum = 1.7e-6;     // m; located from the field if unset
  double lattice_wavelength = 785e-9;              // m
  EnergySpec trap_depth = EnergySpec::recoil(280.0);
  EnergySpec lattice_depth = EnergySpec::recoil(40.0);
  double waist = 4.0 * 785e-9;                     // m
  double scattering_length = 5.19e-9;              // m
  double atomic_mass = constants::rb87_mass;       // kg
  std::optional<double> half_linewidth;            // rad/s, no default
};

/// Throws InvalidParameter naming the first offending field.
void validate(const PhysicalParams& params);

/// Natural units of lattice dynamics: lengths in lambda_OL, energies in
/// E_r, times in hbar/E_r.
struct ScaledUnits {
  double recoil_energy;  // J
  double time_unit;      // s
  double length_unit;    // m
  double wavenumber;     // 1/m

  double energy_to_scaled(double joules) const { return joules / recoil_energy; }
  double energy_to_physical(double scaled) const { return scaled * recoil_energy; }
  double time_to_scaled(double seconds) const { return seconds / time_unit; }
  double time_to_physical(double scaled) const { return scaled * time_unit; }
  double length_to_scaled(double meters) const { return meters / length_unit; }
  double length_to_physical(double scaled) const { return scaled * length_unit; }

  /// Recoil energy expressed as a frequency E_r / h.
  double recoil_frequency() const { return recoil_energy / constants::planck; }

  /// Resolve a depth to recoil units.
  double depth_to_scaled(const EnergySpec& e) const {
    return e.unit == EnergySpec::Unit::recoil
               ? e.value
               : energy_to_scaled(e.value * constants::planck);
  }
};

ScaledUnits derive_scaled_units(const PhysicalParams& params);

/// hbar^2 / (2 m) in scaled units, i.e. H = -kinetic * laplacian + V with
/// lengths in lambda_OL and energies in E_r. Exactly 1 / (2 pi)^2.
inline constexpr double recoil_kinetic_coefficient =
    1.0 / (4.0 * std::numbers::pi * std::numbers::pi);

}  // namespace atomgate
