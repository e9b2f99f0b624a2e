#include "atomgate/units.hpp"

#include <cmath>
#include <string>

#include "atomgate/errors.hpp"

namespace atomgate {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidParameter(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

void validate(const PhysicalParams& p) {
  require_positive(p.aperture_radius, "aperture_radius");
  require_positive(p.trap_wavelength, "trap_wavelength");
  require_positive(p.trap_intensity, "trap_intensity");
  require_positive(p.atomic_line, "atomic_line");
  if (p.trap_minimum) require_positive(*p.trap_minimum, "trap_minimum");
  require_positive(p.lattice_wavelength, "lattice_wavelength");
  require_positive(p.trap_depth.value, "trap_depth");
  require_positive(p.lattice_depth.value, "lattice_depth");
  require_positive(p.waist, "waist");
  require_positive(p.scattering_length, "scattering_length");
  require_positive(p.atomic_mass, "atomic_mass");
  if (p.half_linewidth) require_positive(*p.half_linewidth, "half_linewidth");
  if (p.trap_wavelength == p.atomic_line) {
    throw InvalidParameter("trap_wavelength equals atomic_line: zero detuning");
  }
}

ScaledUnits derive_scaled_units(const PhysicalParams& params) {
  require_positive(params.lattice_wavelength, "lattice_wavelength");
  require_positive(params.atomic_mass, "atomic_mass");
  const double k = 2.0 * std::numbers::pi / params.lattice_wavelength;
  const double er =
      constants::hbar * constants::hbar * k * k / (2.0 * params.atomic_mass);
  return ScaledUnits{er, constants::hbar / er, params.lattice_wavelength, k};
}

}  // namespace atomgate
