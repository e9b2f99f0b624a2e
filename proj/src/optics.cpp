#include "atomgate/optics.hpp"

#include <cmath>
#include <numbers>

#include "atomgate/errors.hpp"
#include "atomgate/units.hpp"

namespace atomgate {

double detuning(double laser_wavelength, double line_wavelength) {
  if (!(laser_wavelength > 0.0) || !(line_wavelength > 0.0)) {
    throw InvalidParameter("wavelengths must be positive");
  }
  return 2.0 * std::numbers::pi * constants::speed_of_light *
         (1.0 / laser_wavelength - 1.0 / line_wavelength);
}

double trap_depth_u0(double intensity, double half_linewidth, double detuning,
                     double wavenumber) {
  if (detuning == 0.0) throw InvalidParameter("zero detuning: trap depth diverges");
  if (!(intensity > 0.0)) throw InvalidParameter("intensity must be positive");
  if (!(wavenumber > 0.0)) throw InvalidParameter("wavenumber must be positive");
  return 3.0 * std::numbers::pi * half_linewidth * intensity /
         (std::abs(detuning) * constants::speed_of_light * wavenumber * wavenumber *
          wavenumber);
}

double laser_power(double intensity, double aperture_radius) {
  if (intensity < 0.0) throw InvalidParameter("intensity must be non-negative");
  if (!(aperture_radius > 0.0)) throw InvalidParameter("aperture radius must be positive");
  return intensity * std::numbers::pi * aperture_radius * aperture_radius;
}

}  // namespace atomgate
