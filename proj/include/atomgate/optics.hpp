#pragma once

namespace atomgate {

/// Signed laser detuning 2 pi c (1/lambda_laser - 1/lambda_line) in rad/s;
/// negative for red detuning.
double detuning(double laser_wavelength, double line_wavelength);

/// Dipole-trap depth scale U_0 = (3/8) (Gamma_e/|Delta|) E_0^2 / k^3 with
/// I_0 = c E_0^2 / 8 pi (Gaussian units), evaluated as
/// 3 pi Gamma_e I_0 / (|Delta| c k^3). SI in, joules out.
double trap_depth_u0(double intensity, double half_linewidth, double detuning,
                     double wavenumber);

/// Power through a circular aperture of radius a at intensity I_0.
double laser_power(double intensity, double aperture_radius);

}  // namespace atomgate
