#pragma once

#include "atomgate/field.hpp"

namespace atomgate {

/// Counterpropagating-beam lattice along x with a Gaussian transverse
/// envelope centred on (y, z) = (0, center_z). Scaled units.
struct LatticeSpec {
  double depth = 40.0;
  double wavelength = 1.0;
  double waist = 4.0;
  double center_z = 1.753e-6 / 785e-9;

  double wavenumber() const;
  double lattice_constant() const { return 0.5 * wavelength; }
};

void validate(const LatticeSpec& spec);

double lattice_envelope(const LatticeSpec& spec, const Eigen::Vector3d& r);

/// V_OL = -V_0 cos^2(k x) e^{-2 (y^2 + (z - z_m)^2) / w^2}.
RealField lattice_potential(const LatticeSpec& spec, const Grid& grid);

enum class HyperfineState { zero, one };

/// Share of the sigma+ (m_J = +1/2) and sigma- (m_J = -1/2) lattices felt
/// by a hyperfine state; the squared amplitudes of its electron-spin
/// decomposition.
struct PolarizationWeights {
  double plus;
  double minus;
};

PolarizationWeights polarization_weights(HyperfineState state);

/// V+ and V- for a polarization tilt theta and their weighted mixtures.
struct StatePotentials {
  RealField plus;
  RealField minus;
  RealField state0;
  RealField state1;
};

StatePotentials state_potentials(const LatticeSpec& spec, double theta, const Grid& grid);

RealField state_potential(const LatticeSpec& spec, HyperfineState state, double theta,
                          const Grid& grid);

}  // namespace atomgate
