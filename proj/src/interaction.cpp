#include <cmath>
#include <numbers>

#include "atomgate/protocol.hpp"

namespace atomgate {

namespace {

void require_normalized(const Wavefunction& psi) {
  if (std::abs(norm_squared(psi) - 1.0) > 1e-6) {
    throw InvalidParameter("interaction energy needs a normalized state");
  }
}

}  // namespace

double hold_time(double frequency_hz, double phase) {
  if (!(frequency_hz > 0.0)) throw InvalidParameter("interaction frequency must be positive");
  return phase / (2.0 * std::numbers::pi * frequency_hz);
}

InteractionReport interaction_from_quartic(double quartic, double scattering_over_wavelength,
                                           const ScaledUnits& units, double phase) {
  const double e = 2.0 * scattering_over_wavelength / std::numbers::pi * quartic;
  const double nu = e * units.recoil_frequency();
  return {e, nu, hold_time(nu, phase)};
}

InteractionReport interaction_energy(const Wavefunction& psi, double scattering_over_wavelength,
                                     const ScaledUnits& units, double phase) {
  if (psi.grid().dimension() != 3) {
    throw InvalidParameter("interaction energy needs a 3-D state or a separable product");
  }
  require_normalized(psi);
  return interaction_from_quartic(quartic_integral(psi), scattering_over_wavelength, units, phase);
}

InteractionReport interaction_energy(const SeparableState& psi, double scattering_over_wavelength,
                                     const ScaledUnits& units, double phase) {
  for (const Wavefunction* f : {&psi.x, &psi.y, &psi.z}) {
    if (f->grid().dimension() != 1) throw InvalidParameter("separable factors must be 1-D");
    require_normalized(*f);
  }
  const double q = quartic_integral(psi.x) * quartic_integral(psi.y) * quartic_integral(psi.z);
  return interaction_from_quartic(q, scattering_over_wavelength, units, phase);
}

SeparableState lattice_well_separable(const LatticeSpec& lattice, const GroundStateConfig& cfg,
                                      Eigen::Index points) {
  const double zm = lattice.center_z;
  const double reach = 2.5 * lattice.waist / 4.0;
  const double quarter = 0.25 * lattice.wavelength;
  const Eigen::Vector3d well(0.0, 0.0, zm);
  GroundStateConfig c = cfg;
  c.center = well;
  // One lattice period along x; periodic boundaries make it a single well.
  const Grid gx({Axis{Coordinate::x, -quarter, quarter, points}}, well);
  const Grid gy({Axis{Coordinate::y, -reach, reach, points}}, well);
  const Grid gz({Axis{Coordinate::z, zm - reach, zm + reach, points}}, well);
  return {ground_state(lattice_potential(lattice, gx), c).state,
          ground_state(lattice_potential(lattice, gy), c).state,
          ground_state(lattice_potential(lattice, gz), c).state};
}

Wavefunction lattice_well_3d(const LatticeSpec& lattice, const GroundStateConfig& cfg,
                             Eigen::Index x_points, Eigen::Index yz_points, double extent) {
  const double zm = lattice.center_z;
  const double quarter = 0.25 * lattice.wavelength;
  const Eigen::Vector3d well(0.0, 0.0, zm);
  const Grid grid({Axis{Coordinate::x, -quarter, quarter, x_points},
                   Axis{Coordinate::y, -extent, extent, yz_points},
                   Axis{Coordinate::z, zm - extent, zm + extent, yz_points}},
                  well);
  GroundStateConfig c = cfg;
  c.center = well;
  return ground_state(lattice_potential(lattice, grid), c).state;
}

}  // namespace atomgate
