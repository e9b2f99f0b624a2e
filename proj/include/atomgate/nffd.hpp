#pragma once

#include <optional>

#include "atomgate/field.hpp"

namespace atomgate {

/// Circular aperture in the z = 0 plane lit by a plane wave from -z.
/// Lengths in lattice wavelengths, depth in recoil energies.
struct ApertureSpec {
  double radius = 1.5 * 795.118 / 785.0;
  double wavelength = 795.118 / 785.0;
  double depth = 280.0;
  int quadrature_order = 64;
};

void validate(const ApertureSpec& spec);

/// Relative diffracted field E(r)/E_0 from the first Rayleigh-Sommerfeld
/// integral over the aperture disk, polar Gauss-Legendre of the spec's
/// order in both radius and angle. Requires r.z() > 0.
Complex nffd_relative_field(const ApertureSpec& spec, const Eigen::Vector3d& r);

/// Diffracted field cached on a grid. Immutable after construction.
struct NFFDField {
  Grid grid;
  Eigen::ArrayXcd relative;  // E / E_0 per grid point
  double depth;              // U_0 in E_r
  /// Worst relative change on sampled points when the order is doubled.
  double quadrature_delta = 0.0;

  /// U_F = -U_0 |E / E_0|^2.
  RealField potential() const;
  bool converged(double tolerance = 1e-6) const { return quadrature_delta <= tolerance; }
};

/// Evaluates the field once per distinct (rho, z) on the grid; rotational
/// symmetry about z makes that exact. Throws SingularKernel if any point has
/// z <= 0.
NFFDField nffd_field(const ApertureSpec& spec, const Grid& grid);

/// On-axis position of the deepest point of U_F in (z_lo, z_hi), located by
/// a coarse scan followed by golden-section refinement.
double nffd_on_axis_minimum(const ApertureSpec& spec, double z_lo = 0.3, double z_hi = 6.0);

}  // namespace atomgate
