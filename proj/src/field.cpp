#include "atomgate/field.hpp"

#include <cmath>

namespace atomgate {

RealField sample(const Grid& grid, const std::function<double(const Eigen::Vector3d&)>& f) {
  RealField::Values v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) v[i] = f(grid.position(i));
  return RealField(grid, std::move(v));
}

Wavefunction sample_complex(const Grid& grid,
                            const std::function<Complex(const Eigen::Vector3d&)>& f) {
  Wavefunction::Values v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) v[i] = f(grid.position(i));
  return Wavefunction(grid, std::move(v));
}

double norm_squared(const Wavefunction& psi) {
  return psi.values().abs2().sum() * psi.grid().cell_volume();
}

Wavefunction normalize(const Wavefunction& psi) {
  const double n2 = norm_squared(psi);
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw DegenerateState("cannot normalize a state with zero or non-finite norm");
  }
  return psi.with_values(psi.values() / std::sqrt(n2));
}

Complex inner_product(const Wavefunction& phi, const Wavefunction& psi) {
  require_same_grid(phi.grid(), psi.grid());
  return (phi.values().conjugate() * psi.values()).sum() * phi.grid().cell_volume();
}

double overlap_fidelity(const Wavefunction& psi, const Wavefunction& phi) {
  return std::norm(inner_product(phi, psi));
}

double expectation(const Wavefunction& psi, Coordinate c) {
  const Eigen::ArrayXd coord = psi.grid().coordinate_values(c);
  return (psi.values().abs2() * coord).sum() * psi.grid().cell_volume() / norm_squared(psi);
}

double spread(const Wavefunction& psi, Coordinate c) {
  const Eigen::ArrayXd coord = psi.grid().coordinate_values(c);
  const Eigen::ArrayXd rho = psi.values().abs2() / psi.values().abs2().sum();
  const double mean = (rho * coord).sum();
  return std::sqrt((rho * (coord - mean).square()).sum());
}

double quartic_integral(const Wavefunction& psi) {
  return psi.values().abs2().square().sum() * psi.grid().cell_volume();
}

}  // namespace atomgate
