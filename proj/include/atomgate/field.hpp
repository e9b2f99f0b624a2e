#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <utility>

#include "atomgate/errors.hpp"
#include "atomgate/grid.hpp"

namespace atomgate {

using Complex = std::complex<double>;

/// Values of type Scalar sampled on a Grid, flat row-major storage.
template <typename Scalar>
class Field {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Field(Grid grid, Values values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw IncompatibleGrid("field size does not match its grid");
    }
  }

  static Field zero(const Grid& grid) { return Field(grid, Values::Zero(grid.size())); }

  const Grid& grid() const { return grid_; }
  const Values& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  Scalar operator[](Eigen::Index i) const { return values_[i]; }

  /// Same grid, new values.
  template <typename Expr>
  Field with_values(Expr&& values) const {
    return Field(grid_, Values(std::forward<Expr>(values)));
  }

 private:
  Grid grid_;
  Values values_;
};

using RealField = Field<double>;
using Wavefunction = Field<Complex>;

inline void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw IncompatibleGrid("fields live on different grids");
}

template <typename Scalar>
Field<Scalar> operator+(const Field<Scalar>& a, const Field<Scalar>& b) {
  require_same_grid(a.grid(), b.grid());
  return a.with_values(a.values() + b.values());
}

template <typename Scalar>
Field<Scalar> operator*(double s, const Field<Scalar>& a) {
  return a.with_values(s * a.values());
}

/// Evaluate f(r) at every grid point.
RealField sample(const Grid& grid, const std::function<double(const Eigen::Vector3d&)>& f);
Wavefunction sample_complex(const Grid& grid,
                            const std::function<Complex(const Eigen::Vector3d&)>& f);

/// Sum |psi|^2 times the cell volume.
double norm_squared(const Wavefunction& psi);

/// Throws DegenerateState on a zero or non-finite norm.
Wavefunction normalize(const Wavefunction& psi);

/// <phi|psi> with the grid's cell volume as measure.
Complex inner_product(const Wavefunction& phi, const Wavefunction& psi);

/// |<phi|psi>|^2 for normalized states.
double overlap_fidelity(const Wavefunction& psi, const Wavefunction& phi);

/// <psi| c |psi> for a coordinate c.
double expectation(const Wavefunction& psi, Coordinate c);

/// Standard deviation of coordinate c in |psi|^2.
double spread(const Wavefunction& psi, Coordinate c);

/// Integral of |psi|^4.
double quartic_integral(const Wavefunction& psi);

}  // namespace atomgate
