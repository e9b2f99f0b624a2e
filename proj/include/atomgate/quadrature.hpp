#pragma once

#include <Eigen/Core>

namespace atomgate {

struct QuadratureRule {
  Eigen::ArrayXd nodes;
  Eigen::ArrayXd weights;
};

/// n-point Gauss-Legendre rule on [lo, hi]; exact for polynomials of
/// degree 2n - 1.
QuadratureRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

}  // namespace atomgate
