#include "atomgate/nffd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "atomgate/quadrature.hpp"

namespace atomgate {

namespace {

struct DiskRule {
  Eigen::ArrayXd x, y, w;
};

DiskRule disk_rule(double radius, int order) {
  const QuadratureRule radial = gauss_legendre(order, 0.0, radius);
  const QuadratureRule angular = gauss_legendre(order, 0.0, 2.0 * std::numbers::pi);
  DiskRule rule{Eigen::ArrayXd(order * order), Eigen::ArrayXd(order * order),
                Eigen::ArrayXd(order * order)};
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      const int k = i * order + j;
      const double rho = radial.nodes[i];
      rule.x[k] = rho * std::cos(angular.nodes[j]);
      rule.y[k] = rho * std::sin(angular.nodes[j]);
      rule.w[k] = radial.weights[i] * angular.weights[j] * rho;  // polar Jacobian
    }
  }
  return rule;
}

Complex integrate(const DiskRule& rule, double k, const Eigen::Vector3d& r) {
  const double z = r.z();
  double re = 0.0;
  double im = 0.0;
  for (Eigen::Index n = 0; n < rule.w.size(); ++n) {
    const double dx = r.x() - rule.x[n];
    const double dy = r.y() - rule.y[n];
    const double d2 = dx * dx + dy * dy + z * z;
    const double d = std::sqrt(d2);
    // e^{ikd}/d * z/d * (1/d - ik)
    const double amp = rule.w[n] * z / (d2 * d);
    const double c = std::cos(k * d);
    const double s = std::sin(k * d);
    re += amp * (c + k * d * s);
    im += amp * (s - k * d * c);
  }
  return Complex(re, im) / (2.0 * std::numbers::pi);
}

}  // namespace

void validate(const ApertureSpec& spec) {
  if (!(spec.radius > 0.0)) throw InvalidParameter("aperture radius must be positive");
  if (!(spec.wavelength > 0.0)) throw InvalidParameter("trap wavelength must be positive");
  if (spec.quadrature_order < 16) throw InvalidParameter("quadrature_order must be >= 16");
}

Complex nffd_relative_field(const ApertureSpec& spec, const Eigen::Vector3d& r) {
  validate(spec);
  if (!(r.z() > 0.0)) throw SingularKernel("field requested on or below the aperture plane");
  return integrate(disk_rule(spec.radius, spec.quadrature_order),
                   2.0 * std::numbers::pi / spec.wavelength, r);
}

RealField NFFDField::potential() const {
  return RealField(grid, -depth * relative.abs2());
}

NFFDField nffd_field(const ApertureSpec& spec, const Grid& grid) {
  validate(spec);
  const double k = 2.0 * std::numbers::pi / spec.wavelength;
  const Eigen::ArrayXd xs = grid.coordinate_values(Coordinate::x);
  const Eigen::ArrayXd ys = grid.coordinate_values(Coordinate::y);
  const Eigen::ArrayXd zs = grid.coordinate_values(Coordinate::z);
  if ((zs <= 0.0).any()) throw SingularKernel("grid touches the aperture plane z = 0");

  // Distinct (rho, z) pairs, keyed at 1e-12 resolution so mirrored points share.
  std::map<std::pair<long long, long long>, Eigen::Index> index_of;
  std::vector<Eigen::Vector3d> points;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(grid.size()));
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double rho = std::hypot(xs[i], ys[i]);
    const std::pair<long long, long long> key{std::llround(rho * 1e12),
                                              std::llround(zs[i] * 1e12)};
    auto [it, inserted] = index_of.try_emplace(key, static_cast<Eigen::Index>(points.size()));
    if (inserted) points.emplace_back(rho, 0.0, zs[i]);
    slot[static_cast<std::size_t>(i)] = it->second;
  }

  const DiskRule rule = disk_rule(spec.radius, spec.quadrature_order);
  std::vector<Complex> unique(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) unique[p] = integrate(rule, k, points[p]);

  NFFDField out{grid, Eigen::ArrayXcd(grid.size()), spec.depth, 0.0};
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    out.relative[i] = unique[static_cast<std::size_t>(slot[static_cast<std::size_t>(i)])];
  }

  // Order-doubling check on a spread of sample points, weighted toward the
  // strongest field where the potential matters.
  const DiskRule fine = disk_rule(spec.radius, 2 * spec.quadrature_order);
  std::vector<std::size_t> samples;
  const std::size_t count = std::min<std::size_t>(points.size(), 9);
  for (std::size_t s = 0; s < count; ++s) samples.push_back(s * (points.size() - 1) / std::max<std::size_t>(count - 1, 1));
  const auto strongest = std::max_element(unique.begin(), unique.end(), [](Complex a, Complex b) {
    return std::norm(a) < std::norm(b);
  });
  samples.push_back(static_cast<std::size_t>(strongest - unique.begin()));
  double peak = 0.0;
  for (const Complex& v : unique) peak = std::max(peak, std::abs(v));
  for (std::size_t s : samples) {
    const Complex refined = integrate(fine, k, points[s]);
    const double scale = std::max(std::abs(refined), 1e-3 * peak);
    out.quadrature_delta = std::max(out.quadrature_delta, std::abs(refined - unique[s]) / scale);
  }
  return out;
}

double nffd_on_axis_minimum(const ApertureSpec& spec, double z_lo, double z_hi) {
  validate(spec);
  if (!(z_lo > 0.0) || !(z_hi > z_lo)) throw InvalidParameter("invalid on-axis search range");
  const DiskRule rule = disk_rule(spec.radius, spec.quadrature_order);
  const double k = 2.0 * std::numbers::pi / spec.wavelength;
  auto intensity = [&](double z) { return std::norm(integrate(rule, k, {0.0, 0.0, z})); };

  constexpr int scan = 400;
  double best_z = z_lo;
  double best = -1.0;
  for (int i = 0; i <= scan; ++i) {
    const double z = z_lo + (z_hi - z_lo) * i / scan;
    const double v = intensity(z);
    if (v > best) {
      best = v;
      best_z = z;
    }
  }
  const double h = (z_hi - z_lo) / scan;
  double a = std::max(z_lo, best_z - h);
  double b = std::min(z_hi, best_z + h);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = intensity(c);
  double fd = intensity(d);
  while (b - a > 1e-10) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = intensity(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = intensity(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace atomgate
