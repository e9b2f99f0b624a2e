#include "atomgate/lattice.hpp"

#include <cmath>
#include <numbers>

namespace atomgate {

namespace {

// Electron-spin amplitudes of |F=1,mF=1> and |F=2,mF=1> on
// |I=3/2,1/2>|S=1/2,+1/2> and |I=3/2,3/2>|S=1/2,-1/2>.
constexpr double kHalf = 0.5;
const double kRoot3Half = std::sqrt(3.0) / 2.0;

}  // namespace

double LatticeSpec::wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }

void validate(const LatticeSpec& spec) {
  if (!(spec.depth >= 0.0)) throw InvalidParameter("lattice depth must be non-negative");
  if (!(spec.wavelength > 0.0)) throw InvalidParameter("lattice wavelength must be positive");
  if (!(spec.waist > 0.0)) throw InvalidParameter("lattice waist must be positive");
}

double lattice_envelope(const LatticeSpec& spec, const Eigen::Vector3d& r) {
  const double dz = r.z() - spec.center_z;
  return std::exp(-2.0 * (r.y() * r.y() + dz * dz) / (spec.waist * spec.waist));
}

RealField lattice_potential(const LatticeSpec& spec, const Grid& grid) {
  validate(spec);
  const double k = spec.wavenumber();
  return sample(grid, [&](const Eigen::Vector3d& r) {
    const double c = std::cos(k * r.x());
    return -spec.depth * c * c * lattice_envelope(spec, r);
  });
}

PolarizationWeights polarization_weights(HyperfineState state) {
  if (state == HyperfineState::zero) {
    return {kHalf * kHalf, kRoot3Half * kRoot3Half};
  }
  return {kRoot3Half * kRoot3Half, kHalf * kHalf};
}

StatePotentials state_potentials(const LatticeSpec& spec, double theta, const Grid& grid) {
  validate(spec);
  const double k = spec.wavenumber();
  Eigen::ArrayXd plus(grid.size());
  Eigen::ArrayXd minus(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Eigen::Vector3d r = grid.position(i);
    const double env = spec.depth * lattice_envelope(spec, r);
    const double cp = std::cos(k * r.x() - theta);
    const double cm = std::cos(k * r.x() + theta);
    plus[i] = -env * cp * cp;
    minus[i] = -env * cm * cm;
  }
  const PolarizationWeights w0 = polarization_weights(HyperfineState::zero);
  const PolarizationWeights w1 = polarization_weights(HyperfineState::one);
  RealField s0(grid, w0.plus * plus + w0.minus * minus);
  RealField s1(grid, w1.plus * plus + w1.minus * minus);
  return {RealField(grid, plus), RealField(grid, minus), std::move(s0), std::move(s1)};
}

RealField state_potential(const LatticeSpec& spec, HyperfineState state, double theta,
                          const Grid& grid) {
  StatePotentials all = state_potentials(spec, theta, grid);
  return state == HyperfineState::zero ? std::move(all.state0) : std::move(all.state1);
}

}  // namespace atomgate
