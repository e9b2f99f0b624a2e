#include "atomgate/time_potential.hpp"

#include <cmath>

namespace atomgate {

TimeDependentPotential::TimeDependentPotential(Grid grid, std::vector<PotentialTerm> terms)
    : grid_(std::move(grid)), terms_(std::move(terms)) {
  for (const PotentialTerm& t : terms_) require_same_grid(grid_, t.field.grid());
}

bool TimeDependentPotential::is_static() const {
  for (const PotentialTerm& t : terms_) {
    if (t.law) return false;
  }
  return true;
}

RealField TimeDependentPotential::operator()(double t) const {
  Eigen::ArrayXd v;
  evaluate_into(t, v);
  return RealField(grid_, std::move(v));
}

void TimeDependentPotential::evaluate_into(double t, Eigen::ArrayXd& out) const {
  out.setZero(grid_.size());
  for (const PotentialTerm& term : terms_) {
    const double g = term.law ? term.law(t) : 1.0;
    if (g != 0.0) out += g * term.field.values();
  }
}

TimeDependentPotential compose(const Grid& grid, std::vector<PotentialTerm> terms) {
  return TimeDependentPotential(grid, std::move(terms));
}

PotentialTerm constant_term(RealField field) { return {std::move(field), {}}; }

PotentialTerm ramp_term(RealField field, RampSchedule ramp) {
  return {std::move(field), [ramp](double t) { return ramp(t); }};
}

std::vector<PotentialTerm> moving_state_lattice(const LatticeSpec& spec, HyperfineState state,
                                                std::function<double(double)> theta,
                                                const Grid& grid) {
  validate(spec);
  const PolarizationWeights w = polarization_weights(state);
  const double k2 = 2.0 * spec.wavenumber();
  Eigen::ArrayXd base(grid.size());
  Eigen::ArrayXd cos_part(grid.size());
  Eigen::ArrayXd sin_part(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Eigen::Vector3d r = grid.position(i);
    const double env = -0.5 * spec.depth * lattice_envelope(spec, r);
    base[i] = env;
    cos_part[i] = env * std::cos(k2 * r.x());
    sin_part[i] = env * std::sin(k2 * r.x());
  }
  const double sum = w.plus + w.minus;
  const double diff = w.plus - w.minus;
  std::vector<PotentialTerm> terms;
  terms.push_back({RealField(grid, sum * base), {}});
  terms.push_back({RealField(grid, std::move(cos_part)),
                   [theta, sum](double t) { return sum * std::cos(2.0 * theta(t)); }});
  terms.push_back({RealField(grid, std::move(sin_part)),
                   [theta, diff](double t) { return diff * std::sin(2.0 * theta(t)); }});
  return terms;
}

}  // namespace atomgate
