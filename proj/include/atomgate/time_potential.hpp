#pragma once

#include <functional>
#include <vector>

#include "atomgate/field.hpp"
#include "atomgate/lattice.hpp"
#include "atomgate/schedules.hpp"

namespace atomgate {

/// A fixed spatial field scaled by a time law.
struct PotentialTerm {
  RealField field;
  std::function<double(double)> law;  // empty means constant 1
};

/// V(r, t) = sum_i field_i(r) * law_i(t). Immutable; evaluation is pure.
class TimeDependentPotential {
 public:
  explicit TimeDependentPotential(Grid grid, std::vector<PotentialTerm> terms = {});

  const Grid& grid() const { return grid_; }
  const std::vector<PotentialTerm>& terms() const { return terms_; }
  bool is_static() const;

  RealField operator()(double t) const;
  /// Writes V(., t) into `out` (resized as needed).
  void evaluate_into(double t, Eigen::ArrayXd& out) const;

 private:
  Grid grid_;
  std::vector<PotentialTerm> terms_;
};

/// Throws IncompatibleGrid if a term's field is not on `grid`.
TimeDependentPotential compose(const Grid& grid, std::vector<PotentialTerm> terms);

PotentialTerm constant_term(RealField field);
PotentialTerm ramp_term(RealField field, RampSchedule ramp);

/// The state-dependent lattice moved by a polarization angle law, as three
/// fixed fields with theta-dependent weights: the exact trig expansion of
/// -V0 env [w+ cos^2(kx - theta) + w- cos^2(kx + theta)].
std::vector<PotentialTerm> moving_state_lattice(const LatticeSpec& spec, HyperfineState state,
                                                std::function<double(double)> theta,
                                                const Grid& grid);

}  // namespace atomgate
