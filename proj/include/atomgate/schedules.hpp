#pragma once

namespace atomgate {

/// theta(t) = n pi sin^2(pi t / 2 T_OL) on [0, T_OL].
double theta_schedule(int n, double duration, double t);

/// cos^2(pi t / 2 T_F) on [0, T_F].
double ramp_multiplier(double duration, double t);

/// Polarization-angle law for one transport leg. `reversed` runs the same
/// path from n pi back to 0.
struct ThetaSchedule {
  int n = 6;
  double duration = 29.7;
  bool reversed = false;

  double operator()(double t) const;
  double final_angle() const;
};

/// Switch-off of the near-field trap; `reversed` switches it back on.
struct RampSchedule {
  double duration = 42.5;
  bool reversed = false;

  double operator()(double t) const;
};

}  // namespace atomgate
