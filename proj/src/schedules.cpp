#include "atomgate/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "atomgate/errors.hpp"

namespace atomgate {

namespace {

// Accept t a hair outside [0, T] from accumulated midpoint arithmetic.
double clamp_time(double duration, double t) {
  if (!(duration > 0.0)) throw InvalidParameter("schedule duration must be positive");
  const double slack = 1e-12 * duration;
  if (t < -slack || t > duration + slack) {
    throw RangeError("schedule evaluated outside [0, T]");
  }
  return std::min(std::max(t, 0.0), duration);
}

}  // namespace

double theta_schedule(int n, double duration, double t) {
  t = clamp_time(duration, t);
  const double s = std::sin(std::numbers::pi * t / (2.0 * duration));
  return n * std::numbers::pi * s * s;
}

double ramp_multiplier(double duration, double t) {
  t = clamp_time(duration, t);
  const double c = std::cos(std::numbers::pi * t / (2.0 * duration));
  return c * c;
}

double ThetaSchedule::operator()(double t) const {
  return reversed ? theta_schedule(n, duration, duration - clamp_time(duration, t))
                  : theta_schedule(n, duration, t);
}

double ThetaSchedule::final_angle() const { return reversed ? 0.0 : n * std::numbers::pi; }

double RampSchedule::operator()(double t) const {
  return reversed ? ramp_multiplier(duration, duration - clamp_time(duration, t))
                  : ramp_multiplier(duration, t);
}

}  // namespace atomgate
