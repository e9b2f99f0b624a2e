#include "atomgate/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace atomgate {

namespace {

Eigen::ArrayXd absorber_mask(const Grid& grid, double fraction) {
  Eigen::ArrayXd mask = Eigen::ArrayXd::Ones(grid.size());
  for (const Axis& a : grid.axes()) {
    const Eigen::ArrayXd u = grid.coordinate_values(a.coordinate);
    const double width = fraction * a.length();
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double s = std::min(u[i] - a.min, a.max - u[i]);
      if (s < width) {
        const double c = std::cos(0.5 * std::numbers::pi * (width - s) / width);
        mask[i] *= std::pow(std::max(c, 0.0), 0.125);
      }
    }
  }
  return mask;
}

// Initial guess: Gaussian at the potential minimum with the width of the
// local harmonic approximation along each axis.
Eigen::ArrayXcd harmonic_guess(const RealField& potential, const GroundStateConfig& cfg) {
  const Grid& grid = potential.grid();
  Eigen::Index at = 0;
  if (cfg.center) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double d = (grid.position(i) - *cfg.center).squaredNorm();
      if (d < best) {
        best = d;
        at = i;
      }
    }
  } else {
    potential.values().minCoeff(&at);
  }
  const auto idx = grid.unflatten(at);
  const Eigen::Vector3d r0 = cfg.center ? *cfg.center : grid.position(at);

  Eigen::ArrayXd exponent = Eigen::ArrayXd::Zero(grid.size());
  Eigen::Index stride = grid.size();
  for (int d = 0; d < grid.dimension(); ++d) {
    const Axis& a = grid.axis(d);
    stride /= a.points;
    const Eigen::Index i = idx[static_cast<std::size_t>(d)];
    const Eigen::Index up = at + (i + 1 < a.points ? stride : -i * stride);
    const Eigen::Index dn = at + (i > 0 ? -stride : (a.points - 1) * stride);
    const double h = a.spacing();
    const double curvature =
        (potential[up] + potential[dn] - 2.0 * potential[at]) / (h * h);
    double alpha = curvature > 0.0 ? std::sqrt(curvature / (2.0 * cfg.kinetic_coefficient))
                                   : 1.0 / std::pow(0.1 * a.length(), 2);
    alpha = std::min(alpha, 1.0 / (h * h));
    const Eigen::ArrayXd u = grid.coordinate_values(a.coordinate);
    const double c = r0[static_cast<int>(a.coordinate)];
    exponent += -0.5 * alpha * (u - c).square();
  }
  return exponent.exp().cast<Complex>();
}

}  // namespace

SplitStepper::SplitStepper(const Grid& grid, double kinetic_coefficient)
    : grid_(grid),
      kinetic_(kinetic_coefficient),
      fft_(grid),
      k2_(squared_wavenumbers(grid)),
      scratch_(grid.size()) {
  if (!(kinetic_coefficient > 0.0)) throw InvalidParameter("kinetic coefficient must be positive");
}

void SplitStepper::kick(const Eigen::ArrayXd& potential, double h) {
  Eigen::ArrayXcd& psi = fft_.buffer();
  for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] *= std::polar(1.0, -h * potential[i]);
}

void SplitStepper::kick_imaginary(const Eigen::ArrayXd& potential, double h) {
  fft_.buffer() *= (-h * potential).exp();
}

void SplitStepper::drift(double h) {
  const double inv_n = 1.0 / static_cast<double>(grid_.size());
  fft_.forward();
  Eigen::ArrayXcd& psi = fft_.buffer();
  for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] *= std::polar(inv_n, -h * kinetic_ * k2_[i]);
  fft_.backward();
}

void SplitStepper::drift_imaginary(double h) {
  const double inv_n = 1.0 / static_cast<double>(grid_.size());
  fft_.forward();
  fft_.buffer() *= inv_n * (-h * kinetic_ * k2_).exp();
  fft_.backward();
}

void SplitStepper::step(const Eigen::ArrayXd& potential, double h) {
  kick(potential, 0.5 * h);
  drift(h);
  kick(potential, 0.5 * h);
}

double SplitStepper::energy(const Eigen::ArrayXcd& psi, const Eigen::ArrayXd& potential) {
  // psi may alias the transform buffer; work on a copy and restore.
  const Eigen::ArrayXcd input = psi;
  scratch_ = fft_.buffer();
  fft_.buffer() = input;
  fft_.forward();
  const double n = static_cast<double>(grid_.size());
  const double weight = input.abs2().sum();
  const double kinetic = kinetic_ * (k2_ * fft_.buffer().abs2()).sum() / (n * weight);
  const double pot = (potential * input.abs2()).sum() / weight;
  fft_.buffer() = scratch_;
  return kinetic + pot;
}

double SplitStepper::residual(const Eigen::ArrayXcd& psi, const Eigen::ArrayXd& potential) {
  const Eigen::ArrayXcd input = psi;
  const double e = energy(input, potential);
  scratch_ = fft_.buffer();
  fft_.buffer() = input;
  fft_.forward();
  fft_.buffer() *= k2_ * (kinetic_ / static_cast<double>(grid_.size()));
  fft_.backward();
  const Eigen::ArrayXcd h_psi = fft_.buffer() + potential * input;
  fft_.buffer() = scratch_;
  return std::sqrt((h_psi - e * input).abs2().sum() * grid_.cell_volume());
}

double energy(const Wavefunction& psi, const RealField& potential, double kinetic_coefficient) {
  require_same_grid(psi.grid(), potential.grid());
  SplitStepper stepper(psi.grid(), kinetic_coefficient);
  return stepper.energy(psi.values(), potential.values());
}

GroundState ground_state(const RealField& potential, const GroundStateConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw InvalidParameter("imaginary time step must be positive");
  if (!potential.values().allFinite()) throw InvalidParameter("potential must be finite");
  const Grid& grid = potential.grid();
  SplitStepper stepper(grid, cfg.kinetic_coefficient);
  const Eigen::ArrayXd& v = potential.values();
  const double volume = grid.cell_volume();
  auto renormalize = [&] {
    Eigen::ArrayXcd& psi = stepper.state();
    psi /= std::sqrt(psi.abs2().sum() * volume);
  };

  stepper.state() = harmonic_guess(potential, cfg);
  renormalize();

  long iterations = 0;
  double e_prev = stepper.energy(stepper.state(), v);
  const int interval = std::max(cfg.check_interval, 1);
  const std::vector<std::pair<double, double>> stages = {
      {cfg.dt * std::max(cfg.warmup_factor, 1.0), cfg.energy_tol * 1e3},
      {cfg.dt, cfg.energy_tol}};
  for (const auto& [h, tol] : stages) {
    bool converged = false;
    while (!converged) {
      for (int s = 0; s < interval; ++s) {
        stepper.kick_imaginary(v, 0.5 * h);
        stepper.drift_imaginary(h);
        stepper.kick_imaginary(v, 0.5 * h);
        renormalize();
      }
      iterations += interval;
      const double e = stepper.energy(stepper.state(), v);
      converged = std::abs(e_prev - e) / interval < tol;
      e_prev = e;
      if (iterations > cfg.max_iters) {
        const double r = stepper.residual(stepper.state(), v);
        std::ostringstream msg;
        msg << "imaginary-time relaxation did not converge in " << cfg.max_iters
            << " iterations (residual " << r << ")";
        throw ConvergenceError(msg.str(), r);
      }
    }
  }
  Wavefunction psi(grid, stepper.state());
  const double r = stepper.residual(psi.values(), v);
  return {std::move(psi), e_prev, r, iterations};
}

EvolutionResult propagate(const Wavefunction& psi0, const TimeDependentPotential& potential,
                          double duration, const PropagatorConfig& cfg,
                          const Wavefunction* reference) {
  require_same_grid(psi0.grid(), potential.grid());
  if (reference) require_same_grid(psi0.grid(), reference->grid());
  if (!(cfg.dt > 0.0)) throw InvalidParameter("time step must be positive");
  if (duration < 0.0) throw InvalidParameter("duration must be non-negative");
  const Grid& grid = psi0.grid();
  const double volume = grid.cell_volume();
  const double norm0 = norm_squared(psi0);
  const long steps = duration > 0.0 ? std::max(1L, std::lround(std::ceil(duration / cfg.dt - 1e-9))) : 0;
  const double h = steps > 0 ? duration / static_cast<double>(steps) : 0.0;
  const int stride = std::max(cfg.trace_stride, 1);

  SplitStepper stepper(grid, cfg.kinetic_coefficient);
  Eigen::ArrayXcd& psi = stepper.state();
  psi = psi0.values();

  EvolutionResult result{psi0, {}, 0.0, steps};
  auto record = [&](double t) {
    if (!reference) return;
    const Complex c = (reference->values().conjugate() * psi).sum() * volume;
    result.trace.push_back({t, std::norm(c)});
  };
  record(0.0);

  Eigen::ArrayXd mask;
  if (cfg.absorber_fraction > 0.0) mask = absorber_mask(grid, cfg.absorber_fraction);

  const bool fixed = potential.is_static();
  Eigen::ArrayXd v_cur;
  Eigen::ArrayXd v_next;
  potential.evaluate_into(0.5 * h, v_cur);
  if (steps > 0) stepper.kick(v_cur, 0.5 * h);
  for (long n = 0; n < steps; ++n) {
    stepper.drift(h);
    const bool last = n + 1 == steps;
    const bool sample = last || (n + 1) % stride == 0;
    if (!last && !fixed) potential.evaluate_into((static_cast<double>(n) + 1.5) * h, v_next);
    const Eigen::ArrayXd& after = fixed ? v_cur : v_next;
    if (sample) {
      stepper.kick(v_cur, 0.5 * h);
      if (mask.size()) psi *= mask;
      record(static_cast<double>(n + 1) * h);
      if (!last) stepper.kick(after, 0.5 * h);
    } else if (fixed) {
      stepper.kick(v_cur, h);
      if (mask.size()) psi *= mask;
    } else {
      // Merge the closing half-kick of this step with the opening one of the next.
      v_cur = 0.5 * (v_cur + v_next);
      stepper.kick(v_cur, h);
      if (mask.size()) psi *= mask;
    }
    if (!fixed) v_cur.swap(v_next);
  }

  result.final_state = Wavefunction(grid, psi);
  result.norm_drift = std::abs(psi.abs2().sum() * volume - norm0);
  if (cfg.absorber_fraction <= 0.0 && result.norm_drift > cfg.instability_threshold) {
    std::ostringstream msg;
    msg << "norm drift " << result.norm_drift << " exceeds " << cfg.instability_threshold
        << "; reduce dt";
    throw InstabilityError(msg.str(), result.norm_drift);
  }
  return result;
}

ConvergenceReport convergence_check(const std::function<double(double, int)>& run, double dt,
                                    bool refine_grid, double threshold) {
  ConvergenceReport report;
  report.threshold = threshold;
  report.fidelity = run(dt, 1);
  report.fidelity_half_dt = run(0.5 * dt, 1);
  report.dt_delta = std::abs(report.fidelity - report.fidelity_half_dt);
  double worst = report.dt_delta;
  if (refine_grid) {
    report.grid_delta = std::abs(report.fidelity - run(dt, 2));
    worst = std::max(worst, *report.grid_delta);
  }
  report.passed = worst < threshold;
  return report;
}

}  // namespace atomgate
