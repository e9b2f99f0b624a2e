#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "atomgate/fft.hpp"
#include "atomgate/field.hpp"
#include "atomgate/time_potential.hpp"
#include "atomgate/units.hpp"

namespace atomgate {

/// Real-time Strang splitting e^{-iV dt/2} e^{-iT dt} e^{-iV dt/2}, kinetic
/// factor applied in Fourier space, V sampled at each interval midpoint.
struct PropagatorConfig {
  double dt = 2e-3;
  int trace_stride = 50;
  /// hbar^2/2m in the working units; H = -kinetic * laplacian + V.
  double kinetic_coefficient = recoil_kinetic_coefficient;
  /// Width of a cos^{1/8} edge absorber as a fraction of each axis; 0 disables.
  double absorber_fraction = 0.0;
  double instability_threshold = 1e-8;
};

/// Imaginary-time relaxation through the same splitting, renormalized
/// every step. A short coarse stage at `warmup_factor * dt` precedes the
/// final stage.
struct GroundStateConfig {
  double dt = 1e-3;
  double energy_tol = 1e-10;  // per-step energy change at convergence
  long max_iters = 1'000'000;
  double kinetic_coefficient = recoil_kinetic_coefficient;
  int check_interval = 25;
  double warmup_factor = 10.0;
  /// Centre of the initial Gaussian; the potential minimum when unset.
  std::optional<Eigen::Vector3d> center;
};

struct GroundState {
  Wavefunction state;
  double energy;
  double residual;  // ||H psi - E psi||
  long iterations;
};

struct TracePoint {
  double t;
  double fidelity;
};

struct EvolutionResult {
  Wavefunction final_state;
  std::vector<TracePoint> trace;
  double norm_drift;
  long steps;
};

/// Reusable split-step machinery for one grid: owns the transform, the
/// squared wavenumbers and scratch space.
class SplitStepper {
 public:
  SplitStepper(const Grid& grid, double kinetic_coefficient);

  const Grid& grid() const { return grid_; }
  Eigen::ArrayXcd& state() { return fft_.buffer(); }

  /// Multiply the state by e^{-i V h} (real time) in place.
  void kick(const Eigen::ArrayXd& potential, double h);
  /// Multiply the state by e^{-V h} (imaginary time) in place.
  void kick_imaginary(const Eigen::ArrayXd& potential, double h);
  /// Apply e^{-i T h}; h may be negative for backward stepping.
  void drift(double h);
  void drift_imaginary(double h);

  /// One full Strang step with a static potential.
  void step(const Eigen::ArrayXd& potential, double h);

  double energy(const Eigen::ArrayXcd& psi, const Eigen::ArrayXd& potential);
  /// ||H psi - <H> psi|| for normalized psi on this grid.
  double residual(const Eigen::ArrayXcd& psi, const Eigen::ArrayXd& potential);

 private:
  Grid grid_;
  double kinetic_;
  FourierTransform fft_;
  Eigen::ArrayXd k2_;
  Eigen::ArrayXcd scratch_;
};

double energy(const Wavefunction& psi, const RealField& potential, double kinetic_coefficient);

/// Throws ConvergenceError (carrying the residual) past max_iters.
GroundState ground_state(const RealField& potential, const GroundStateConfig& cfg = {});

/// Evolve psi0 for time T under V(t). Throws InstabilityError on norm drift
/// above the config threshold.
EvolutionResult propagate(const Wavefunction& psi0, const TimeDependentPotential& potential,
                          double duration, const PropagatorConfig& cfg = {},
                          const Wavefunction* reference = nullptr);

struct ConvergenceReport {
  double fidelity = 0.0;
  double fidelity_half_dt = 0.0;
  double dt_delta = 0.0;
  std::optional<double> grid_delta;
  double threshold = 1e-4;
  bool passed = false;
};

/// `run(dt, refinement)` returns a fidelity; compares dt against dt/2 and,
/// when requested, the grid against a `2x` refinement.
ConvergenceReport convergence_check(const std::function<double(double, int)>& run, double dt,
                                    bool refine_grid = false, double threshold = 1e-4);

}  // namespace atomgate
