#pragma once

#include <Eigen/Core>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "atomgate/lattice.hpp"
#include "atomgate/nffd.hpp"
#include "atomgate/propagator.hpp"
#include "atomgate/units.hpp"

namespace atomgate {

/// Trap and lattice in scaled units, ready for the step simulations.
struct ModelParams {
  ApertureSpec aperture;
  LatticeSpec lattice;
};

/// Converts dimensional inputs. An unset trap minimum is located on the
/// diffracted field's axis so the lattice sits on the trap.
ModelParams scaled_model(const PhysicalParams& params, int quadrature_order = 64);

/// (x, z) slice at y = 0 for dim 2; z alone for dim 1; full box for dim 3.
Grid default_step1_grid(const LatticeSpec& lattice, int dim = 2, Eigen::Index points = 0);
/// x line at (y, z) = (0, z_m) for dim 1; adds z, then y, for dim 2, 3.
Grid default_transport_grid(const LatticeSpec& lattice, int dim = 1, Eigen::Index points = 0);

/// Replace V by its maximum outside |x - center| <= half_width, isolating one
/// lattice well so relaxation cannot spread over degenerate sites.
RealField isolate_well(const RealField& potential, double center, double half_width);

struct StepResult {
  std::string step;
  std::vector<TracePoint> trace;
  double fidelity = 0.0;
  double duration = 0.0;  // scaled time
  std::map<std::string, double> parameters;
};

/// Step 1 (and its inverse, Step 5): near-field trap ramped under a static
/// lattice.
class Step1Scenario {
 public:
  Step1Scenario(const ModelParams& model, const Grid& grid, const GroundStateConfig& ground = {},
                const PropagatorConfig& prop = {});

  /// Switch-off over `duration`; `switch_on` runs the inverse ramp starting
  /// in the lattice ground state. duration 0 is the sudden limit.
  StepResult run(double duration, bool switch_on = false) const;

  /// |<lattice ground | combined ground>|^2.
  double static_overlap() const;

  const Wavefunction& combined_ground_state() const { return combined_.state; }
  const Wavefunction& lattice_ground_state() const { return lattice_only_.state; }
  const RealField& trap_potential() const { return trap_; }
  const RealField& lattice_field() const { return lattice_; }
  const NFFDField& trap_field() const { return field_; }

 private:
  ModelParams model_;
  PropagatorConfig prop_;
  NFFDField field_;
  RealField trap_;
  RealField lattice_;
  GroundState combined_;
  GroundState lattice_only_;
};

/// Step 2 (and its inverse, Step 4): one hyperfine component carried by the
/// state-dependent lattice, near-field trap off.
class TransportScenario {
 public:
  TransportScenario(const ModelParams& model, const Grid& grid, HyperfineState state, int n,
                    const GroundStateConfig& ground = {}, const PropagatorConfig& prop = {},
                    bool reversed = false);

  StepResult run(double duration) const;

  /// Signed displacement of the carried well, n lambda_OL / 2.
  double displacement() const;
  const Wavefunction& initial_state() const { return initial_.state; }
  const Wavefunction& target_state() const { return target_.state; }

 private:
  ModelParams model_;
  Grid grid_;
  HyperfineState state_;
  int n_;
  PropagatorConfig prop_;
  bool reversed_;
  GroundState initial_;
  GroundState target_;
};

/// A spectator atom held by its near-field trap while the lattice moves.
class SpectatorScenario {
 public:
  SpectatorScenario(const ModelParams& model, const Grid& grid, HyperfineState state, int n,
                    const GroundStateConfig& ground = {}, const PropagatorConfig& prop = {});

  /// Trace against the initial ground state over the transport leg.
  StepResult run(double duration) const;
  const Wavefunction& initial_state() const { return initial_.state; }

 private:
  ModelParams model_;
  Grid grid_;
  HyperfineState state_;
  int n_;
  PropagatorConfig prop_;
  RealField trap_;
  GroundState initial_;
};

/// Indices of local minima whose topographic prominence exceeds
/// `min_prominence`.
std::vector<std::size_t> find_dips(const std::vector<TracePoint>& trace, double min_prominence);

/// Number of strict local maxima in a sampled curve.
int count_local_maxima(const std::vector<double>& values);

// --- collisional phase -----------------------------------------------------

struct InteractionReport {
  double energy_over_recoil;  // E_int / E_r
  double frequency_hz;        // nu_int = E_int / h
  double hold_time;           // seconds, for the requested phase
};

/// t = phase / (2 pi nu). Throws InvalidParameter for nu <= 0.
double hold_time(double frequency_hz, double phase);

/// E_int/E_r = (2 a_s / pi lambda_OL) Int psi^4, Int psi^4 in lattice units.
InteractionReport interaction_from_quartic(double quartic, double scattering_over_wavelength,
                                           const ScaledUnits& units, double phase);

/// Requires a normalized 3-D state.
InteractionReport interaction_energy(const Wavefunction& psi, double scattering_over_wavelength,
                                     const ScaledUnits& units, double phase);

/// Separable product psi_x(x) psi_y(y) psi_z(z).
struct SeparableState {
  Wavefunction x;
  Wavefunction y;
  Wavefunction z;
};

InteractionReport interaction_energy(const SeparableState& psi, double scattering_over_wavelength,
                                     const ScaledUnits& units, double phase);

/// Ground state of one lattice well as a product of 1-D states: one lattice
/// period along x, the Gaussian envelope's well along y and z.
SeparableState lattice_well_separable(const LatticeSpec& lattice, const GroundStateConfig& cfg = {},
                                      Eigen::Index points = 256);

/// Full 3-D ground state of one lattice well: one period in x, +-extent in y, z.
Wavefunction lattice_well_3d(const LatticeSpec& lattice, const GroundStateConfig& cfg = {},
                             Eigen::Index x_points = 32, Eigen::Index yz_points = 64,
                             double extent = 2.5);

// --- gate and budget -------------------------------------------------------

using TwoQubitGate = Eigen::Matrix4cd;

/// diag(1, e^{i phase}, 1, 1) on |00>, |01>, |10>, |11>.
TwoQubitGate gate_unitary(double phase);

struct GateBudget {
  double total_time;
  double fidelity;
};

/// T = 2 (T_F + T_OL) + t_hold; F = f^8 (four ramp/transport steps, two atoms).
GateBudget aggregate_budget(double ramp_time, double transport_time, double hold, double per_process);

/// Smallest fidelity among the achieved step results.
double per_process_fidelity(const std::vector<StepResult>& steps);

struct ArrayCapacity {
  double rayleigh_length;
  double usable_length;
  long qubit_count;
};

/// x_R = pi w^2 / lambda, usable span 2 x_R, floor(usable / pitch) + 1 sites.
ArrayCapacity array_capacity(double waist, double wavelength, double site_pitch);

// --- time search -----------------------------------------------------------

struct MinTimeOptions {
  double scan_step = 0.5;
  double tolerance = 1e-3;
  /// Accept a crossing only if the next scan point also meets the target.
  bool require_persistence = true;
};

struct MinTimeResult {
  double time;
  double fidelity;
  std::vector<std::pair<double, double>> samples;  // every evaluation, in call order
};

/// Coarse scan over [lo, hi] then bisection on the first upward crossing.
/// Throws NotFound carrying the best fidelity seen.
MinTimeResult find_min_time(const std::function<double(double)>& fidelity, double target, double lo,
                            double hi, const MinTimeOptions& options = {});

}  // namespace atomgate
