#include "atomgate/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "atomgate/schedules.hpp"
#include "atomgate/time_potential.hpp"

namespace atomgate {

namespace {

Axis axis(Coordinate c, double lo, double hi, Eigen::Index n) { return Axis{c, lo, hi, n}; }

GroundStateConfig centered(GroundStateConfig cfg, const Eigen::Vector3d& at) {
  cfg.center = at;
  return cfg;
}

StepResult make_result(std::string id, EvolutionResult&& evo, double duration) {
  StepResult r;
  r.step = std::move(id);
  r.trace = std::move(evo.trace);
  r.fidelity = r.trace.empty() ? 0.0 : std::clamp(r.trace.back().fidelity, 0.0, 1.0);
  r.duration = duration;
  r.parameters["norm_drift"] = evo.norm_drift;
  r.parameters["steps"] = static_cast<double>(evo.steps);
  return r;
}

}  // namespace

ModelParams scaled_model(const PhysicalParams& params, int quadrature_order) {
  validate(params);
  const ScaledUnits units = derive_scaled_units(params);
  ModelParams m;
  m.aperture.radius = units.length_to_scaled(params.aperture_radius);
  m.aperture.wavelength = units.length_to_scaled(params.trap_wavelength);
  m.aperture.depth = units.depth_to_scaled(params.trap_depth);
  m.aperture.quadrature_order = quadrature_order;
  validate(m.aperture);
  m.lattice.depth = units.depth_to_scaled(params.lattice_depth);
  m.lattice.wavelength = 1.0;
  m.lattice.waist = units.length_to_scaled(params.waist);
  m.lattice.center_z = params.trap_minimum ? units.length_to_scaled(*params.trap_minimum)
                                           : nffd_on_axis_minimum(m.aperture);
  return m;
}

Grid default_step1_grid(const LatticeSpec& lattice, int dim, Eigen::Index points) {
  const double zm = lattice.center_z;
  const double z_lo = std::max(0.2, zm - 2.0);
  const double z_hi = zm + 2.4;
  const Eigen::Vector3d anchor(0.0, 0.0, zm);
  switch (dim) {
    case 1:
      return Grid({axis(Coordinate::z, z_lo, z_hi, points ? points : 128)}, anchor);
    case 2:
      return Grid({axis(Coordinate::x, -1.0, 1.0, points ? points : 64),
                   axis(Coordinate::z, z_lo, z_hi, points ? points : 128)},
                  anchor);
    case 3:
      return Grid({axis(Coordinate::x, -1.0, 1.0, points ? points : 64),
                   axis(Coordinate::y, -2.2, 2.2, points ? points : 128),
                   axis(Coordinate::z, z_lo, z_hi, points ? points : 128)},
                  anchor);
    default:
      throw InvalidParameter("dimension must be 1, 2 or 3");
  }
}

Grid default_transport_grid(const LatticeSpec& lattice, int dim, Eigen::Index points) {
  const double zm = lattice.center_z;
  const Eigen::Vector3d anchor(0.0, 0.0, zm);
  const Axis x = axis(Coordinate::x, -8.0, 8.0, points ? points : 2048);
  const Axis z = axis(Coordinate::z, std::max(0.2, zm - 2.2), zm + 2.2, points ? points : 128);
  const Axis y = axis(Coordinate::y, -2.2, 2.2, points ? points : 128);
  switch (dim) {
    case 1:
      return Grid({x}, anchor);
    case 2:
      return Grid({x, z}, anchor);
    case 3:
      return Grid({x, y, z}, anchor);
    default:
      throw InvalidParameter("dimension must be 1, 2 or 3");
  }
}

RealField isolate_well(const RealField& potential, double center, double half_width) {
  if (potential.grid().axis_index(Coordinate::x) < 0) return potential;
  const Eigen::ArrayXd x = potential.grid().coordinate_values(Coordinate::x);
  const double top = potential.values().maxCoeff();
  return potential.with_values(((x - center).abs() <= half_width).select(potential.values(), top));
}

// --- Step 1 / 5 --------------------------------------------------------------

Step1Scenario::Step1Scenario(const ModelParams& model, const Grid& grid,
                             const GroundStateConfig& ground, const PropagatorConfig& prop)
    : model_(model),
      prop_(prop),
      field_(nffd_field(model.aperture, grid)),
      trap_(field_.potential()),
      lattice_(lattice_potential(model.lattice, grid)),
      combined_(ground_state(trap_ + lattice_,
                             centered(ground, {0.0, 0.0, model.lattice.center_z}))),
      lattice_only_(ground_state(isolate_well(lattice_, 0.0, 0.5 * model.lattice.lattice_constant()),
                                 centered(ground, {0.0, 0.0, model.lattice.center_z}))) {}

double Step1Scenario::static_overlap() const {
  return overlap_fidelity(combined_.state, lattice_only_.state);
}

StepResult Step1Scenario::run(double duration, bool switch_on) const {
  const std::string id = switch_on ? "5" : "1";
  if (duration < 0.0) throw InvalidParameter("ramp time must be non-negative");
  const Wavefunction& start = switch_on ? lattice_only_.state : combined_.state;
  const Wavefunction& target = switch_on ? combined_.state : lattice_only_.state;
  if (duration == 0.0) {
    StepResult r;
    r.step = id;
    r.fidelity = overlap_fidelity(start, target);
    r.trace = {{0.0, r.fidelity}};
    return r;
  }
  const TimeDependentPotential v =
      compose(trap_.grid(), {constant_term(lattice_), ramp_term(trap_, RampSchedule{duration, switch_on})});
  StepResult r = make_result(id, propagate(start, v, duration, prop_, &target), duration);
  r.parameters["T_F"] = duration;
  return r;
}

// --- Step 2 / 4 --------------------------------------------------------------

TransportScenario::TransportScenario(const ModelParams& model, const Grid& grid,
                                     HyperfineState state, int n, const GroundStateConfig& ground,
                                     const PropagatorConfig& prop, bool reversed)
    : model_(model),
      grid_(grid),
      state_(state),
      n_(n),
      prop_(prop),
      reversed_(reversed),
      initial_{Wavefunction::zero(grid), 0.0, 0.0, 0},
      target_{Wavefunction::zero(grid), 0.0, 0.0, 0} {
  if (n < 0) throw InvalidParameter("transport count n must be non-negative");
  const int xi = grid.axis_index(Coordinate::x);
  if (xi < 0) throw DomainError("transport needs an x axis");
  const Axis& ax = grid.axis(xi);
  const double d = displacement();
  const double margin = model.lattice.wavelength;
  if (std::min(0.0, d) - margin < ax.min || std::max(0.0, d) + margin > ax.max) {
    throw DomainError("transport distance exceeds the grid");
  }
  const RealField v0 = state_potential(model.lattice, state, 0.0, grid);
  const double half = 0.5 * model.lattice.lattice_constant();
  const double zm = model.lattice.center_z;
  const double from = reversed ? d : 0.0;
  const double to = reversed ? 0.0 : d;
  initial_ = ground_state(isolate_well(v0, from, half), centered(ground, {from, 0.0, zm}));
  target_ = ground_state(isolate_well(v0, to, half), centered(ground, {to, 0.0, zm}));
}

double TransportScenario::displacement() const {
  const double shift = n_ * model_.lattice.lattice_constant();
  return state_ == HyperfineState::one ? shift : -shift;
}

StepResult TransportScenario::run(double duration) const {
  if (!(duration > 0.0)) throw InvalidParameter("transport time must be positive");
  const ThetaSchedule theta{n_, duration, reversed_};
  const TimeDependentPotential v =
      compose(grid_, moving_state_lattice(model_.lattice, state_, theta, grid_));
  StepResult r = make_result(reversed_ ? "4" : "2",
                             propagate(initial_.state, v, duration, prop_, &target_.state), duration);
  r.parameters["T_OL"] = duration;
  r.parameters["n"] = n_;
  return r;
}

// --- spectator -----------------------------------------------------------------

SpectatorScenario::SpectatorScenario(const ModelParams& model, const Grid& grid,
                                     HyperfineState state, int n, const GroundStateConfig& ground,
                                     const PropagatorConfig& prop)
    : model_(model),
      grid_(grid),
      state_(state),
      n_(n),
      prop_(prop),
      trap_(nffd_field(model.aperture, grid).potential()),
      initial_(ground_state(trap_ + state_potential(model.lattice, state, 0.0, grid),
                            centered(ground, {0.0, 0.0, model.lattice.center_z}))) {
  if (n < 0) throw InvalidParameter("transport count n must be non-negative");
}

StepResult SpectatorScenario::run(double duration) const {
  if (!(duration > 0.0)) throw InvalidParameter("transport time must be positive");
  const ThetaSchedule theta{n_, duration, false};
  std::vector<PotentialTerm> terms = moving_state_lattice(model_.lattice, state_, theta, grid_);
  terms.push_back(constant_term(trap_));
  const TimeDependentPotential v = compose(grid_, std::move(terms));
  StepResult r = make_result("spectator",
                             propagate(initial_.state, v, duration, prop_, &initial_.state), duration);
  r.parameters["T_OL"] = duration;
  r.parameters["n"] = n_;
  return r;
}

std::vector<std::size_t> find_dips(const std::vector<TracePoint>& trace, double min_prominence) {
  std::vector<std::size_t> dips;
  const std::size_t n = trace.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double f = trace[i].fidelity;
    if (!(f < trace[i - 1].fidelity && f <= trace[i + 1].fidelity)) continue;
    double left = f;
    for (std::size_t j = i; j-- > 0;) {
      if (trace[j].fidelity < f) break;
      left = std::max(left, trace[j].fidelity);
    }
    double right = f;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (trace[j].fidelity < f) break;
      right = std::max(right, trace[j].fidelity);
    }
    if (std::min(left, right) - f > min_prominence) dips.push_back(i);
  }
  return dips;
}

int count_local_maxima(const std::vector<double>& values) {
  int count = 0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] > values[i + 1]) ++count;
  }
  return count;
}

// --- gate and budget -----------------------------------------------------------

TwoQubitGate gate_unitary(double phase) {
  TwoQubitGate u = TwoQubitGate::Identity();
  u(1, 1) = std::polar(1.0, phase);
  return u;
}

GateBudget aggregate_budget(double ramp_time, double transport_time, double hold, double per_process) {
  if (ramp_time < 0.0 || transport_time < 0.0 || hold < 0.0) {
    throw InvalidParameter("step times must be non-negative");
  }
  if (!(per_process >= 0.0 && per_process <= 1.0)) {
    throw InvalidParameter("per-process fidelity must lie in [0, 1]");
  }
  return {2.0 * (ramp_time + transport_time) + hold, std::pow(per_process, 8)};
}

double per_process_fidelity(const std::vector<StepResult>& steps) {
  if (steps.empty()) throw InvalidParameter("no step results to aggregate");
  double f = 1.0;
  for (const StepResult& s : steps) f = std::min(f, s.fidelity);
  return f;
}

ArrayCapacity array_capacity(double waist, double wavelength, double site_pitch) {
  if (!(waist > 0.0) || !(wavelength > 0.0) || !(site_pitch > 0.0)) {
    throw InvalidParameter("capacity inputs must be positive");
  }
  const double xr = std::numbers::pi * waist * waist / wavelength;
  const double usable = 2.0 * xr;
  // Sites at both ends of the span count.
  return {xr, usable, static_cast<long>(std::floor(usable / site_pitch)) + 1};
}

// --- time search ---------------------------------------------------------------

MinTimeResult find_min_time(const std::function<double(double)>& fidelity, double target, double lo,
                            double hi, const MinTimeOptions& options) {
  if (!(hi > lo)) throw InvalidParameter("bracket must satisfy lo < hi");
  if (!(options.scan_step > 0.0)) throw InvalidParameter("scan step must be positive");
  MinTimeResult result{lo, 0.0, {}};
  auto eval = [&](double t) {
    const double f = fidelity(t);
    result.samples.emplace_back(t, f);
    return f;
  };

  std::vector<double> ts;
  const auto count = static_cast<long>(std::floor((hi - lo) / options.scan_step + 1e-9));
  for (long k = 0; k <= count; ++k) ts.push_back(lo + static_cast<double>(k) * options.scan_step);
  if (hi - ts.back() > 1e-9 * options.scan_step) ts.push_back(hi);

  std::vector<std::optional<double>> scanned(ts.size());
  double best = 0.0;
  auto at = [&](std::size_t k) {
    if (!scanned[k]) {
      scanned[k] = eval(ts[k]);
      best = std::max(best, *scanned[k]);
    }
    return *scanned[k];
  };

  if (at(0) >= target) {
    result.fidelity = at(0);
    return result;
  }
  for (std::size_t k = 1; k < ts.size(); ++k) {
    if (at(k) < target || at(k - 1) >= target) continue;
    if (options.require_persistence && k + 1 < ts.size() && at(k + 1) < target) continue;
    double a = ts[k - 1];
    double b = ts[k];
    double fb = at(k);
    while (b - a > options.tolerance) {
      const double m = 0.5 * (a + b);
      const double fm = eval(m);
      if (fm >= target) {
        b = m;
        fb = fm;
      } else {
        a = m;
      }
    }
    result.time = b;
    result.fidelity = fb;
    return result;
  }
  throw NotFound("fidelity target not reached in bracket", best);
}

}  // namespace atomgate
