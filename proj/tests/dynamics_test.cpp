#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "atomgate/errors.hpp"
#include "atomgate/propagator.hpp"
#include "atomgate/time_potential.hpp"
#include "doctest.h"

using namespace atomgate;
using std::numbers::pi;

namespace {

// hbar = m = 1: H = -1/2 d^2/dx^2 + V.
constexpr double unit_kinetic = 0.5;

Grid line(double lo, double hi, Eigen::Index n) { return Grid({Axis{Coordinate::x, lo, hi, n}}); }

RealField harmonic(const Grid& g, double omega = 1.0) {
  return sample(g, [&](const Eigen::Vector3d& r) { return 0.5 * omega * omega * r.x() * r.x(); });
}

Wavefunction packet(const Grid& g, double x0, double sigma, double k0 = 0.0) {
  return normalize(sample_complex(g, [&](const Eigen::Vector3d& r) {
    return std::exp(-std::pow(r.x() - x0, 2) / (4.0 * sigma * sigma)) * std::polar(1.0, k0 * r.x());
  }));
}

PropagatorConfig unit_config(double dt, int stride = 100) {
  PropagatorConfig c;
  c.dt = dt;
  c.trace_stride = stride;
  c.kinetic_coefficient = unit_kinetic;
  return c;
}

GroundStateConfig unit_ground(double dt = 1e-3) {
  GroundStateConfig c;
  c.dt = dt;
  c.kinetic_coefficient = unit_kinetic;
  return c;
}

}  // namespace

TEST_CASE("norm is preserved to rounding over 10^4 steps") {
  const Grid g = line(-12.0, 12.0, 256);
  const RealField v = harmonic(g);
  const Wavefunction psi0 = packet(g, 1.5, 0.6, 2.0);
  const EvolutionResult r = propagate(psi0, compose(g, {constant_term(v)}), 10.0, unit_config(1e-3));
  CHECK(r.steps == 10000);
  CHECK(r.norm_drift < 1e-10);
}

TEST_CASE("energy is conserved for a static potential") {
  const Grid g = line(-12.0, 12.0, 256);
  const RealField v = harmonic(g);
  const Wavefunction psi0 = packet(g, 1.0, 0.8);
  const double e0 = energy(psi0, v, unit_kinetic);
  const EvolutionResult r = propagate(psi0, compose(g, {constant_term(v)}), 10.0, unit_config(1e-3));
  CHECK(std::abs(energy(r.final_state, v, unit_kinetic) - e0) < 1e-6);
}

TEST_CASE("stationary state keeps unit fidelity") {
  const Grid g = line(-10.0, 10.0, 256);
  const RealField v = harmonic(g);
  const GroundState gs = ground_state(v, unit_ground());
  const EvolutionResult r =
      propagate(gs.state, compose(g, {constant_term(v)}), 5.0, unit_config(1e-3, 500), &gs.state);
  REQUIRE(r.trace.size() == 11);
  for (const TracePoint& p : r.trace) CHECK(std::abs(p.fidelity - 1.0) < 1e-8);
}

TEST_CASE("harmonic ground state and its residual") {
  const Grid g = line(-10.0, 10.0, 256);
  const GroundState gs = ground_state(harmonic(g, 2.0), unit_ground());
  CHECK(gs.energy == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(gs.residual < 1e-4);
  CHECK(std::abs(norm_squared(gs.state) - 1.0) < 1e-10);
  CHECK(spread(gs.state, Coordinate::x) == doctest::Approx(std::sqrt(0.25)).epsilon(1e-4));
}

TEST_CASE("ground state of a 40 E_r lattice well matches dense diagonalization") {
  // One period of -40 cos^2(2 pi x), recoil units: H = -(1/4 pi^2) d^2/dx^2 + V.
  const double depth = 40.0;
  const Grid g = line(-0.25, 0.25, 128);
  const RealField v = sample(g, [&](const Eigen::Vector3d& r) { return -depth * std::pow(std::cos(2 * pi * r.x()), 2); });
  GroundStateConfig cfg;
  cfg.dt = 1e-4;
  const GroundState gs = ground_state(v, cfg);

  // Oracle: periodic second-order finite differences on a much finer mesh.
  const int n = 1200;
  const double h = 0.5 / n;
  const double kappa = recoil_kinetic_coefficient;
  Eigen::MatrixXd hmat = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double x = -0.25 + i * h;
    hmat(i, i) = 2.0 * kappa / (h * h) - depth * std::pow(std::cos(2 * pi * x), 2);
    hmat(i, (i + 1) % n) = -kappa / (h * h);
    hmat(i, (i + n - 1) % n) = -kappa / (h * h);
  }
  const double oracle = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hmat, Eigen::EigenvaluesOnly).eigenvalues()(0);
  CHECK(gs.energy == doctest::Approx(oracle).epsilon(0.005));
  // Harmonic estimate -V0 + sqrt(V0) - 1/4 (kinetic 1/4 pi^2) as a sanity bound.
  CHECK(gs.energy == doctest::Approx(-depth + std::sqrt(depth) - 0.25).epsilon(0.02));
}

TEST_CASE("ground-state search rejects bad inputs and honours the iteration cap") {
  const Grid g = line(-10.0, 10.0, 128);
  GroundStateConfig cfg = unit_ground();
  cfg.dt = -1.0;
  CHECK_THROWS_AS(ground_state(harmonic(g), cfg), InvalidParameter);
  cfg = unit_ground();
  cfg.max_iters = 10;
  cfg.energy_tol = 1e-300;
  CHECK_THROWS_AS(ground_state(harmonic(g), cfg), ConvergenceError);
}

TEST_CASE("free plane wave acquires exactly exp(-i k^2 t / 2)") {
  const Grid g = line(0.0, 2.0 * pi, 64);
  const double k = 5.0;
  const Wavefunction psi0 = normalize(sample_complex(g, [&](const Eigen::Vector3d& r) { return std::polar(1.0, k * r.x()); }));
  const double t = 0.73;
  const EvolutionResult r = propagate(psi0, compose(g, {}), t, unit_config(0.01));
  const Eigen::ArrayXcd want = psi0.values() * std::polar(1.0, -0.5 * k * k * t);
  CHECK((r.final_state.values() - want).abs().maxCoeff() < 1e-12);
}

TEST_CASE("free Gaussian spreads as sigma(t) = sigma0 sqrt(1 + (t / 2 sigma0^2)^2)") {
  const Grid g = line(-40.0, 40.0, 1024);
  const double s0 = 0.8;
  const Wavefunction psi0 = packet(g, 0.0, s0, 1.0);
  const double t = 3.0;
  const EvolutionResult r = propagate(psi0, compose(g, {}), t, unit_config(0.01));
  const double want = s0 * std::sqrt(1.0 + std::pow(t / (2.0 * s0 * s0), 2));
  CHECK(spread(r.final_state, Coordinate::x) == doctest::Approx(want).epsilon(0.005));
  CHECK(expectation(r.final_state, Coordinate::x) == doctest::Approx(t).epsilon(1e-6));
}

TEST_CASE("displaced packet follows the classical trajectory") {
  const Grid g = line(-12.0, 12.0, 256);
  const RealField v = harmonic(g);
  const double x0 = 2.0;
  const Wavefunction psi0 = packet(g, x0, std::sqrt(0.5));
  for (double t : {0.5, pi / 2, 2.0, pi}) {
    const EvolutionResult r = propagate(psi0, compose(g, {constant_term(v)}), t, unit_config(1e-3));
    CHECK(expectation(r.final_state, Coordinate::x) == doctest::Approx(x0 * std::cos(t)).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("forward then conjugated propagation returns the initial state") {
  const Grid g = line(-12.0, 12.0, 256);
  const RealField v = sample(g, [](const Eigen::Vector3d& r) { return 0.5 * r.x() * r.x() + 0.3 * std::cos(3 * r.x()); });
  const TimeDependentPotential pot = compose(g, {constant_term(v)});
  const Wavefunction psi0 = packet(g, 1.0, 0.7, 1.5);
  const EvolutionResult fwd = propagate(psi0, pot, 4.0, unit_config(1e-3));
  const Wavefunction flipped(g, fwd.final_state.values().conjugate());
  const EvolutionResult back = propagate(flipped, pot, 4.0, unit_config(1e-3));
  const Wavefunction recovered(g, back.final_state.values().conjugate());
  CHECK(overlap_fidelity(recovered, psi0) > 1.0 - 1e-8);
}

TEST_CASE("split-step error is second order for a driven oscillator") {
  const Grid g = line(-12.0, 12.0, 256);
  const RealField v = harmonic(g);
  const RealField drive = sample(g, [](const Eigen::Vector3d& r) { return r.x(); });
  const TimeDependentPotential pot =
      compose(g, {constant_term(v), PotentialTerm{drive, [](double t) { return std::sin(2.0 * t); }}});
  const Wavefunction psi0 = packet(g, 0.5, 0.9);
  const double t = 2.0;
  const Wavefunction ref = propagate(psi0, pot, t, unit_config(1e-4)).final_state;
  auto err = [&](double dt) { return 1.0 - overlap_fidelity(propagate(psi0, pot, t, unit_config(dt)).final_state, ref); };
  // Infidelity goes as |error|^2 ~ dt^4: order = log2(e1/e2) / 2.
  const double e1 = err(0.04);
  const double e2 = err(0.02);
  const double order = std::log2(e1 / e2) / 2.0;
  CHECK(order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("trace records t = 0, every stride, and the final step") {
  const Grid g = line(-8.0, 8.0, 64);
  const Wavefunction psi0 = packet(g, 0.0, 1.0);
  const EvolutionResult r = propagate(psi0, compose(g, {constant_term(harmonic(g))}), 1.05, unit_config(0.01, 20), &psi0);
  REQUIRE(r.trace.size() == 7);
  CHECK(r.trace.front().t == 0.0);
  CHECK(r.trace[1].t == doctest::Approx(0.2));
  CHECK(r.trace.back().t == doctest::Approx(1.05));
  CHECK(r.trace.front().fidelity == doctest::Approx(1.0));
}

TEST_CASE("absorber removes outgoing flux without raising") {
  const Grid g = line(-10.0, 10.0, 256);
  PropagatorConfig c = unit_config(1e-3);
  c.absorber_fraction = 0.15;
  const EvolutionResult r = propagate(packet(g, 0.0, 0.5, 8.0), compose(g, {}), 2.0, c);
  CHECK(norm_squared(r.final_state) < 0.5);
}

TEST_CASE("propagation rejects mismatched grids and bad steps") {
  const Grid a = line(-5.0, 5.0, 64);
  const Grid b = line(-5.0, 5.0, 128);
  CHECK_THROWS_AS(propagate(packet(a, 0, 1), compose(b, {}), 1.0, unit_config(0.01)), IncompatibleGrid);
  CHECK_THROWS_AS(propagate(packet(a, 0, 1), compose(a, {}), 1.0, unit_config(-0.01)), InvalidParameter);
}

TEST_CASE("convergence report compares dt halving and refinement") {
  const ConvergenceReport r = convergence_check(
      [](double dt, int refine) { return 0.99 + 1e-3 * dt * dt + 1e-6 * (refine - 1); }, 0.1, true, 1e-4);
  CHECK(r.passed);
  CHECK(r.dt_delta == doctest::Approx(1e-3 * 0.0075));
  REQUIRE(r.grid_delta);
  CHECK(*r.grid_delta == doctest::Approx(1e-6));
}
