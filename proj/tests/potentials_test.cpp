#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "atomgate/errors.hpp"
#include "atomgate/lattice.hpp"
#include "atomgate/nffd.hpp"
#include "atomgate/optics.hpp"
#include "atomgate/quadrature.hpp"
#include "atomgate/schedules.hpp"
#include "atomgate/time_potential.hpp"
#include "atomgate/units.hpp"
#include "doctest.h"

using namespace atomgate;
using std::numbers::pi;

namespace {

// E/E0 on the axis behind a disk of radius a: e^{ikz} - z/R e^{ikR}.
Complex on_axis_closed_form(const ApertureSpec& s, double z) {
  const double k = 2.0 * pi / s.wavelength;
  const double r = std::hypot(z, s.radius);
  return std::polar(1.0, k * z) - (z / r) * std::polar(1.0, k * r);
}

// Adaptive nested Gauss-Kronrod evaluation of the same diffraction integral.
Complex adaptive_field(const ApertureSpec& s, const Eigen::Vector3d& p) {
  using boost::math::quadrature::gauss_kronrod;
  const double k = 2.0 * pi / s.wavelength;
  auto part = [&](bool imag) {
    auto inner = [&](double rho) {
      auto ang = [&](double phi) {
        const double dx = p.x() - rho * std::cos(phi);
        const double dy = p.y() - rho * std::sin(phi);
        const double d = std::sqrt(dx * dx + dy * dy + p.z() * p.z());
        const Complex v = p.z() * std::polar(1.0, k * d) * Complex(1.0, -k * d) / (d * d * d);
        return (imag ? v.imag() : v.real()) * rho;
      };
      return gauss_kronrod<double, 61>::integrate(ang, 0.0, 2.0 * pi, 12, 1e-13);
    };
    return gauss_kronrod<double, 61>::integrate(inner, 0.0, s.radius, 12, 1e-13) / (2.0 * pi);
  };
  return {part(false), part(true)};
}

Grid line_x(double lo, double hi, Eigen::Index n, double z) {
  return Grid({Axis{Coordinate::x, lo, hi, n}}, Eigen::Vector3d(0.0, 0.0, z));
}

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int n : {1, 2, 5, 16, 64}) {
    const QuadratureRule q = gauss_legendre(n, -0.5, 2.0);
    CHECK(q.weights.sum() == doctest::Approx(2.5).epsilon(1e-13));
    for (int deg = 0; deg <= 2 * n - 1; deg += std::max(1, n / 4)) {
      const double exact = (std::pow(2.0, deg + 1) - std::pow(-0.5, deg + 1)) / (deg + 1);
      const double got = (q.weights * q.nodes.pow(deg)).sum();
      CHECK(got == doctest::Approx(exact).epsilon(1e-12));
    }
  }
  const QuadratureRule q = gauss_legendre(32);
  CHECK((q.weights * q.nodes.cos()).sum() == doctest::Approx(2.0 * std::sin(1.0)).epsilon(1e-14));
}

TEST_CASE("detuning of the 795.118 nm trap light") {
  const double d = detuning(795.118e-9, 794.979e-9);
  CHECK(d < 0.0);
  CHECK(d == doctest::Approx(-4.1e11).epsilon(0.02));
  const double c = 299792458.0;
  CHECK(d == doctest::Approx(2.0 * pi * (c / 795.118e-9 - c / 794.979e-9)).epsilon(1e-12));
  CHECK(detuning(794.0e-9, 794.979e-9) > 0.0);
}

TEST_CASE("laser power through the aperture") {
  const double p = laser_power(2.5e9, 1.5 * 795.118e-9);
  CHECK(p == doctest::Approx(1.1e-2).epsilon(0.1));
  CHECK(p == doctest::Approx(2.5e9 * pi * std::pow(1.5 * 795.118e-9, 2)).epsilon(1e-14));
}

TEST_CASE("trap depth from intensity scales as I / |Delta|") {
  const double gamma = pi * 5.746e6;
  const double delta = detuning(795.118e-9, 794.979e-9);
  const double k = 2.0 * pi / 795.118e-9;
  const double u = trap_depth_u0(2.5e5, gamma, delta, k);
  // 2.5e5 read as W/m^2 lands on the tabulated h x 1.03 MHz.
  CHECK(u / (2.0 * pi * constants::hbar) == doctest::Approx(1.03e6).epsilon(0.15));
  CHECK(trap_depth_u0(5e5, gamma, delta, k) == doctest::Approx(2.0 * u).epsilon(1e-14));
  CHECK(trap_depth_u0(2.5e5, gamma, 2.0 * delta, k) == doctest::Approx(0.5 * u).epsilon(1e-14));
  CHECK_THROWS_AS(trap_depth_u0(2.5e5, gamma, 0.0, k), InvalidParameter);
}

TEST_CASE("diffracted field on the axis matches the closed form") {
  const ApertureSpec s;
  for (double z : {0.5, 1.0, 2.1656, 3.7, 6.0}) {
    const Complex got = nffd_relative_field(s, {0.0, 0.0, z});
    const Complex want = on_axis_closed_form(s, z);
    CHECK(std::abs(got - want) < 1e-9 * std::abs(want));
  }
}

TEST_CASE("diffracted field matches an adaptive quadrature oracle") {
  const ApertureSpec s;
  for (const Eigen::Vector3d p : {Eigen::Vector3d(0.0, 0.0, 2.1656), Eigen::Vector3d(0.3, 0.1, 1.5),
                                  Eigen::Vector3d(-0.8, 0.4, 2.5)}) {
    const Complex got = nffd_relative_field(s, p);
    const Complex want = adaptive_field(s, p);
    CHECK(std::abs(got - want) < 1e-6 * std::abs(want));
  }
}

TEST_CASE("diffracted field is rotationally symmetric about the axis") {
  const ApertureSpec s;
  const double rho = 0.45;
  const Complex ref = nffd_relative_field(s, {rho, 0.0, 1.8});
  for (double phi : {0.3, 1.1, 2.0, 4.4}) {
    const Complex v = nffd_relative_field(s, {rho * std::cos(phi), rho * std::sin(phi), 1.8});
    CHECK(std::abs(v - ref) < 1e-9 * std::abs(ref));
  }
}

TEST_CASE("trap potential is linear in depth, rejects z <= 0") {
  ApertureSpec s;
  const Grid g = line_x(-1.0, 1.0, 32, 2.0);
  const NFFDField a = nffd_field(s, g);
  s.depth *= 2.5;
  const NFFDField b = nffd_field(s, g);
  CHECK(((b.potential().values() - 2.5 * a.potential().values()).abs().maxCoeff()) < 1e-9);
  CHECK(a.potential().values().maxCoeff() <= 0.0);
  CHECK(a.converged());
  CHECK_THROWS_AS(nffd_field(s, line_x(-1.0, 1.0, 8, 0.0)), SingularKernel);
  CHECK_THROWS_AS(nffd_relative_field(s, {0.0, 0.0, -0.1}), SingularKernel);
  s.quadrature_order = 4;
  CHECK_THROWS_AS(validate(s), InvalidParameter);
}

TEST_CASE("on-axis minimum of the near-field trap near 1.7 um") {
  const ApertureSpec s;
  const double z = nffd_on_axis_minimum(s);
  CHECK(z * 785e-9 == doctest::Approx(1.7e-6).epsilon(0.10));
  // Stationary point of |closed form|^2.
  auto intensity = [&](double zz) { return std::norm(on_axis_closed_form(s, zz)); };
  const double h = 1e-4;
  CHECK(std::abs(intensity(z + h) - intensity(z - h)) / (2 * h) < 1e-4 * intensity(z));
  CHECK(intensity(z) > intensity(z + 0.05));
  CHECK(intensity(z) > intensity(z - 0.05));
}

TEST_CASE("lattice potential shape") {
  const LatticeSpec s{40.0, 1.0, 4.0, 2.2};
  const Grid g({Axis{Coordinate::x, -1.0, 1.0, 64}}, Eigen::Vector3d(0.0, 0.0, 2.2));
  const RealField v = lattice_potential(s, g);
  CHECK(v.values().maxCoeff() <= 1e-12);
  CHECK(v.values().minCoeff() == doctest::Approx(-40.0));
  CHECK(v[32] == doctest::Approx(-40.0));  // x = 0
  CHECK(v[48] == doctest::Approx(-40.0));  // x = lambda / 2
  CHECK(std::abs(v[40]) < 1e-12);          // x = lambda / 4
  // Envelope reaches 1/e at y^2 + (z - z_m)^2 = w^2 / 2.
  const double r = s.waist / std::sqrt(2.0);
  CHECK(lattice_envelope(s, {0.0, r * 0.6, 2.2 + r * 0.8}) == doctest::Approx(std::exp(-1.0)));
  CHECK(lattice_envelope(s, {0.0, 0.0, 2.2}) == doctest::Approx(1.0));
  CHECK(s.lattice_constant() == doctest::Approx(0.5));
}

TEST_CASE("hyperfine weights are squared spin amplitudes") {
  const PolarizationWeights w0 = polarization_weights(HyperfineState::zero);
  const PolarizationWeights w1 = polarization_weights(HyperfineState::one);
  CHECK(w0.plus == doctest::Approx(0.25));
  CHECK(w0.minus == doctest::Approx(0.75));
  CHECK(w1.plus == doctest::Approx(0.75));
  CHECK(w1.minus == doctest::Approx(0.25));
  CHECK(w0.plus + w0.minus == doctest::Approx(1.0));
}

TEST_CASE("state-dependent lattices move in opposite directions") {
  const LatticeSpec s{40.0, 1.0, 4.0, 2.0};
  const Grid g({Axis{Coordinate::x, -1.0, 1.0, 400}}, Eigen::Vector3d(0.0, 0.0, 2.0));
  const double theta = 0.3;
  const StatePotentials p = state_potentials(s, theta, g);
  // V+ is V_OL shifted by +theta/k, V- by -theta/k.
  const double shift = theta / s.wavenumber();
  const RealField vp = sample(g, [&](const Eigen::Vector3d& r) { return -40.0 * std::pow(std::cos(s.wavenumber() * (r.x() - shift)), 2); });
  CHECK((p.plus.values() - vp.values()).abs().maxCoeff() < 1e-12);
  CHECK((p.state1.values() - (0.75 * p.plus.values() + 0.25 * p.minus.values())).abs().maxCoeff() < 1e-12);
  CHECK((p.state0.values() - (0.25 * p.plus.values() + 0.75 * p.minus.values())).abs().maxCoeff() < 1e-12);
  // Minimum of the |1> lattice is displaced to positive x, |0> to negative x.
  Eigen::Index i1, i0, ic;
  state_potential(s, HyperfineState::one, theta, g).values().segment(150, 100).minCoeff(&i1);
  state_potential(s, HyperfineState::zero, theta, g).values().segment(150, 100).minCoeff(&i0);
  state_potential(s, HyperfineState::one, 0.0, g).values().segment(150, 100).minCoeff(&ic);
  CHECK(i1 > ic);
  CHECK(i0 < ic);
  // theta = pi returns every lattice to itself, shifted one site.
  const RealField a = state_potential(s, HyperfineState::one, 0.0, g);
  const RealField b = state_potential(s, HyperfineState::one, pi, g);
  CHECK((a.values() - b.values()).abs().maxCoeff() < 1e-10);
}

TEST_CASE("schedules hit their endpoints and reject out-of-range times") {
  CHECK(theta_schedule(6, 30.0, 0.0) == doctest::Approx(0.0));
  CHECK(theta_schedule(6, 30.0, 30.0) == doctest::Approx(6.0 * pi));
  CHECK(theta_schedule(6, 30.0, 15.0) == doctest::Approx(3.0 * pi));
  double prev = -1.0;
  for (double t = 0.0; t <= 30.0; t += 0.5) {
    const double th = theta_schedule(6, 30.0, t);
    CHECK(th >= prev);
    prev = th;
  }
  CHECK(ramp_multiplier(40.0, 0.0) == doctest::Approx(1.0));
  CHECK(ramp_multiplier(40.0, 40.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ramp_multiplier(40.0, 20.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(theta_schedule(6, 30.0, 30.5), RangeError);
  CHECK_THROWS_AS(ramp_multiplier(40.0, -1.0), RangeError);
  CHECK_THROWS_AS(ramp_multiplier(0.0, 0.0), InvalidParameter);
  const ThetaSchedule back{6, 30.0, true};
  CHECK(back(0.0) == doctest::Approx(6.0 * pi));
  CHECK(back(30.0) == doctest::Approx(0.0).epsilon(1e-12));
  const RampSchedule on{40.0, true};
  CHECK(on(0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(on(40.0) == doctest::Approx(1.0));
}

TEST_CASE("composed moving lattice equals the direct state potential") {
  const LatticeSpec s{40.0, 1.0, 4.0, 2.0};
  const Grid g({Axis{Coordinate::x, -2.0, 2.0, 256}, Axis{Coordinate::z, 0.5, 3.5, 16}},
               Eigen::Vector3d(0.0, 0.0, 2.0));
  const ThetaSchedule th{6, 30.0, false};
  for (HyperfineState st : {HyperfineState::zero, HyperfineState::one}) {
    const TimeDependentPotential v = compose(g, moving_state_lattice(s, st, th, g));
    CHECK_FALSE(v.is_static());
    for (double t : {0.0, 3.3, 12.0, 29.0}) {
      const RealField direct = state_potential(s, st, th(t), g);
      CHECK((v(t).values() - direct.values()).abs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("ramped term and constant term sum") {
  const Grid g({Axis{Coordinate::x, 0.0, 1.0, 8}});
  const RealField a = sample(g, [](const Eigen::Vector3d& r) { return r.x(); });
  const RealField b = sample(g, [](const Eigen::Vector3d&) { return -3.0; });
  const TimeDependentPotential v = compose(g, {constant_term(a), ramp_term(b, RampSchedule{10.0, false})});
  CHECK((v(5.0).values() - (a.values() + 0.5 * b.values())).abs().maxCoeff() < 1e-14);
  CHECK((v(10.0).values() - a.values()).abs().maxCoeff() < 1e-14);
  CHECK(compose(g, {constant_term(a)}).is_static());
}
