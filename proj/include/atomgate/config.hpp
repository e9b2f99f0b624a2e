#pragma once

#include <Eigen/Core>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "atomgate/lattice.hpp"
#include "atomgate/propagator.hpp"
#include "atomgate/units.hpp"

namespace atomgate {

/// A duration given in tau = hbar/E_r or in milliseconds.
struct TimeSpec {
  enum class Unit { tau, ms };
  double value = 0.0;
  Unit unit = Unit::tau;

  static TimeSpec tau(double v) { return {v, Unit::tau}; }
  static TimeSpec ms(double v) { return {v, Unit::ms}; }
  double scaled(const ScaledUnits& units) const {
    return unit == Unit::tau ? value : units.time_to_scaled(value * 1e-3);
  }
  double seconds(const ScaledUnits& units) const {
    return unit == Unit::ms ? value * 1e-3 : units.time_to_physical(value);
  }
};

struct GridSettings {
  int step1_dim = 2;                 // 1: z line, 2: (x, z), 3: (x, y, z)
  Eigen::Index step1_points = 0;     // per axis; 0 keeps the per-axis defaults
  int transport_dim = 1;
  Eigen::Index transport_points = 0;  // 0 keeps the default (2048 along x)
  int quadrature_order = 64;
};

struct ScheduleSettings {
  TimeSpec ramp = TimeSpec::ms(1.8);        // T_F
  TimeSpec transport = TimeSpec::ms(1.28);  // T_OL
  TimeSpec hold = TimeSpec::ms(2.29);       // t_hold used by the budget
  int n = 6;
  double phase = std::numbers::pi;
  HyperfineState state = HyperfineState::one;
  double step_fidelity = 0.99;  // per-process fidelity entering the budget
  double site_pitch = 10e-6;    // m, for the capacity estimate
};

struct InteractionSettings {
  enum class Method { separable, grid };
  Method method = Method::separable;
  Eigen::Index points = 256;
  std::optional<double> frequency_hz;  // fixes nu_int instead of computing it
};

/// Optional minimum-time search run by step1 / step2.
struct SearchSettings {
  bool enabled = false;
  double target = 0.99;
  double lo = 5.0;   // tau
  double hi = 60.0;  // tau
  double scan_step = 2.5;
  double tolerance = 1e-2;
};

struct SweepSettings {
  std::string parameter;  // T_F, T_OL, n, V_0, U_0; empty when unused
  std::vector<double> values;  // tau for times, E_r for depths
};

struct OutputSettings {
  std::string directory;  // empty: ATOMGATE_OUT or ./atomgate_out
  bool plot = false;      // also write gnuplot scripts
};

struct ScenarioConfig {
  PhysicalParams physical;
  GridSettings grid;
  PropagatorConfig propagator;
  GroundStateConfig ground_state;
  ScheduleSettings schedule;
  InteractionSettings interaction;
  SearchSettings search;
  SweepSettings sweep;
  OutputSettings output;
};

/// Parses YAML text; absent keys keep their defaults. Throws ConfigError with
/// line/column for malformed text and naming the key for invalid content.
ScenarioConfig parse_config(const std::string& text);

/// Reads and parses a file. Throws ConfigError if it cannot be read.
ScenarioConfig load_config(const std::string& path);

/// Canonical YAML: every key, fixed order, shortest round-trip numbers.
std::string emit_config(const ScenarioConfig& cfg);

/// Throws ConfigError naming the first invalid setting.
void validate(const ScenarioConfig& cfg);

/// 64-bit FNV-1a of the canonical text, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

}  // namespace atomgate
