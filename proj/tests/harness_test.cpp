#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "atomgate/csv.hpp"
#include "atomgate/errors.hpp"
#include "atomgate/harness.hpp"
#include "doctest.h"

using namespace atomgate;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(ATOMGATE_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string value_of(const RunManifest& m, const std::string& key) {
  for (const auto& [k, v] : m.summary)
    if (k == key) return v;
  FAIL("missing summary key " << key);
  return {};
}

double number_of(const RunManifest& m, const std::string& key) { return std::stod(value_of(m, key)); }

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + ATOMGATE_CLI + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ScenarioConfig light_transport() {
  ScenarioConfig c = parse_config("grid:\n  transport_points: 512\n");
  return c;
}

}  // namespace

TEST_CASE("an empty config keeps every default") {
  const ScenarioConfig c = parse_config("");
  CHECK(c.schedule.n == 6);
  CHECK(c.schedule.ramp.unit == TimeSpec::Unit::ms);
  CHECK(c.schedule.ramp.value == 1.8);
  CHECK(c.physical.trap_minimum.value() == 1.7e-6);
  CHECK(c.grid.step1_dim == 2);
  CHECK(c.propagator.dt == 2e-3);
  CHECK_FALSE(c.physical.half_linewidth.has_value());
}

TEST_CASE("config values parse in either unit") {
  const ScenarioConfig c = parse_config(
      "schedule:\n  n: 6\n  T_OL_tau: 29.7\n  T_F_ms: 1.5\n"
      "lattice:\n  depth_Hz: 1.5e5\n"
      "trap:\n  minimum_m: auto\n  intensity_W_cm2: 2.5e5\n"
      "atom:\n  half_linewidth_rad_s: 3.6e7\n");
  CHECK(c.schedule.transport.unit == TimeSpec::Unit::tau);
  CHECK(c.schedule.transport.value == 29.7);
  CHECK(c.schedule.ramp.seconds(derive_scaled_units(c.physical)) == doctest::Approx(1.5e-3));
  CHECK(c.physical.lattice_depth.unit == EnergySpec::Unit::hertz);
  CHECK_FALSE(c.physical.trap_minimum.has_value());
  CHECK(c.physical.trap_intensity == doctest::Approx(2.5e9));
  CHECK(*c.physical.half_linewidth == 3.6e7);
}

TEST_CASE("config errors name the key or the position") {
  const std::string typo = config_error("lattice:\n  depht: 40\n");
  CHECK(typo.find("lattice.depht") != std::string::npos);
  CHECK(typo.find("line") != std::string::npos);
  CHECK(config_error("schedule:\n  T_F_tau: 40\n  T_F_ms: 1.8\n").find("T_F") != std::string::npos);
  CHECK(config_error("nonsense:\n  a: 1\n").find("nonsense") != std::string::npos);
  const std::string broken = config_error("schedule:\n  n: [1, 2\n");
  CHECK(broken.find("line") != std::string::npos);
  CHECK(broken.find("column") != std::string::npos);
  CHECK_FALSE(config_error("schedule:\n  n: six\n").empty());
  CHECK_FALSE(config_error("propagator:\n  dt_tau: -1\n").empty());
  CHECK_FALSE(config_error("sweep:\n  parameter: T_F\n  values: [1]\n  range: [1, 2, 0.5]\n").empty());
}

TEST_CASE("emitted config round-trips byte for byte") {
  const ScenarioConfig c = parse_config(
      "schedule:\n  T_OL_tau: 29.7\n  n: 4\ntrap:\n  minimum_m: auto\n"
      "sweep:\n  parameter: T_OL\n  range: [10, 12, 1]\noutput:\n  directory: \"a b\"\n");
  const std::string once = emit_config(c);
  const std::string twice = emit_config(parse_config(once));
  CHECK(once == twice);
  CHECK(config_hash(c) == config_hash(parse_config(once)));
  CHECK(config_hash(c) != config_hash(parse_config("")));
  CHECK(parse_config(once).sweep.values.size() == 3);
}

TEST_CASE("numbers are written with 12 significant digits") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(2.0) == "2");
}

TEST_CASE("budget, units and capacity subcommands") {
  const ScenarioConfig c = parse_config("");
  const fs::path dir = scratch("analytic");
  const RunManifest b = run_scenario(c, "budget", {dir.string(), 1});
  CHECK(number_of(b, "T_overall_ms") == doctest::Approx(8.45).epsilon(1e-9));
  CHECK(number_of(b, "F_overall") == doctest::Approx(0.9227).epsilon(5e-4));
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "summary.txt"));
  CHECK(fs::exists(dir / "config.yaml"));
  CHECK(slurp(dir / "manifest.json").find(config_hash(c)) != std::string::npos);

  const RunManifest u = run_scenario(c, "units", {dir.string(), 1});
  CHECK(number_of(u, "E_r_Hz") == doctest::Approx(3.7e3).epsilon(0.01));
  CHECK(number_of(u, "tau_us") == doctest::Approx(43.0).epsilon(0.01));
  CHECK(number_of(u, "T_F_tau") == doctest::Approx(42.13).epsilon(1e-3));

  const RunManifest cap = run_scenario(c, "capacity", {dir.string(), 1});
  CHECK(number_of(cap, "qubits") == 8);
  CHECK(number_of(cap, "x_R_um") == doctest::Approx(39.46).epsilon(1e-3));
  CHECK_THROWS_AS(run_scenario(c, "teleport", {dir.string(), 1}), ConfigError);
}

TEST_CASE("output directory precedence") {
  ScenarioConfig c = parse_config("");
  ::setenv("ATOMGATE_OUT", "from_env", 1);
  CHECK(resolve_output_directory(c, "") == "from_env");
  c.output.directory = "from_config";
  CHECK(resolve_output_directory(c, "") == "from_config");
  CHECK(resolve_output_directory(c, "override") == "override");
  ::unsetenv("ATOMGATE_OUT");
  CHECK(resolve_output_directory(parse_config(""), "") == "atomgate_out");
}

TEST_CASE("a single-value sweep equals the direct run") {
  ScenarioConfig c = light_transport();
  c.schedule.transport = TimeSpec::tau(20.0);
  const RunManifest direct = run_scenario(c, "step2", {scratch("direct").string(), 1});
  const auto rows = sweep_fidelities(c, "T_OL", {20.0}, 1);
  REQUIRE(rows.size() == 1);
  CHECK(format_number(rows[0].second) == value_of(direct, "fidelity"));
}

TEST_CASE("parallel sweeps are byte-identical to serial ones") {
  const ScenarioConfig c = light_transport();
  const std::vector<double> values{9.0, 14.0, 21.0, 27.0};
  const fs::path a = scratch("serial");
  const fs::path b = scratch("parallel");
  sweep(c, "T_OL", values, {a.string(), 1});
  sweep(c, "T_OL", values, {b.string(), 3});
  const std::string serial = slurp(a / "sweep.csv");
  CHECK(serial == slurp(b / "sweep.csv"));
  CHECK(serial.rfind("parameter,fidelity\n", 0) == 0);
  CHECK(std::count(serial.begin(), serial.end(), '\n') == 5);
  CHECK_THROWS_AS(sweep_fidelities(c, "mass", {1.0}, 1), ConfigError);
  CHECK_THROWS_AS(sweep_fidelities(c, "n", {1.5}, 1), ConfigError);
}

TEST_CASE("repeated runs write identical files") {
  ScenarioConfig c = light_transport();
  c.schedule.transport = TimeSpec::tau(12.0);
  const fs::path a = scratch("repeat_a");
  const fs::path b = scratch("repeat_b");
  run_scenario(c, "spectator", {a.string(), 1});
  run_scenario(c, "spectator", {b.string(), 1});
  for (const char* f : {"spectator_trace.csv", "summary.txt", "manifest.json", "config.yaml"})
    CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("command-line exit codes") {
  const fs::path dir = scratch("cli");
  const fs::path good = dir / "good.yaml";
  const fs::path bad = dir / "bad.yaml";
  std::ofstream(good) << "schedule:\n  step_fidelity: 0.99\n";
  std::ofstream(bad) << "lattice:\n  depht: 40\n";
  CHECK(run_cli("budget --config \"" + good.string() + "\" --out \"" + dir.string() + "\"") == 0);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(run_cli("budget --config \"" + bad.string() + "\" --out \"" + dir.string() + "\"") == 2);
  CHECK(run_cli("budget --config \"" + (dir / "missing.yaml").string() + "\"") == 2);
}
