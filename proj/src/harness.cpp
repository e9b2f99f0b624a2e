#include "atomgate/harness.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "atomgate/csv.hpp"
#include "atomgate/errors.hpp"
#include "atomgate/optics.hpp"

#ifndef ATOMGATE_VERSION
#define ATOMGATE_VERSION "0.0.0"
#endif

namespace atomgate {

namespace fs = std::filesystem;

namespace {

constexpr double dip_prominence = 1e-4;

struct Writer {
  fs::path dir;
  RunManifest& manifest;
  bool plot;

  template <typename F>
  void file(const std::string& name, F&& body) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    body(out);
    manifest.outputs.push_back(name);
  }

  void curve(const std::string& name, const std::string& xlabel, const std::string& ylabel) {
    if (!plot) return;
    const std::string stem = name.substr(0, name.rfind('.'));
    file(stem + ".gp", [&](std::ostream& o) {
      o << "set datafile separator ','\n"
        << "set key off\n"
        << "set xlabel '" << xlabel << "'\n"
        << "set ylabel '" << ylabel << "'\n"
        << "plot '" << name << "' using 1:2 every ::1 with lines\n";
    });
  }

  void trace(const std::string& name, const std::vector<TracePoint>& points) {
    file(name, [&](std::ostream& o) { write_trace_csv(o, points); });
    curve(name, "t / tau", "fidelity");
  }

  void rows(const std::string& name, const std::vector<std::pair<double, double>>& values,
            const std::string& xlabel) {
    file(name, [&](std::ostream& o) { write_sweep_csv(o, values); });
    curve(name, xlabel, "fidelity");
  }
};

void put(RunManifest& m, const std::string& key, double value) {
  m.summary.emplace_back(key, format_number(value));
}

void put(RunManifest& m, const std::string& key, const std::string& value) {
  m.summary.emplace_back(key, value);
}

/// Runs f(i) for i in [0, count) on up to `jobs` threads; rethrows the first
/// failure by index so errors are reproducible.
template <typename F>
void parallel_for(std::size_t count, int jobs, F&& f) {
  const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1), std::max<std::size_t>(count, 1));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

MinTimeOptions search_options(const ScenarioConfig& cfg) {
  MinTimeOptions o;
  o.scan_step = cfg.search.scan_step;
  o.tolerance = cfg.search.tolerance;
  return o;
}

void report_search(Writer& w, RunManifest& m, const std::string& stem,
                   const std::function<double(double)>& fidelity, const ScenarioConfig& cfg,
                   const ScaledUnits& units) {
  std::vector<std::pair<double, double>> samples;
  try {
    const MinTimeResult r =
        find_min_time(fidelity, cfg.search.target, cfg.search.lo, cfg.search.hi, search_options(cfg));
    samples = r.samples;
    put(m, stem + "_min_tau", r.time);
    put(m, stem + "_min_ms", units.time_to_physical(r.time) * 1e3);
    put(m, stem + "_min_fidelity", r.fidelity);
  } catch (const NotFound& e) {
    put(m, stem + "_min_tau", "not_found");
    put(m, stem + "_best_fidelity", e.best());
  }
  std::sort(samples.begin(), samples.end());
  if (!samples.empty()) w.rows(stem + "_search.csv", samples, "T / tau");
}

RealField density(const Wavefunction& psi) {
  return RealField(psi.grid(), psi.values().abs2());
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"units",       "potential", "groundstate", "step1",
                                              "step2",       "spectator", "interaction", "budget",
                                              "capacity",    "sweep"};
  return names;
}

std::string resolve_output_directory(const ScenarioConfig& cfg, const std::string& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (!cfg.output.directory.empty()) return cfg.output.directory;
  if (const char* env = std::getenv("ATOMGATE_OUT"); env && *env) return env;
  return "atomgate_out";
}

ModelParams model_for(const ScenarioConfig& cfg) {
  return scaled_model(cfg.physical, cfg.grid.quadrature_order);
}

Grid step1_grid_for(const ScenarioConfig& cfg, const ModelParams& model) {
  return default_step1_grid(model.lattice, cfg.grid.step1_dim, cfg.grid.step1_points);
}

Grid transport_grid_for(const ScenarioConfig& cfg, const ModelParams& model) {
  return default_transport_grid(model.lattice, cfg.grid.transport_dim, cfg.grid.transport_points);
}

PropagatorConfig propagator_for(const ScenarioConfig& cfg) {
  PropagatorConfig p = cfg.propagator;
  p.kinetic_coefficient = recoil_kinetic_coefficient;
  return p;
}

GroundStateConfig ground_state_for(const ScenarioConfig& cfg) {
  GroundStateConfig g = cfg.ground_state;
  g.kinetic_coefficient = recoil_kinetic_coefficient;
  return g;
}

std::vector<std::pair<double, double>> sweep_fidelities(const ScenarioConfig& cfg,
                                                        const std::string& parameter,
                                                        const std::vector<double>& values,
                                                        int jobs) {
  const ScaledUnits units = derive_scaled_units(cfg.physical);
  const ModelParams model = model_for(cfg);
  const PropagatorConfig prop = propagator_for(cfg);
  const GroundStateConfig ground = ground_state_for(cfg);
  const double ramp = cfg.schedule.ramp.scaled(units);
  const double transport = cfg.schedule.transport.scaled(units);
  std::vector<std::pair<double, double>> rows(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) rows[i].first = values[i];

  if (parameter == "T_F") {
    const Step1Scenario s(model, step1_grid_for(cfg, model), ground, prop);
    parallel_for(values.size(), jobs, [&](std::size_t i) { rows[i].second = s.run(values[i]).fidelity; });
  } else if (parameter == "T_OL") {
    const TransportScenario s(model, transport_grid_for(cfg, model), cfg.schedule.state, cfg.schedule.n,
                              ground, prop);
    parallel_for(values.size(), jobs, [&](std::size_t i) { rows[i].second = s.run(values[i]).fidelity; });
  } else if (parameter == "n") {
    parallel_for(values.size(), jobs, [&](std::size_t i) {
      const double v = values[i];
      if (v < 0.0 || v != std::floor(v)) throw ConfigError("sweep values for 'n' must be non-negative integers");
      const TransportScenario s(model, transport_grid_for(cfg, model), cfg.schedule.state,
                                static_cast<int>(v), ground, prop);
      rows[i].second = s.run(transport).fidelity;
    });
  } else if (parameter == "V_0" || parameter == "U_0") {
    parallel_for(values.size(), jobs, [&](std::size_t i) {
      ModelParams m = model;
      (parameter == "V_0" ? m.lattice.depth : m.aperture.depth) = values[i];
      const Step1Scenario s(m, step1_grid_for(cfg, m), ground, prop);
      rows[i].second = s.run(ramp).fidelity;
    });
  } else {
    throw ConfigError("sweep parameter '" + parameter + "' must be one of T_F, T_OL, n, V_0, U_0");
  }
  return rows;
}

RunManifest run_scenario(const ScenarioConfig& cfg, const std::string& subcommand,
                         const RunOptions& options) {
  if (std::find(subcommands().begin(), subcommands().end(), subcommand) == subcommands().end()) {
    throw ConfigError("unknown subcommand '" + subcommand + "'");
  }
  validate(cfg);
  if (subcommand == "sweep") {
    if (cfg.sweep.parameter.empty()) throw ConfigError("config key 'sweep.parameter' is required for sweep");
    return sweep(cfg, cfg.sweep.parameter, cfg.sweep.values, options);
  }

  RunManifest m;
  m.subcommand = subcommand;
  m.config_hash = config_hash(cfg);
  m.version = ATOMGATE_VERSION;
  const fs::path dir = options.output_directory.empty() ? resolve_output_directory(cfg, "")
                                                        : options.output_directory;
  fs::create_directories(dir);
  Writer w{dir, m, cfg.output.plot};

  const PhysicalParams& p = cfg.physical;
  const ScaledUnits units = derive_scaled_units(p);
  const double ramp = cfg.schedule.ramp.scaled(units);
  const double transport = cfg.schedule.transport.scaled(units);

  if (subcommand == "units") {
    put(m, "E_r_J", units.recoil_energy);
    put(m, "E_r_Hz", units.recoil_frequency());
    put(m, "tau_s", units.time_unit);
    put(m, "tau_us", units.time_unit * 1e6);
    put(m, "length_unit_m", units.length_unit);
    put(m, "k_OL_per_m", units.wavenumber);
    put(m, "U_0_Er", units.depth_to_scaled(p.trap_depth));
    put(m, "U_0_Hz", units.depth_to_scaled(p.trap_depth) * units.recoil_frequency());
    put(m, "V_0_Er", units.depth_to_scaled(p.lattice_depth));
    put(m, "V_0_Hz", units.depth_to_scaled(p.lattice_depth) * units.recoil_frequency());
    put(m, "T_F_tau", ramp);
    put(m, "T_F_ms", cfg.schedule.ramp.seconds(units) * 1e3);
    put(m, "T_OL_tau", transport);
    put(m, "T_OL_ms", cfg.schedule.transport.seconds(units) * 1e3);
    const double delta = detuning(p.trap_wavelength, p.atomic_line);
    put(m, "detuning_rad_s", delta);
    put(m, "laser_power_W", laser_power(p.trap_intensity, p.aperture_radius));
    if (p.half_linewidth) {
      const double k = 2.0 * std::numbers::pi / p.trap_wavelength;
      const double u0 = trap_depth_u0(p.trap_intensity, *p.half_linewidth, delta, k);
      put(m, "U_0_from_intensity_Hz", u0 / constants::planck);
    }
  } else if (subcommand == "capacity") {
    const ArrayCapacity c = array_capacity(p.waist, p.lattice_wavelength, cfg.schedule.site_pitch);
    put(m, "x_R_um", c.rayleigh_length * 1e6);
    put(m, "usable_length_um", c.usable_length * 1e6);
    put(m, "site_pitch_um", cfg.schedule.site_pitch * 1e6);
    put(m, "qubits", static_cast<double>(c.qubit_count));
  } else if (subcommand == "budget") {
    const GateBudget b = aggregate_budget(cfg.schedule.ramp.seconds(units),
                                          cfg.schedule.transport.seconds(units),
                                          cfg.schedule.hold.seconds(units), cfg.schedule.step_fidelity);
    put(m, "T_F_ms", cfg.schedule.ramp.seconds(units) * 1e3);
    put(m, "T_OL_ms", cfg.schedule.transport.seconds(units) * 1e3);
    put(m, "t_hold_ms", cfg.schedule.hold.seconds(units) * 1e3);
    put(m, "step_fidelity", cfg.schedule.step_fidelity);
    put(m, "T_overall_ms", b.total_time * 1e3);
    put(m, "F_overall", b.fidelity);
  } else if (subcommand == "interaction") {
    const double ratio = p.scattering_length / p.lattice_wavelength;
    if (cfg.interaction.frequency_hz) {
      put(m, "nu_int_Hz", *cfg.interaction.frequency_hz);
      put(m, "t_hold_ms", hold_time(*cfg.interaction.frequency_hz, cfg.schedule.phase) * 1e3);
    } else {
      const ModelParams model = model_for(cfg);
      const GroundStateConfig g = ground_state_for(cfg);
      const InteractionReport r =
          cfg.interaction.method == InteractionSettings::Method::separable
              ? interaction_energy(lattice_well_separable(model.lattice, g, cfg.interaction.points), ratio,
                                   units, cfg.schedule.phase)
              : interaction_energy(lattice_well_3d(model.lattice, g, 32, cfg.interaction.points / 4),
                                   ratio, units, cfg.schedule.phase);
      put(m, "E_int_Er", r.energy_over_recoil);
      put(m, "nu_int_Hz", r.frequency_hz);
      put(m, "t_hold_ms", r.hold_time * 1e3);
    }
    put(m, "phase", cfg.schedule.phase);
  } else {
    const ModelParams model = model_for(cfg);
    const PropagatorConfig prop = propagator_for(cfg);
    const GroundStateConfig ground = ground_state_for(cfg);
    put(m, "z_m_lambda", model.lattice.center_z);
    if (subcommand == "potential" || subcommand == "groundstate" || subcommand == "step1") {
      const Step1Scenario s(model, step1_grid_for(cfg, model), ground, prop);
      put(m, "quadrature_delta", s.trap_field().quadrature_delta);
      if (subcommand == "potential") {
        const double zs = nffd_on_axis_minimum(model.aperture);
        put(m, "z_star_lambda", zs);
        put(m, "z_star_um", units.length_to_physical(zs) * 1e6);
        put(m, "U_F_min_Er", s.trap_potential().values().minCoeff());
        w.file("trap_potential.csv", [&](std::ostream& o) { write_field_csv(o, s.trap_potential()); });
        w.file("lattice_potential.csv", [&](std::ostream& o) { write_field_csv(o, s.lattice_field()); });
        w.file("combined_potential.csv",
               [&](std::ostream& o) { write_field_csv(o, s.trap_potential() + s.lattice_field()); });
      } else if (subcommand == "groundstate") {
        put(m, "static_overlap", s.static_overlap());
        w.file("ground_combined.csv",
               [&](std::ostream& o) { write_field_csv(o, density(s.combined_ground_state()), "density"); });
        w.file("ground_lattice.csv",
               [&](std::ostream& o) { write_field_csv(o, density(s.lattice_ground_state()), "density"); });
      } else {
        const StepResult r = s.run(ramp);
        put(m, "T_F_tau", ramp);
        put(m, "fidelity", r.fidelity);
        put(m, "static_overlap", s.static_overlap());
        w.trace("step1_trace.csv", r.trace);
        if (cfg.search.enabled) {
          report_search(w, m, "T_F", [&](double t) { return s.run(t).fidelity; }, cfg, units);
        }
      }
    } else if (subcommand == "step2") {
      const TransportScenario s(model, transport_grid_for(cfg, model), cfg.schedule.state, cfg.schedule.n,
                                ground, prop);
      const StepResult r = s.run(transport);
      put(m, "n", static_cast<double>(cfg.schedule.n));
      put(m, "displacement_lambda", s.displacement());
      put(m, "T_OL_tau", transport);
      put(m, "fidelity", r.fidelity);
      w.trace("step2_trace.csv", r.trace);
      if (cfg.search.enabled) {
        report_search(w, m, "T_OL", [&](double t) { return s.run(t).fidelity; }, cfg, units);
      }
    } else if (subcommand == "spectator") {
      const SpectatorScenario s(model, transport_grid_for(cfg, model), cfg.schedule.state, cfg.schedule.n,
                                ground, prop);
      const StepResult r = s.run(transport);
      put(m, "n", static_cast<double>(cfg.schedule.n));
      put(m, "T_OL_tau", transport);
      put(m, "dips", static_cast<double>(find_dips(r.trace, dip_prominence).size()));
      put(m, "min_fidelity",
          std::min_element(r.trace.begin(), r.trace.end(),
                           [](const TracePoint& a, const TracePoint& b) { return a.fidelity < b.fidelity; })
              ->fidelity);
      put(m, "fidelity", r.fidelity);
      w.trace("spectator_trace.csv", r.trace);
    }
  }

  w.file("summary.txt", [&](std::ostream& o) { o << summary_text(m); });
  w.file("config.yaml", [&](std::ostream& o) { o << emit_config(cfg); });
  m.outputs.push_back("manifest.json");
  std::ofstream(dir / "manifest.json", std::ios::binary) << manifest_json(m);
  return m;
}

RunManifest sweep(const ScenarioConfig& cfg, const std::string& parameter,
                  const std::vector<double>& values, const RunOptions& options) {
  if (values.empty()) throw ConfigError("config key 'sweep.values': no values to sweep");
  RunManifest m;
  m.subcommand = "sweep";
  m.config_hash = config_hash(cfg);
  m.version = ATOMGATE_VERSION;
  const fs::path dir = options.output_directory.empty() ? resolve_output_directory(cfg, "")
                                                        : options.output_directory;
  fs::create_directories(dir);
  Writer w{dir, m, cfg.output.plot};
  const auto rows = sweep_fidelities(cfg, parameter, values, options.jobs);
  put(m, "parameter", parameter);
  put(m, "points", static_cast<double>(rows.size()));
  const auto best = std::max_element(rows.begin(), rows.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
  put(m, "best_value", best->first);
  put(m, "best_fidelity", best->second);
  w.rows("sweep.csv", rows, parameter);
  w.file("summary.txt", [&](std::ostream& o) { o << summary_text(m); });
  w.file("config.yaml", [&](std::ostream& o) { o << emit_config(cfg); });
  m.outputs.push_back("manifest.json");
  std::ofstream(dir / "manifest.json", std::ios::binary) << manifest_json(m);
  return m;
}

std::string manifest_json(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["subcommand"] = manifest.subcommand;
  j["config_hash"] = manifest.config_hash;
  j["version"] = manifest.version;
  j["seeds"] = nlohmann::json::array();
  j["outputs"] = manifest.outputs;
  nlohmann::ordered_json s = nlohmann::ordered_json::object();
  for (const auto& [k, v] : manifest.summary) s[k] = v;
  j["summary"] = s;
  return j.dump(2) + "\n";
}

std::string summary_text(const RunManifest& manifest) {
  std::ostringstream o;
  for (const auto& [k, v] : manifest.summary) o << k << '=' << v << '\n';
  return o.str();
}

}  // namespace atomgate
