#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "atomgate/config.hpp"
#include "atomgate/protocol.hpp"

namespace atomgate {

/// What a run produced. Deterministic runs need no seeds.
struct RunManifest {
  std::string subcommand;
  std::string config_hash;
  std::string version;
  std::vector<std::string> outputs;  // paths relative to the output directory
  std::vector<std::pair<std::string, std::string>> summary;  // key=value, in report order
};

struct RunOptions {
  std::string output_directory;  // resolved by resolve_output_directory
  int jobs = 1;
};

/// The subcommands accepted by run_scenario.
const std::vector<std::string>& subcommands();

/// Explicit override, then the config, then ATOMGATE_OUT, then ./atomgate_out.
std::string resolve_output_directory(const ScenarioConfig& cfg, const std::string& override_dir);

/// Scaled trap and lattice for a config.
ModelParams model_for(const ScenarioConfig& cfg);
Grid step1_grid_for(const ScenarioConfig& cfg, const ModelParams& model);
Grid transport_grid_for(const ScenarioConfig& cfg, const ModelParams& model);
PropagatorConfig propagator_for(const ScenarioConfig& cfg);
GroundStateConfig ground_state_for(const ScenarioConfig& cfg);

/// Fidelity for each value of a sweepable parameter, in input order;
/// values are evaluated on up to `jobs` threads.
/// T_F: Step 1 at that ramp time; T_OL: Step 2 at that transport time;
/// n: Step 2 at the configured T_OL; V_0, U_0 (E_r): Step 1 at the
/// configured T_F.
std::vector<std::pair<double, double>> sweep_fidelities(const ScenarioConfig& cfg,
                                                        const std::string& parameter,
                                                        const std::vector<double>& values,
                                                        int jobs = 1);

/// Runs one subcommand, writing CSVs, summary.txt, config.yaml and
/// manifest.json into the output directory.
RunManifest run_scenario(const ScenarioConfig& cfg, const std::string& subcommand,
                         const RunOptions& options);

/// Sweep with an explicit parameter and values; writes sweep.csv.
RunManifest sweep(const ScenarioConfig& cfg, const std::string& parameter,
                  const std::vector<double>& values, const RunOptions& options);

std::string manifest_json(const RunManifest& manifest);

/// `key=value` lines.
std::string summary_text(const RunManifest& manifest);

}  // namespace atomgate
