// atomgate: command-line front end for the gate-protocol simulations.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "atomgate/errors.hpp"
#include "atomgate/harness.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_convergence = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace atomgate;
  CLI::App app{"Simulator of a selective two-qubit gate for atoms in near-field traps"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  long grid_points = -1;
  double dt_tau = -1.0;
  int dim = 0;
  int jobs = 1;

  for (const std::string& name : subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "YAML configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (default: config, then $ATOMGATE_OUT)");
    sub->add_option("--grid-points", grid_points, "points per grid axis")->check(CLI::PositiveNumber);
    sub->add_option("--dt-tau", dt_tau, "real-time step in hbar/E_r")->check(CLI::PositiveNumber);
    sub->add_option("--dim", dim, "simulation dimensionality")->check(CLI::Range(1, 3));
    sub->add_option("--jobs", jobs, "concurrent sweep jobs")->check(CLI::PositiveNumber);
  }

  CLI11_PARSE(app, argc, argv);
  const std::string subcommand = app.get_subcommands().front()->get_name();

  try {
    ScenarioConfig cfg = load_config(config_path);
    if (grid_points > 0) {
      cfg.grid.step1_points = grid_points;
      cfg.grid.transport_points = grid_points;
    }
    if (dt_tau > 0.0) cfg.propagator.dt = dt_tau;
    if (dim > 0) {
      cfg.grid.step1_dim = dim;
      cfg.grid.transport_dim = dim;
    }
    validate(cfg);
    RunOptions options;
    options.output_directory = resolve_output_directory(cfg, out_dir);
    options.jobs = jobs;
    const RunManifest manifest = run_scenario(cfg, subcommand, options);
    std::cout << summary_text(manifest);
    std::cout << "outputs=" << options.output_directory << '\n';
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "atomgate: " << e.what() << '\n';
    return exit_config;
  } catch (const ConvergenceError& e) {
    std::cerr << "atomgate: " << e.what() << '\n';
    return exit_convergence;
  } catch (const InstabilityError& e) {
    std::cerr << "atomgate: " << e.what() << '\n';
    return exit_convergence;
  } catch (const NotFound& e) {
    std::cerr << "atomgate: " << e.what() << '\n';
    return exit_convergence;
  } catch (const std::exception& e) {
    std::cerr << "atomgate: " << e.what() << '\n';
    return 1;
  }
}
