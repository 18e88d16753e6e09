// Command-line driver for the cross-diffusion simulator. Subcommands:
//   simulate          one run with full artifacts and invariant verdicts
//   sweep             joint (eta, n) refinement with residual and Cauchy tables
//   check-xi          xi/xi_eta bound battery and defining-ODE residuals
//   check-hypothesis  structural admissibility audit of the configured scenario

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crossdiff_cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"structure-preserving solver for two-species cross-diffusion"};
  app.require_subcommand(1);

  std::string sim_config;
  CLI::App* simulate = app.add_subcommand("simulate", "run one configured scenario");
  simulate->add_option("--config", sim_config, "JSON scenario file")->required();

  std::string sweep_config;
  std::vector<double> etas;
  std::vector<int> grids;
  int modes = 8;
  CLI::App* sweep =
      app.add_subcommand("sweep", "run a joint viscosity/resolution refinement");
  sweep->add_option("--config", sweep_config, "JSON scenario file")->required();
  sweep->add_option("--etas", etas, "member viscosities, one per run")->required();
  sweep->add_option("--grids", grids, "member cell counts, one per run")->required();
  sweep->add_option("--modes", modes, "highest test-function mode (default 8)");

  std::string xi_config;
  CLI::App* check_xi =
      app.add_subcommand("check-xi", "evaluate the xi bound battery");
  check_xi->add_option("--config", xi_config, "JSON scenario file")->required();

  std::string hyp_config;
  CLI::App* check_hyp =
      app.add_subcommand("check-hypothesis", "audit the structural requirements");
  check_hyp->add_option("--config", hyp_config, "JSON scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (simulate->parsed()) return crossdiff::cli::simulate_command(sim_config);
  if (sweep->parsed())
    return crossdiff::cli::sweep_command(sweep_config, etas, grids, modes);
  if (check_xi->parsed()) return crossdiff::cli::check_xi_command(xi_config);
  if (check_hyp->parsed()) return crossdiff::cli::check_hypothesis_command(hyp_config);
  return 1;
}
