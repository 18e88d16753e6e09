#pragma once

// Entry points behind the command-line subcommands. Each returns the process
// exit status: 0 success, 1 config error, 2 solver failure, 3 invariant
// violation. Artifacts land in $CROSSDIFF_OUTPUT_DIR (default: the working
// directory), one file set per run, named after the scenario.

#include <string>
#include <vector>

namespace crossdiff::cli {

int simulate_command(const std::string& config_path);

// Runs one member per (etas[i], grids[i]) pair concurrently, emits the
// per-member artifacts plus the weak-residual and Cauchy-distance tables,
// and prints a PASS/FAIL line for each cross-member trend.
int sweep_command(const std::string& config_path, const std::vector<double>& etas,
                  const std::vector<int>& grids, int mode_count = 8);

// Evaluates the xi bound battery and the defining-ODE residual for the
// configured law across a viscosity ladder.
int check_xi_command(const std::string& config_path);

// Verifies the structural requirements of the configured scenario: law
// admissibility, initial-data normalization and positivity, potential
// boundary compatibility, and potential-difference regularity.
int check_hypothesis_command(const std::string& config_path);

// Resolves CROSSDIFF_OUTPUT_DIR (default ".") and creates it if needed.
std::string output_directory();

}  // namespace crossdiff::cli
