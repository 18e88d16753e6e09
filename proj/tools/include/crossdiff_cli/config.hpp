#pragma once

// JSON config loading for the command-line driver. Validation walks the whole
// document and reports every violation with its dotted key path instead of
// stopping at the first problem.

#include "crossdiff/solver.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace crossdiff::cli {

struct ConfigViolation {
  std::string key;  // dotted key path, e.g. "pressure.alpha"
  std::string message;
};

// A validated run bundle. rebind rebuilds the same scenario at another
// viscosity and cell count (presets, sampled inputs, and mollification are
// re-evaluated on the new grid), which is what sweeps consume;
// rebind(config.eta, config.grid.n) reproduces config itself. rebind throws
// std::invalid_argument when the requested pair is infeasible.
struct Scenario {
  std::string name;
  RunConfig config;
  std::function<RunConfig(double eta, int n)> rebind;
};

struct ParseResult {
  std::optional<Scenario> scenario;  // engaged iff violations is empty
  std::vector<ConfigViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Reads and validates the file at path. Unreadable files and JSON syntax
// errors throw std::runtime_error; content problems become violations.
ParseResult parse_config(const std::string& path);

}  // namespace crossdiff::cli
