#pragma once

#include <vector>

#include "cli/run_config.hpp"
#include "cli/table.hpp"
#include "modred/gaussian.hpp"

namespace modred::cli {

enum ExitCode : int { kSuccess = 0, kBoundViolation = 1, kConfigError = 2 };

struct CommandResult {
  Table table;
  int exit_code = kSuccess;
};

/// Law of the retained coordinate under the original and the reduced
/// dynamics. Closed forms where they exist, the generic propagator otherwise.
struct LawPair {
  Gaussian full;
  Gaussian reduced;
};
LawPair laws_at(const RunConfig& cfg, double t);

/// t,mean_full,var_full,mean_reduced,var_reduced,w2,w2_sq
CommandResult cmd_law(const RunConfig& cfg);

/// bound_name,t,exact_sq,bound,margin,satisfied; exit 1 on any violation.
CommandResult cmd_bounds(const RunConfig& cfg);

/// value,sup_w2_sq,bound,ratio for each sweep value.
CommandResult cmd_sweep(const RunConfig& cfg);

/// t,emp_mean,emp_var,emp_w2_vs_reduced,se_mean,se_var,se_w2,analytic_w2,z_score
CommandResult cmd_simulate(const RunConfig& cfg);

/// Record times for `simulate`: the explicit grid snapped to multiples of dt,
/// or {0.5, 1, 2} by default.
std::vector<double> simulation_times(const RunConfig& cfg);

}  // namespace modred::cli
