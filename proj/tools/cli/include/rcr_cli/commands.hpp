#pragma once

#include <string>
#include <vector>

#include "rcr_cli/config.hpp"
#include "rcr_cli/table.hpp"

namespace rcr::cli {

struct CommandOutput {
  Table table;
  // Set when any saddle solve stopped short; rows are still emitted.
  bool nonconverged = false;
  std::vector<std::string> warnings;
};

// Column orders. These are part of the output format.
const std::vector<std::string>& predict_columns();
const std::vector<std::string>& simulate_columns();
const std::vector<std::string>& sweep_columns();
const std::vector<std::string>& compare_columns();
const std::vector<std::string>& opt_zeta_columns();

// Parameter grids are walked kappa-major, then snr_db, then zeta.
CommandOutput cmd_predict(const RunConfig& cfg);
CommandOutput cmd_simulate(const RunConfig& cfg);
CommandOutput cmd_sweep(const RunConfig& cfg);
/// Runs matched predictions and simulations, or joins the two CSV files
/// named by cfg.predictions / cfg.empirical on (kappa, snr_db, zeta).
CommandOutput cmd_compare(const RunConfig& cfg);
CommandOutput cmd_opt_zeta(const RunConfig& cfg);

CommandOutput run_command(const RunConfig& cfg);

/// |empirical - predicted| / predicted; inf when predicted is 0 and they differ.
double relative_deviation(double empirical, double predicted);
/// |ser - sep| / stderr; inf when stderr is 0 and they differ, 0 when equal.
double sigma_deviation(double ser, double sep, double stderr_value);

}  // namespace rcr::cli
