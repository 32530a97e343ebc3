#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcr/constellation.hpp"
#include "rcr/detector.hpp"
#include "rcr/predictor.hpp"
#include "rcr/random.hpp"
#include "rcr/relaxation.hpp"

namespace rcr {

struct ScenarioParams {
  int n = 128;
  double kappa = 2.0;  // m = round(kappa * n)
  double snr_db = 10.0;
  double zeta = 0.0;
  Constellation constellation = Constellation::psk(16);
  RelaxationSet relaxation = RelaxationSet::disk(1.0);
  int trials = 50;
  std::uint64_t master_seed = 1;
  SolverSettings solver{};

  int m() const;
  double sigma_sq() const;
  double realized_kappa() const { return static_cast<double>(m()) / n; }
  /// Throws ConfigError. Also rejects relaxations that do not contain the
  /// alphabet.
  void validate() const;
};

struct TrialResult {
  double mse = 0.0;
  double ser = 0.0;
  int solver_iterations = 0;
  bool converged = false;
  double receive_power = 0.0;  // ||H s0||^2 / m
};

struct AggregateResult {
  double mse_mean = 0.0;
  double mse_stderr = 0.0;
  double ser_mean = 0.0;
  double ser_stderr = 0.0;
  int trials_used = 0;
  int nonconverged_trials = 0;
  int failed_trials = 0;
  ScenarioParams params;
};

/// m x n matrix with i.i.d. CN(0, 1/n) entries.
CMatrix gen_channel(Rng& rng, int m, int n);
/// Length-m vector with i.i.d. CN(0, sigma_sq) entries.
CVector gen_noise(Rng& rng, int m, double sigma_sq);

/// Draws s0, H and v (in that order) from the stream seeded by
/// (master_seed, trial_index), detects, and scores MSE and SER.
TrialResult run_trial(const ScenarioParams& p, std::uint64_t trial_index);

/// Runs all trials on `threads` workers. Aggregation is independent of the
/// worker count. Throws only when every trial failed.
AggregateResult run_scenario(const ScenarioParams& p, int threads = 1);

/// Predictor inputs matching a scenario (realized kappa = m/n).
PredictorParams predictor_params_for(const ScenarioParams& p);

enum class SweepAxis { snr_db, zeta };

struct SweepPoint {
  double value = 0.0;
  std::optional<AggregateResult> empirical;
  std::optional<Prediction> prediction;
  std::string error;  // empty on success
};

/// For each value, runs the scenario and the predictor with matched
/// parameters. Per-point failures are recorded and the sweep continues.
std::vector<SweepPoint> sweep(const ScenarioParams& base, SweepAxis axis, std::span<const double> values,
                              int threads = 1, SepChoice sep = SepChoice::automatic);

/// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> values);

}  // namespace rcr
