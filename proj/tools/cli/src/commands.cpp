#include "rcr_cli/commands.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "rcr/errors.hpp"

namespace rcr::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

Table make_table(const std::vector<std::string>& columns) {
  Table t;
  t.columns = columns;
  return t;
}

PredictorParams matched_predictor(const RunConfig& cfg, const ScenarioParams& s) {
  PredictorParams p = predictor_params_for(s);
  p.quadrature_nodes = cfg.quadrature_nodes;
  p.expectation = cfg.expectation;
  return p;
}

// Prediction that never throws SaddleError: an unconverged solve falls back
// to the metrics at the best iterate.
struct PredictOutcome {
  Prediction prediction;
  bool have_metrics = false;
  std::string error;
};

PredictOutcome predict_or_best(const PredictorParams& p, SepChoice sep) {
  PredictOutcome o;
  try {
    o.prediction = predict(p, sep);
    o.have_metrics = true;
  } catch (const SaddleError& e) {
    o.error = e.what();
    o.prediction.solution = e.best();
    o.prediction.solution.converged = false;
    try {
      o.prediction = evaluate_prediction(p, e.best(), sep);
      o.prediction.solution.converged = false;
      o.have_metrics = true;
    } catch (const NumericalError&) {
    }
  }
  return o;
}

std::vector<Cell> prediction_cells(const PredictOutcome& o) {
  const Prediction& pr = o.prediction;
  return {pr.solution.alpha_star,
          pr.solution.beta_star,
          o.have_metrics ? pr.mse : kNaN,
          o.have_metrics ? pr.sep : kNaN,
          std::string(to_string(pr.sep_method)),
          pr.solution.converged};
}

std::vector<Cell> empirical_cells(const AggregateResult& a) {
  return {a.mse_mean, a.mse_stderr, a.ser_mean, a.ser_stderr, static_cast<long long>(a.trials_used),
          static_cast<long long>(a.nonconverged_trials)};
}

std::vector<Cell> scenario_cells(const ScenarioParams& s) {
  return {s.kappa, s.snr_db, s.zeta, static_cast<long long>(s.n), static_cast<long long>(s.m()), s.realized_kappa()};
}

template <class F>
void for_grid(const RunConfig& cfg, F&& f) {
  for (double k : cfg.kappa)
    for (double snr : cfg.snr_db)
      for (double z : cfg.zeta) f(k, snr, z);
}

template <class Vec>
void append(Vec& dst, const Vec& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace

const std::vector<std::string>& predict_columns() {
  static const std::vector<std::string> c = {"kappa",    "snr_db",   "zeta",       "alpha_star", "beta_star",
                                             "mse_pred", "sep_pred", "sep_method", "converged"};
  return c;
}

const std::vector<std::string>& simulate_columns() {
  static const std::vector<std::string> c = {"kappa",    "snr_db",     "zeta",     "n",          "m",
                                             "kappa_realized", "mse_mean", "mse_stderr", "ser_mean", "ser_stderr",
                                             "trials",   "nonconverged_trials"};
  return c;
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> c = {
      "kappa",     "snr_db",   "zeta",     "n",          "m",         "kappa_realized", "alpha_star",
      "beta_star", "mse_pred", "sep_pred", "sep_method", "converged", "mse_mean",       "mse_stderr",
      "ser_mean",  "ser_stderr", "trials", "nonconverged_trials", "error"};
  return c;
}

const std::vector<std::string>& compare_columns() {
  static const std::vector<std::string> c = {"kappa",      "snr_db",   "zeta",       "mse_pred", "sep_pred",
                                             "sep_method", "mse_mean", "mse_stderr", "ser_mean", "ser_stderr",
                                             "trials",     "mse_rel_dev", "sep_sigma_dev"};
  return c;
}

const std::vector<std::string>& opt_zeta_columns() {
  static const std::vector<std::string> c = {"kappa", "snr_db", "zeta_star", "metric", "metric_value", "interior"};
  return c;
}

double relative_deviation(double empirical, double predicted) {
  const double diff = std::abs(empirical - predicted);
  if (diff == 0.0) return 0.0;
  if (predicted == 0.0) return kInf;
  return diff / std::abs(predicted);
}

double sigma_deviation(double ser, double sep, double stderr_value) {
  const double diff = std::abs(ser - sep);
  if (diff == 0.0) return 0.0;
  if (stderr_value == 0.0) return kInf;
  return diff / stderr_value;
}

CommandOutput cmd_predict(const RunConfig& cfg) {
  CommandOutput out;
  out.table = make_table(predict_columns());
  for_grid(cfg, [&](double k, double snr, double z) {
    const PredictOutcome o = predict_or_best(cfg.predictor(k, snr, z), cfg.sep);
    if (!o.prediction.solution.converged) {
      out.nonconverged = true;
      out.warnings.push_back(o.error);
    }
    std::vector<Cell> row{k, snr, z};
    append(row, prediction_cells(o));
    out.table.add_row(std::move(row));
  });
  return out;
}

CommandOutput cmd_simulate(const RunConfig& cfg) {
  CommandOutput out;
  out.table = make_table(simulate_columns());
  for_grid(cfg, [&](double k, double snr, double z) {
    const ScenarioParams s = cfg.scenario(k, snr, z);
    const AggregateResult a = run_scenario(s, cfg.threads);
    if (a.failed_trials > 0) {
      out.warnings.push_back(std::to_string(a.failed_trials) + " trial(s) failed and were skipped");
    }
    std::vector<Cell> row = scenario_cells(s);
    append(row, empirical_cells(a));
    out.table.add_row(std::move(row));
  });
  return out;
}

CommandOutput cmd_sweep(const RunConfig& cfg) {
  CommandOutput out;
  out.table = make_table(sweep_columns());
  const bool by_snr = cfg.axis == SweepAxis::snr_db;
  const std::vector<double>& axis_values = by_snr ? cfg.snr_db : cfg.zeta;
  const std::vector<double>& other_values = by_snr ? cfg.zeta : cfg.snr_db;
  for (double k : cfg.kappa) {
    for (double other : other_values) {
      ScenarioParams base = by_snr ? cfg.scenario(k, 0.0, other) : cfg.scenario(k, other, 0.0);
      base.validate();
      for (double value : axis_values) {
        ScenarioParams s = base;
        (by_snr ? s.snr_db : s.zeta) = value;
        std::vector<Cell> row = scenario_cells(s);
        std::string error;

        PredictOutcome o;
        try {
          o = predict_or_best(matched_predictor(cfg, s), cfg.sep);
        } catch (const NumericalError& e) {
          o.error = e.what();
        }
        if (!o.prediction.solution.converged) {
          out.nonconverged = true;
          error = o.error;
        }
        append(row, prediction_cells(o));

        try {
          append(row, empirical_cells(run_scenario(s, cfg.threads)));
        } catch (const NumericalError& e) {
          append(row, {kNaN, kNaN, kNaN, kNaN, 0LL, 0LL});
          error += (error.empty() ? "" : "; ") + std::string(e.what());
        }
        row.emplace_back(error);
        out.table.add_row(std::move(row));
      }
    }
  }
  return out;
}

namespace {

CommandOutput compare_run(const RunConfig& cfg) {
  CommandOutput out;
  out.table = make_table(compare_columns());
  for_grid(cfg, [&](double k, double snr, double z) {
    const ScenarioParams s = cfg.scenario(k, snr, z);
    s.validate();
    const PredictOutcome o = predict_or_best(matched_predictor(cfg, s), cfg.sep);
    if (!o.prediction.solution.converged) {
      out.nonconverged = true;
      out.warnings.push_back(o.error);
    }
    const AggregateResult a = run_scenario(s, cfg.threads);
    const double mse_pred = o.have_metrics ? o.prediction.mse : kNaN;
    const double sep_pred = o.have_metrics ? o.prediction.sep : kNaN;
    out.table.add_row({k, snr, z, mse_pred, sep_pred, std::string(to_string(o.prediction.sep_method)), a.mse_mean,
                       a.mse_stderr, a.ser_mean, a.ser_stderr, static_cast<long long>(a.trials_used),
                       relative_deviation(a.mse_mean, mse_pred), sigma_deviation(a.ser_mean, sep_pred, a.ser_stderr)});
  });
  return out;
}

using JoinKey = std::tuple<double, double, double>;

std::string key_text(const JoinKey& k) {
  return "kappa=" + format_double(std::get<0>(k)) + ", snr_db=" + format_double(std::get<1>(k)) +
         ", zeta=" + format_double(std::get<2>(k));
}

JoinKey row_key(const CsvData& d, const std::vector<std::string>& row) {
  return {parse_double_field(row[d.column("kappa")]), parse_double_field(row[d.column("snr_db")]),
          parse_double_field(row[d.column("zeta")])};
}

CommandOutput compare_join(const RunConfig& cfg) {
  const CsvData pred = read_csv_file(cfg.predictions);
  const CsvData emp = read_csv_file(cfg.empirical);
  CommandOutput out;
  out.table = make_table(compare_columns());

  std::map<JoinKey, std::size_t> emp_rows;
  for (std::size_t i = 0; i < emp.rows.size(); ++i) {
    if (!emp_rows.emplace(row_key(emp, emp.rows[i]), i).second) {
      throw ConfigError("empirical file repeats " + key_text(row_key(emp, emp.rows[i])));
    }
  }
  std::vector<std::string> missing;
  std::map<JoinKey, bool> used;
  for (const auto& prow : pred.rows) {
    const JoinKey key = row_key(pred, prow);
    const auto it = emp_rows.find(key);
    if (it == emp_rows.end()) {
      missing.push_back("no empirical row for " + key_text(key));
      continue;
    }
    if (used[key]) throw ConfigError("predictions file repeats " + key_text(key));
    used[key] = true;
    const auto& erow = emp.rows[it->second];
    const double mse_pred = parse_double_field(prow[pred.column("mse_pred")]);
    const double sep_pred = parse_double_field(prow[pred.column("sep_pred")]);
    const double mse_mean = parse_double_field(erow[emp.column("mse_mean")]);
    const double ser_mean = parse_double_field(erow[emp.column("ser_mean")]);
    const double ser_stderr = parse_double_field(erow[emp.column("ser_stderr")]);
    out.table.add_row({std::get<0>(key), std::get<1>(key), std::get<2>(key), mse_pred, sep_pred,
                       prow[pred.column("sep_method")], mse_mean, parse_double_field(erow[emp.column("mse_stderr")]),
                       ser_mean, ser_stderr,
                       static_cast<long long>(std::llround(parse_double_field(erow[emp.column("trials")]))),
                       relative_deviation(mse_mean, mse_pred), sigma_deviation(ser_mean, sep_pred, ser_stderr)});
  }
  for (const auto& [key, idx] : emp_rows) {
    if (!used.count(key)) missing.push_back("no prediction row for " + key_text(key));
  }
  if (!missing.empty()) {
    std::string msg = "predictions and empirical rows do not match:";
    for (const auto& m : missing) msg += "\n" + m;
    throw ConfigError(msg);
  }
  return out;
}

}  // namespace

CommandOutput cmd_compare(const RunConfig& cfg) {
  return cfg.predictions.empty() ? compare_run(cfg) : compare_join(cfg);
}

CommandOutput cmd_opt_zeta(const RunConfig& cfg) {
  CommandOutput out;
  out.table = make_table(opt_zeta_columns());
  const std::string metric = cfg.metric == ZetaMetric::mse ? "mse" : "sep";
  for (double k : cfg.kappa) {
    for (double snr : cfg.snr_db) {
      try {
        const ZetaOptimum z = optimal_zeta(cfg.predictor(k, snr, 0.0), cfg.metric, cfg.zeta_max, cfg.sep);
        out.table.add_row({k, snr, z.zeta, metric, z.value, z.interior});
      } catch (const SaddleError& e) {
        out.nonconverged = true;
        out.warnings.push_back(e.what());
        out.table.add_row({k, snr, kNaN, metric, kNaN, false});
      }
    }
  }
  return out;
}

CommandOutput run_command(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::predict: return cmd_predict(cfg);
    case Command::simulate: return cmd_simulate(cfg);
    case Command::sweep: return cmd_sweep(cfg);
    case Command::compare: return cmd_compare(cfg);
    case Command::opt_zeta: return cmd_opt_zeta(cfg);
  }
  return cmd_predict(cfg);
}

}  // namespace rcr::cli
