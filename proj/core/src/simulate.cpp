#include "rcr/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "rcr/errors.hpp"

namespace rcr {

int ScenarioParams::m() const { return static_cast<int>(std::lround(kappa * n)); }

double ScenarioParams::sigma_sq() const { return std::pow(10.0, -snr_db / 10.0); }

void ScenarioParams::validate() const {
  if (n < 1) throw ConfigError("n must be >= 1");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be positive and finite");
  if (m() < 1) throw ConfigError("m = round(kappa * n) must be >= 1");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (!std::isfinite(snr_db)) throw ConfigError("snr_db must be finite");
  if (!(zeta >= 0.0) || !std::isfinite(zeta)) throw ConfigError("zeta must be nonnegative and finite");
  if (!relaxation.contains_all(constellation)) {
    throw ConfigError("relaxation " + relaxation.name() + " does not contain every " + constellation.name() +
                      " point");
  }
  solver.validate();
}

CMatrix gen_channel(Rng& rng, int m, int n) {
  std::normal_distribution<double> part(0.0, std::sqrt(0.5 / n));
  CMatrix H(m, n);
  for (Eigen::Index j = 0; j < H.cols(); ++j) {
    for (Eigen::Index i = 0; i < H.rows(); ++i) {
      const double re = part(rng);
      const double im = part(rng);
      H(i, j) = cplx(re, im);
    }
  }
  return H;
}

CVector gen_noise(Rng& rng, int m, double sigma_sq) {
  if (!(sigma_sq > 0.0)) throw ConfigError("noise variance must be positive");
  std::normal_distribution<double> part(0.0, std::sqrt(0.5 * sigma_sq));
  CVector v(m);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = part(rng);
    const double im = part(rng);
    v(i) = cplx(re, im);
  }
  return v;
}

TrialResult run_trial(const ScenarioParams& p, std::uint64_t trial_index) {
  Rng rng = make_trial_rng(p.master_seed, trial_index);
  const int m = p.m();
  const auto indices = p.constellation.sample_indices(rng, static_cast<std::size_t>(p.n));
  CVector s0(p.n);
  for (int i = 0; i < p.n; ++i) s0(i) = p.constellation.point(indices[static_cast<std::size_t>(i)]);
  const CMatrix H = gen_channel(rng, m, p.n);
  const CVector v = gen_noise(rng, m, p.sigma_sq());
  const CVector clean = H * s0;
  const CVector r = clean + v;

  const DetectionOutcome out = detect(H, r, p.zeta, p.relaxation, p.constellation, p.solver);

  TrialResult t;
  t.mse = (s0 - out.s_hat).squaredNorm() / p.n;
  int wrong = 0;
  for (int i = 0; i < p.n; ++i) {
    if (out.s_star(i) != s0(i)) ++wrong;
  }
  t.ser = static_cast<double>(wrong) / p.n;
  t.solver_iterations = out.iterations;
  t.converged = out.converged;
  t.receive_power = clean.squaredNorm() / m;
  return t;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

void mean_and_stderr(const std::vector<double>& xs, double& mean, double& stderr_out) {
  const auto count = static_cast<double>(xs.size());
  mean = pairwise_sum(xs) / count;
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  mean = std::clamp(mean, *lo, *hi);
  if (xs.size() < 2) {
    stderr_out = 0.0;
    return;
  }
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - mean) * (xs[i] - mean);
  stderr_out = std::sqrt(pairwise_sum(sq) / (count - 1.0)) / std::sqrt(count);
}

}  // namespace

AggregateResult run_scenario(const ScenarioParams& p, int threads) {
  p.validate();
  const auto trials = static_cast<std::size_t>(p.trials);
  std::vector<std::optional<TrialResult>> results(trials);
  std::vector<std::exception_ptr> errors(trials);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < trials; i = next++) {
      try {
        results[i] = run_trial(p, i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(threads, 1, p.trials);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  AggregateResult agg;
  agg.params = p;
  std::vector<double> mse;
  std::vector<double> ser;
  for (std::size_t i = 0; i < trials; ++i) {
    if (!results[i]) {
      ++agg.failed_trials;
      continue;
    }
    mse.push_back(results[i]->mse);
    ser.push_back(results[i]->ser);
    if (!results[i]->converged) ++agg.nonconverged_trials;
  }
  if (mse.empty()) std::rethrow_exception(errors.front());
  agg.trials_used = static_cast<int>(mse.size());
  mean_and_stderr(mse, agg.mse_mean, agg.mse_stderr);
  mean_and_stderr(ser, agg.ser_mean, agg.ser_stderr);
  return agg;
}

PredictorParams predictor_params_for(const ScenarioParams& p) {
  PredictorParams q;
  q.kappa = p.realized_kappa();
  q.sigma_sq = p.sigma_sq();
  q.zeta = p.zeta;
  q.constellation = p.constellation;
  q.relaxation = p.relaxation;
  return q;
}

std::vector<SweepPoint> sweep(const ScenarioParams& base, SweepAxis axis, std::span<const double> values,
                              int threads, SepChoice sep) {
  std::vector<SweepPoint> out;
  out.reserve(values.size());
  for (double value : values) {
    SweepPoint point;
    point.value = value;
    ScenarioParams p = base;
    (axis == SweepAxis::snr_db ? p.snr_db : p.zeta) = value;
    try {
      point.empirical = run_scenario(p, threads);
      point.prediction = predict(predictor_params_for(p), sep);
    } catch (const SaddleError& e) {
      try {
        point.prediction = evaluate_prediction(predictor_params_for(p), e.best(), sep);
      } catch (const std::exception&) {
        Prediction partial;
        partial.solution = e.best();
        point.prediction = partial;
      }
      point.error = e.what();
    } catch (const std::exception& e) {
      point.error = e.what();
    }
    out.push_back(std::move(point));
  }
  return out;
}

}  // namespace rcr
