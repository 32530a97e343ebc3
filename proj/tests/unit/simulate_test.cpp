#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "rcr/simulate.hpp"

namespace rcr {
namespace {

ScenarioParams small_scenario() {
  ScenarioParams p;
  p.n = 32;
  p.kappa = 2.0;
  p.snr_db = 8.0;
  p.trials = 6;
  p.master_seed = 42;
  p.constellation = Constellation::qam(16);
  p.relaxation = RelaxationSet::default_for(p.constellation);
  return p;
}

struct Moments {
  double mean_modulus_sq = 0, modulus_sq_sd = 0, corr = 0, mean_re = 0;
  std::size_t count = 0;
};

template <class Range>
Moments moments(const Range& values) {
  Moments m;
  double s = 0, s2 = 0, sre = 0, sre2 = 0, sim2 = 0, sx = 0;
  for (const cplx& v : values) {
    const double q = std::norm(v);
    s += q;
    s2 += q * q;
    sre += v.real();
    sre2 += v.real() * v.real();
    sim2 += v.imag() * v.imag();
    sx += v.real() * v.imag();
    ++m.count;
  }
  const double n = static_cast<double>(m.count);
  m.mean_modulus_sq = s / n;
  m.modulus_sq_sd = std::sqrt(s2 / n - m.mean_modulus_sq * m.mean_modulus_sq);
  m.corr = sx / std::sqrt(sre2 * sim2);
  m.mean_re = sre / n;
  return m;
}

TEST(Channel, MomentsMatchUnitColumnPower) {
  Rng rng(1);
  const int n = 1000;
  const CMatrix H = gen_channel(rng, 1000, n);
  const auto m = moments(H.reshaped());
  const double N = static_cast<double>(m.count);
  EXPECT_NEAR(m.mean_modulus_sq, 1.0 / n, 4 * m.modulus_sq_sd / std::sqrt(N));
  EXPECT_NEAR(m.modulus_sq_sd, 1.0 / n, 0.01 / n);  // exponential law
  EXPECT_NEAR(m.corr, 0.0, 4 / std::sqrt(N));
  EXPECT_NEAR(m.mean_re, 0.0, 4 * std::sqrt(0.5 / n / N));
}

TEST(Noise, MomentsMatchVariance) {
  Rng rng(2);
  const double sigma_sq = 0.37;
  const CVector v = gen_noise(rng, 1'000'000, sigma_sq);
  const auto m = moments(v);
  const double N = static_cast<double>(m.count);
  EXPECT_NEAR(m.mean_modulus_sq, sigma_sq, 4 * m.modulus_sq_sd / std::sqrt(N));
  EXPECT_NEAR(m.corr, 0.0, 4 / std::sqrt(N));
  EXPECT_THROW(gen_noise(rng, 4, 0.0), ConfigError);
}

TEST(Generators, ReproducibleForFixedSeed) {
  Rng a(3), b(3);
  EXPECT_EQ(gen_channel(a, 5, 7), gen_channel(b, 5, 7));
  EXPECT_EQ(gen_noise(a, 9, 0.2), gen_noise(b, 9, 0.2));
}

TEST(Scenario, DerivedQuantities) {
  auto p = small_scenario();
  p.n = 128;
  p.kappa = 1.5;
  EXPECT_EQ(p.m(), 192);
  p.kappa = 2.0 / 3.0;  // 85.33 rounds down
  EXPECT_EQ(p.m(), 85);
  EXPECT_NEAR(p.realized_kappa(), 85.0 / 128, 1e-15);
  p.snr_db = 15.0;
  EXPECT_NEAR(p.sigma_sq(), std::pow(10.0, -1.5), 1e-15);
}

TEST(Scenario, Validation) {
  auto p = small_scenario();
  p.n = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = small_scenario();
  p.trials = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = small_scenario();
  p.kappa = 0.001;
  EXPECT_THROW(p.validate(), ConfigError);
  p = small_scenario();
  p.relaxation = RelaxationSet::disk(1.0);  // misses the QAM corners
  EXPECT_THROW(p.validate(), ConfigError);
  p = small_scenario();
  p.zeta = -0.1;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Trial, NearNoiselessRecovery) {
  auto p = small_scenario();
  p.snr_db = 120.0;
  p.solver.rel_tol = 1e-12;
  for (std::uint64_t i = 0; i < 3; ++i) {
    const auto t = run_trial(p, i);
    EXPECT_LT(t.mse, 1e-9);
    EXPECT_EQ(t.ser, 0.0);
  }
}

TEST(Trial, BitIdenticalPerIndex) {
  const auto p = small_scenario();
  const auto a = run_trial(p, 3), b = run_trial(p, 3), c = run_trial(p, 4);
  EXPECT_EQ(a.mse, b.mse);
  EXPECT_EQ(a.ser, b.ser);
  EXPECT_EQ(a.solver_iterations, b.solver_iterations);
  EXPECT_NE(a.mse, c.mse);
}

TEST(Trial, MetricsInRange) {
  auto p = small_scenario();
  p.snr_db = -5;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto t = run_trial(p, i);
    EXPECT_GE(t.mse, 0.0);
    EXPECT_GE(t.ser, 0.0);
    EXPECT_LE(t.ser, 1.0);
  }
}

TEST(Aggregate, SingleTrialEchoes) {
  auto p = small_scenario();
  p.trials = 1;
  const auto a = run_scenario(p);
  const auto t = run_trial(p, 0);
  EXPECT_EQ(a.mse_mean, t.mse);
  EXPECT_EQ(a.ser_mean, t.ser);
  EXPECT_EQ(a.mse_stderr, 0.0);
  EXPECT_EQ(a.ser_stderr, 0.0);
  EXPECT_EQ(a.trials_used, 1);
}

TEST(Aggregate, MatchesDirectStatistics) {
  const auto p = small_scenario();
  const auto a = run_scenario(p);
  std::vector<double> mse;
  for (int i = 0; i < p.trials; ++i) mse.push_back(run_trial(p, i).mse);
  const double mean = std::accumulate(mse.begin(), mse.end(), 0.0) / mse.size();
  double ss = 0;
  for (double v : mse) ss += (v - mean) * (v - mean);
  EXPECT_NEAR(a.mse_mean, mean, 1e-15);
  EXPECT_NEAR(a.mse_stderr, std::sqrt(ss / (mse.size() - 1) / mse.size()), 1e-15);
  EXPECT_GE(a.mse_mean, *std::min_element(mse.begin(), mse.end()));
  EXPECT_LE(a.mse_mean, *std::max_element(mse.begin(), mse.end()));
}

TEST(Aggregate, IndependentOfThreadCount) {
  auto p = small_scenario();
  p.trials = 9;
  const auto a = run_scenario(p, 1);
  for (int threads : {2, 3, 8}) {
    const auto b = run_scenario(p, threads);
    EXPECT_EQ(a.mse_mean, b.mse_mean);
    EXPECT_EQ(a.mse_stderr, b.mse_stderr);
    EXPECT_EQ(a.ser_mean, b.ser_mean);
    EXPECT_EQ(a.ser_stderr, b.ser_stderr);
  }
}

TEST(Aggregate, NonConvergedTrialsAreScored) {
  auto p = small_scenario();
  p.solver.max_iters = 1;
  const auto a = run_scenario(p);
  EXPECT_EQ(a.nonconverged_trials, p.trials);
  EXPECT_EQ(a.trials_used, p.trials);
}

TEST(Aggregate, ReceivePowerIsUnitOnAverage) {
  auto p = small_scenario();
  p.n = 64;
  std::vector<double> power;
  for (int i = 0; i < 200; ++i) power.push_back(run_trial(p, i).receive_power);
  const double mean = std::accumulate(power.begin(), power.end(), 0.0) / power.size();
  double ss = 0;
  for (double v : power) ss += (v - mean) * (v - mean);
  const double se = std::sqrt(ss / (power.size() - 1) / power.size());
  EXPECT_NEAR(mean, 1.0, 4 * se);
}

TEST(Sweep, SinglePointEqualsScenarioPlusPrediction) {
  const auto p = small_scenario();
  const std::vector<double> values{p.snr_db};
  const auto points = sweep(p, SweepAxis::snr_db, values);
  ASSERT_EQ(points.size(), 1u);
  ASSERT_TRUE(points[0].empirical && points[0].prediction);
  EXPECT_TRUE(points[0].error.empty());
  EXPECT_EQ(points[0].empirical->mse_mean, run_scenario(p).mse_mean);
  EXPECT_EQ(points[0].prediction->mse, predict(predictor_params_for(p)).mse);
}

TEST(Sweep, SnrGridShape) {
  auto p = small_scenario();
  p.constellation = Constellation::psk(16);
  p.relaxation = RelaxationSet::disk();
  p.n = 8;
  p.trials = 2;
  std::vector<double> snr;
  for (int s = -5; s <= 15; ++s) snr.push_back(s);
  const auto points = sweep(p, SweepAxis::snr_db, snr);
  ASSERT_EQ(points.size(), 21u);
  for (std::size_t i = 0; i < points.size(); ++i) {
    EXPECT_EQ(points[i].value, snr[i]);
    EXPECT_EQ(points[i].empirical->params.snr_db, snr[i]);
  }
}

TEST(Sweep, RecordsPerPointErrors) {
  auto p = small_scenario();
  const std::vector<double> zetas{0.1, -1.0, 0.2};
  const auto points = sweep(p, SweepAxis::zeta, zetas);
  ASSERT_EQ(points.size(), 3u);
  EXPECT_TRUE(points[0].error.empty());
  EXPECT_FALSE(points[1].error.empty());
  EXPECT_TRUE(points[2].error.empty());
}

TEST(PairwiseSum, ExactOnRepresentableValues) {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  EXPECT_EQ(pairwise_sum(v), 500500.0);
  EXPECT_EQ(pairwise_sum({}), 0.0);
  std::vector<double> tiny(1 << 20, 0.1);
  EXPECT_NEAR(pairwise_sum(tiny), 0.1 * (1 << 20), 1e-9);
}

}  // namespace
}  // namespace rcr
