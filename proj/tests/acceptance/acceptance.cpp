// Acceptance runner. `rcr_acceptance <id>` runs one criterion, no argument
// runs all of them. Prints one PASS/FAIL line per criterion and exits
// non-zero if any gating criterion failed.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "grid_oracle.hpp"
#include "oracles.hpp"
#include "rcr/detector.hpp"
#include "rcr/predictor.hpp"
#include "rcr/simulate.hpp"
#include "rcr_cli/app.hpp"
#include "rcr_cli/commands.hpp"
#include "rcr_cli/config.hpp"

namespace {

using namespace rcr;

struct Outcome {
  bool pass = true;
  bool gating = true;
  std::string summary;
};

// Collects detail lines and the overall verdict.
class Check {
 public:
  void expect(bool ok, const std::string& detail) {
    if (!ok) pass_ = false;
    std::printf("    %s %s\n", ok ? "ok  " : "FAIL", detail.c_str());
  }
  bool pass() const { return pass_; }

 private:
  bool pass_ = true;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

cli::CommandOutput run_compare(const char* constellation, const char* relaxation, int threads = 1) {
  const cli::KeyValues kv = {{"constellation", constellation}, {"relaxation", relaxation}, {"kappa", "2"},
                             {"n", "128"}, {"zeta", "[0, 0.1]"}, {"snr_db", "[0, 5, 10]"}, {"trials", "50"},
                             {"seed", "1"}, {"threads", std::to_string(threads)}};
  return cli::cmd_compare(cli::build_run_config(cli::Command::compare, kv, {}));
}

Outcome prediction_consistency(const char* constellation, const char* relaxation) {
  Check check;
  const auto out = run_compare(constellation, relaxation);
  const auto& cols = out.table.columns;
  auto col = [&](const char* name) { return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), name) - cols.begin()); };
  double worst_mse = 0, worst_sep = 0;
  for (const auto& row : out.table.rows) {
    const double snr = std::get<double>(row[col("snr_db")]);
    const double zeta = std::get<double>(row[col("zeta")]);
    const double mse_dev = std::get<double>(row[col("mse_rel_dev")]);
    const double sep_dev = std::get<double>(row[col("sep_sigma_dev")]);
    worst_mse = std::max(worst_mse, mse_dev);
    worst_sep = std::max(worst_sep, sep_dev);
    check.expect(mse_dev <= 0.10 && sep_dev <= 3.0,
                 fmt("snr=%g zeta=%g  mse pred %.5f emp %.5f (rel dev %.4f)  sep pred %.5f emp %.5f (%.2f sigma)", snr,
                     zeta, std::get<double>(row[col("mse_pred")]), std::get<double>(row[col("mse_mean")]), mse_dev,
                     std::get<double>(row[col("sep_pred")]), std::get<double>(row[col("ser_mean")]), sep_dev));
  }
  check.expect(out.table.rows.size() == 6 && !out.nonconverged, "6 converged grid points");
  return {check.pass(), true,
          fmt("%s/%s worst mse_rel_dev %.4f (<= 0.10), worst sep_sigma_dev %.2f (<= 3)", constellation, relaxation,
              worst_mse, worst_sep)};
}

Outcome criterion_1() { return prediction_consistency("qam16", "box"); }
Outcome criterion_2() { return prediction_consistency("psk16", "disk"); }

Outcome criterion_3() {
  PredictorParams p;
  p.kappa = 2;
  p.sigma_sq = 1;
  p.zeta = 0;
  p.constellation = Constellation::qam(16);
  p.relaxation = RelaxationSet::unconstrained();
  const auto pr = predict(p);
  const double da = std::abs(pr.solution.alpha_star - 1 / std::sqrt(2.0));
  const double dm = std::abs(pr.mse - 1.0);
  return {da <= 1e-6 && dm <= 1e-6, true,
          fmt("alpha* = %.10f (|err| %.2e), mse = %.10f (|err| %.2e), tol 1e-6", pr.solution.alpha_star, da, pr.mse, dm)};
}

Outcome criterion_4() {
  Check check;
  for (int m : {4, 16}) {
    PredictorParams p;
    p.zeta = 0;
    p.constellation = Constellation::psk(m);
    p.relaxation = RelaxationSet::disk();
    for (double alpha : {0.1, 0.3, 1.0}) {
      SaddleSolution s;
      s.alpha_star = alpha;
      s.beta_star = 1.0;
      s.converged = true;
      const double closed = predict_sep_psk(alpha, m);
      const double generic = predict_sep_generic(s, p).value;
      check.expect(std::abs(closed - generic) <= 1e-3,
                   fmt("M=%d alpha*=%.1f closed form %.6f generic %.6f |diff| %.2e (<= 1e-3)", m, alpha, closed, generic,
                       std::abs(closed - generic)));
    }
  }
  const double limit = predict_sep_psk(1e6, 16);
  check.expect(std::abs(limit - 0.875) <= 1e-3, fmt("M=16 alpha*=1e6 closed form %.6f (0.875 +- 1e-3)", limit));
  return {check.pass(), true, "PSK closed form vs generic symbol-error evaluator"};
}

Outcome criterion_5() {
  Check check;
  const auto c = Constellation::qam(16);
  const auto box = RelaxationSet::default_for(c);
  SolverSettings settings;
  settings.rel_tol = 1e-12;
  double worst = -INFINITY;
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = make_trial_rng(2024, i);
    const auto symbols = c.sample(rng, 2);
    const CVector s0 = Eigen::Map<const CVector>(symbols.data(), 2);
    const CMatrix H = gen_channel(rng, 4, 2);
    const CVector r = H * s0 + gen_noise(rng, 4, 0.1);
    const double zeta = (i % 2 == 0) ? 0.0 : 0.1;
    const auto out = rcr_solve(H, r, zeta, box, settings);
    const auto oracle = testing::box_grid_oracle(H, r, zeta, box.halfwidth(), 401);
    const double margin = out.final_objective - (oracle.objective + oracle.resolution_bound);
    worst = std::max(worst, out.final_objective - oracle.objective);
    check.expect(margin <= 0.0, fmt("instance %2d zeta=%.1f solver %.12f grid %.12f bound %.2e", static_cast<int>(i), zeta,
                                    out.final_objective, oracle.objective, oracle.resolution_bound));
  }
  return {check.pass(), true, fmt("20 instances, max(solver - grid) = %.3e", worst)};
}

Outcome criterion_6() {
  Check check;
  PredictorParams p;
  p.kappa = 1.5;
  p.sigma_sq = std::pow(10.0, -1.5);
  p.constellation = Constellation::qam(16);
  p.relaxation = RelaxationSet::default_for(p.constellation);
  const double zeta_max = 2.0;
  const auto opt = optimal_zeta(p, ZetaMetric::mse, zeta_max);
  p.zeta = 0;
  const double at_zero = predict(p).mse;
  check.expect(opt.interior && opt.zeta > 0 && opt.value < at_zero,
               fmt("predicted: zeta* = %.6g (interior=%d), mse(zeta*) = %.6f, mse(0) = %.6f", opt.zeta,
                   static_cast<int>(opt.interior), opt.value, at_zero));

  ScenarioParams s;
  s.n = 128;
  s.kappa = 1.5;
  s.snr_db = 15;
  s.constellation = p.constellation;
  s.relaxation = p.relaxation;
  s.trials = 50;
  s.zeta = 0;
  const auto e0 = run_scenario(s);
  s.zeta = opt.zeta;
  const auto e1 = run_scenario(s);
  const double se = std::hypot(e0.mse_stderr, e1.mse_stderr);
  check.expect(e1.mse_mean < e0.mse_mean + 2 * se,
               fmt("empirical: mse(zeta*) = %.6f, mse(0) = %.6f, 2 stderr = %.6f", e1.mse_mean, e0.mse_mean, 2 * se));
  return {check.pass(), true, "interior optimal regularization for 16-QAM/box, kappa=1.5, SNR 15 dB"};
}

Outcome criterion_7() {
  Check check;
  for (const char* name : {"qam16", "psk16"}) {
    for (double zeta : {0.0, 0.1}) {
      for (double snr : {5.0, 10.0, 15.0}) {
        ScenarioParams s;
        s.n = 128;
        s.kappa = 2;
        s.snr_db = snr;
        s.zeta = zeta;
        s.trials = 50;
        s.constellation = Constellation::from_name(name);
        s.relaxation = RelaxationSet::default_for(s.constellation);
        const auto rcr = run_scenario(s);
        s.relaxation = RelaxationSet::unconstrained();
        const auto rls = run_scenario(s);
        const double gap = rls.mse_mean - rcr.mse_mean;
        const double se = std::hypot(rcr.mse_stderr, rls.mse_stderr);
        check.expect(gap > 2 * se, fmt("%s zeta=%.1f snr=%2.0f  rcr %.5f  rls %.5f  gap %.5f > 2se %.5f", name, zeta, snr,
                                       rcr.mse_mean, rls.mse_mean, gap, 2 * se));
      }
    }
  }
  return {check.pass(), true, "relaxed detector beats unconstrained least squares in empirical MSE"};
}

Outcome criterion_8() {
  const double target = 0.0201182;
  PredictorParams p;
  p.kappa = 2;
  p.sigma_sq = std::pow(10.0, -1.5);
  p.constellation = Constellation::psk(16);
  p.relaxation = RelaxationSet::disk();
  double best_zeta = 0, best_err = INFINITY;
  for (int i = 0; i <= 200; ++i) {
    p.zeta = i / 200.0;
    const double err = std::abs(predict(p).mse - target) / target;
    if (err < best_err) {
      best_err = err;
      best_zeta = p.zeta;
    }
  }
  // refine around the best grid point
  double lo = std::max(0.0, best_zeta - 0.005), hi = std::min(1.0, best_zeta + 0.005);
  for (int it = 0; it < 60; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    p.zeta = m1;
    const double e1 = std::abs(predict(p).mse - target);
    p.zeta = m2;
    const double e2 = std::abs(predict(p).mse - target);
    (e1 < e2 ? hi : lo) = (e1 < e2 ? m2 : m1);
  }
  p.zeta = 0.5 * (lo + hi);
  const double mse = predict(p).mse;
  best_err = std::abs(mse - target) / target;
  return {best_err <= 0.15, false,
          fmt("best-fit zeta = %.6f gives predicted mse %.7f vs 0.0201182 (rel err %.2e, soft tol 0.15)", p.zeta, mse,
              best_err)};
}

Outcome criterion_9() {
  auto run_csv = [](int threads) {
    const std::vector<std::string> args = {"rcr",      "compare", "--constellation", "qam16", "--relaxation", "box",
                                           "--kappa",  "2",       "--n",             "128",   "--zeta",       "[0, 0.1]",
                                           "--snr-db", "[0, 5, 10]", "--trials",     "50",    "--seed",       "1",
                                           "--threads", std::to_string(threads)};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return std::pair{code, out.str()};
  };
  const auto [c1, one] = run_csv(1);
  const auto [c4, four] = run_csv(4);
  const auto [c1b, again] = run_csv(1);
  const bool ok = c1 == 0 && c4 == 0 && c1b == 0 && one == four && one == again && !one.empty();
  return {ok, true, fmt("criterion-1 compare CSV (%zu bytes) identical for threads=1, threads=4 and a repeat run", one.size())};
}

Outcome properties() {
  Check check;
  Rng rng(77);
  std::normal_distribution<double> g(0.0, 2.0);

  bool idem = true, nonexp = true;
  for (const auto& v : {RelaxationSet::disk(), RelaxationSet::box(3 / std::sqrt(10.0)), RelaxationSet::unconstrained()}) {
    for (int i = 0; i < 100000; ++i) {
      const cplx a(g(rng), g(rng)), b(g(rng), g(rng));
      const cplx pa = v.project(a);
      idem &= v.project(pa) == pa;
      nonexp &= std::abs(pa - v.project(b)) <= std::abs(a - b) * (1 + 1e-12);
    }
  }
  check.expect(idem && nonexp, "projection idempotent and nonexpansive (3 sets x 1e5 pairs)");

  std::uniform_real_distribution<double> u(0.05, 2.5);
  bool convex_concave = true;
  for (double kappa : {1.2, 1.5, 2.0, 3.0, 5.0}) {
    for (double sigma_sq : {0.03, 0.1, 0.3, 1.0, 3.0}) {
      PredictorParams p;
      p.kappa = kappa;
      p.sigma_sq = sigma_sq;
      p.zeta = 0.05;
      for (int t = 0; t < 50; ++t) {
        const double beta = u(rng), a1 = u(rng), a2 = u(rng);
        const double rhs = 0.5 * (objective(p, a1, beta) + objective(p, a2, beta));
        convex_concave &= objective(p, 0.5 * (a1 + a2), beta) <= rhs + 1e-10 * (1 + std::abs(rhs));
        const double alpha = u(rng), b1 = u(rng), b2 = u(rng);
        const double avg = 0.5 * (objective(p, alpha, b1) + objective(p, alpha, b2));
        convex_concave &= objective(p, alpha, 0.5 * (b1 + b2)) >= avg - 1e-10 * (1 + std::abs(avg));
      }
    }
  }
  check.expect(convex_concave, "saddle objective convex in alpha, concave in beta (25 params x 50 probes)");

  {
    PredictorParams p;
    p.constellation = Constellation::psk(16);
    p.relaxation = RelaxationSet::disk();
    const double value = expectation_dist_sq(p, 0.8, 0.5);
    const auto mc = testing::mc_expectation_dist_sq(p.constellation, p.relaxation, 0.8, 0.5, 10'000'000, 5);
    check.expect(std::abs(value - mc.mean) <= 3 * mc.stderr_value,
                 fmt("expectation %.8f vs Monte-Carlo %.8f +- %.1e", value, mc.mean, mc.stderr_value));
  }

  {
    const auto c = Constellation::qam(16);
    Rng trial(9);
    const auto symbols = c.sample(trial, 64);
    const CVector s0 = Eigen::Map<const CVector>(symbols.data(), 64);
    const CMatrix H = gen_channel(trial, 128, 64);
    const CVector r = H * s0 + gen_noise(trial, 128, 0.1);
    SolverSettings settings;
    settings.track_objective = true;
    const auto out = detect(H, r, 0.01, RelaxationSet::default_for(c), c, settings);
    bool monotone = true;
    for (std::size_t k = 1; k < out.objective_trace.size(); ++k) {
      monotone &= out.objective_trace[k] <= out.objective_trace[k - 1] + 1e-12 * std::abs(out.objective_trace[k - 1]);
    }
    check.expect(monotone && out.converged, fmt("solver descent monotone over %zu iterations", out.objective_trace.size()));
  }

  bool cells = true;
  for (const char* name : {"psk16", "qam16", "qam64"}) {
    const auto c = Constellation::from_name(name);
    for (int i = 0; i < 50000; ++i) {
      const cplx z(g(rng), g(rng));
      cells &= c.in_decision_cell(z, c.hard_decide(z));
    }
  }
  check.expect(cells, "hard decision lands in its own decision cell");
  return {check.pass(), true, "property suites"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1", criterion_1}, {"2", criterion_2}, {"3", criterion_3}, {"4", criterion_4}, {"5", criterion_5},
      {"6", criterion_6}, {"7", criterion_7}, {"8", criterion_8}, {"9", criterion_9}, {"properties", properties},
  };
  const std::string only = argc > 1 ? argv[1] : "";
  bool failed = false;
  bool ran = false;
  for (const auto& [id, fn] : criteria) {
    if (!only.empty() && only != id) continue;
    ran = true;
    std::printf("criterion %s\n", id.c_str());
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, true, std::string("exception: ") + e.what()};
    }
    const char* verdict = o.pass ? "PASS" : (o.gating ? "FAIL" : "FAIL (soft, not gating)");
    std::printf("%s criterion %s: %s\n", verdict, id.c_str(), o.summary.c_str());
    std::fflush(stdout);
    if (!o.pass && o.gating) failed = true;
  }
  if (!ran) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return failed ? 1 : 0;
}
