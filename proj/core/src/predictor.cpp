#include "rcr/predictor.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "rcr/gauss_hermite.hpp"
#include "rcr/scalar_search.hpp"

namespace rcr {
namespace {

constexpr double kBracketLow = 1e-6;

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// E[(Y)_+^2] for Y ~ N(mean, sd^2).
double positive_part_second_moment(double mean, double sd) {
  const double z = mean / sd;
  return (mean * mean + sd * sd) * normal_cdf(z) + mean * sd * normal_pdf(z);
}

// Box: D^2 splits into independent per-axis clamp distances.
double box_expectation(const PredictorParams& p, double theta, double alpha) {
  const double c = p.relaxation.halfwidth();
  const double sd = theta * alpha;
  auto axis = [&](double s) {
    const double m = theta * s;
    return positive_part_second_moment(m - c, sd) + positive_part_second_moment(-m - c, sd);
  };
  double total = 0.0;
  for (const cplx& s : p.constellation.points()) total += axis(s.real()) + axis(s.imag());
  return total / p.constellation.order();
}

// exp(-x) I0(x), x >= 0.
double bessel_i0_scaled(double x) {
  if (x < 500.0) return std::exp(-x) * boost::math::cyl_bessel_i(0, x);
  // Hankel asymptotic series; terms decay fast for x >= 500.
  const double t = 1.0 / (8.0 * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 8; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= odd * odd * t / k;
    sum += term;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

// E[(theta R - r)_+^2] with R = |nu - alpha Gc| Rice distributed
// (noncentrality nu, per-component scale alpha).
double rice_excess_second_moment(double nu, double alpha, double theta, double r) {
  const double threshold = r / theta;
  const double span = 40.0 * alpha;
  const double lo = std::max(threshold, nu - span);
  const double hi = std::max(threshold, nu) + span;
  if (lo >= hi) return 0.0;
  const double inv_var = 1.0 / (alpha * alpha);
  auto density_term = [&](double radius) {
    const double excess = theta * radius - r;
    const double gauss = std::exp(-0.5 * (radius - nu) * (radius - nu) * inv_var);
    return excess * excess * radius * inv_var * gauss * bessel_i0_scaled(radius * nu * inv_var);
  };
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(density_term, lo, hi, 20, 1e-13, &error);
}

double disk_expectation(const PredictorParams& p, double theta, double alpha) {
  const double r = p.relaxation.radius();
  std::map<double, double> by_modulus;
  double total = 0.0;
  for (const cplx& s : p.constellation.points()) {
    const double nu = std::abs(s);
    auto it = by_modulus.find(nu);
    if (it == by_modulus.end()) it = by_modulus.emplace(nu, rice_excess_second_moment(nu, alpha, theta, r)).first;
    total += it->second;
  }
  return total / p.constellation.order();
}

double safe_objective(const PredictorParams& p, double alpha, double beta, double non_finite) {
  try {
    return objective(p, alpha, beta);
  } catch (const NumericalError&) {
    return non_finite;
  }
}

struct InnerResult {
  double beta = 0.0;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  bool at_edge = false;
};

class NestedSaddleSolver {
 public:
  explicit NestedSaddleSolver(const PredictorParams& p) : p_(p) {
    const double sigma = std::sqrt(p.sigma_sq);
    alpha_hi_ = 10.0 * (1.0 + sigma);
    beta_hi_ = 10.0 * (1.0 + sigma) * (1.0 + p.kappa);
  }

  InnerResult maximize_beta(double alpha) {
    const auto& tol = p_.tolerances;
    double beta_hi = beta_hi_;
    for (int growth = 0;; ++growth) {
      auto neg = [&](double beta) {
        return -safe_objective(p_, alpha, beta, -std::numeric_limits<double>::infinity());
      };
      const ScalarMinimum m = golden_section_minimize(neg, kBracketLow, beta_hi, tol.inner_tol, tol.max_inner_iterations);
      inner_iterations_ += m.iterations;
      const bool at_edge = m.x > beta_hi - 0.01 * (beta_hi - kBracketLow);
      if (!at_edge) return {m.x, -m.value, m.iterations, m.converged, false};
      if (growth >= tol.max_bracket_doublings) return {m.x, -m.value, m.iterations, false, true};
      beta_hi *= 2.0;
    }
  }

  SaddleSolution solve() {
    const auto& tol = p_.tolerances;
    // Inner failures at probe points far from the optimum are expected (the
    // beta optimum diverges as alpha -> 0); only the final iterate is judged.
    auto outer = [&](double alpha) {
      const InnerResult r = maximize_beta(alpha);
      return std::isfinite(r.value) ? r.value : std::numeric_limits<double>::infinity();
    };

    ScalarMinimum m;
    for (int growth = 0;; ++growth) {
      m = golden_section_minimize(outer, kBracketLow, alpha_hi_, tol.outer_tol, tol.max_outer_iterations);
      outer_iterations_ += m.iterations;
      const bool at_edge = m.x > alpha_hi_ - 0.01 * (alpha_hi_ - kBracketLow);
      if (!at_edge) break;
      if (growth >= tol.max_bracket_doublings) {
        edge_hit_ = "alpha";
        break;
      }
      alpha_hi_ *= 2.0;
    }

    // Re-solve the inner problem at the final alpha so beta* matches it.
    const InnerResult inner = maximize_beta(m.x);
    if (inner.at_edge) edge_hit_ = "beta";

    SaddleSolution s;
    s.alpha_star = m.x;
    s.beta_star = inner.beta;
    s.objective = inner.value;
    s.outer_iterations = outer_iterations_;
    s.inner_iterations = inner_iterations_;
    s.converged = m.converged && inner.converged && edge_hit_.empty();

    const double ha = 1e-5 * std::max(1.0, s.alpha_star);
    const double hb = 1e-5 * std::max(1.0, s.beta_star);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double a_lo = std::max(s.alpha_star - ha, 0.5 * s.alpha_star);
    const double b_lo = std::max(s.beta_star - hb, 0.5 * s.beta_star);
    s.grad_alpha = (safe_objective(p_, s.alpha_star + ha, s.beta_star, nan) -
                    safe_objective(p_, a_lo, s.beta_star, nan)) / (s.alpha_star + ha - a_lo);
    s.grad_beta = (safe_objective(p_, s.alpha_star, s.beta_star + hb, nan) -
                   safe_objective(p_, s.alpha_star, b_lo, nan)) / (s.beta_star + hb - b_lo);

    if (!edge_hit_.empty()) {
      throw SaddleError(SaddleError::Kind::bracket_exhausted,
                        "saddle optimum for " + edge_hit_ + " stays at the bracket edge after " +
                            std::to_string(tol.max_bracket_doublings) +
                            " doublings; increase max_bracket_doublings",
                        s);
    }
    if (!s.converged) {
      throw SaddleError(SaddleError::Kind::non_convergence,
                        "saddle solver did not reach tolerance within the iteration budget", s);
    }
    return s;
  }

 private:
  const PredictorParams& p_;
  double alpha_hi_;
  double beta_hi_;
  int outer_iterations_ = 0;
  int inner_iterations_ = 0;
  std::string edge_hit_;
};

}  // namespace

void PredictorParams::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be positive and finite");
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) throw ConfigError("sigma_sq must be positive and finite");
  if (!(zeta >= 0.0) || !std::isfinite(zeta)) throw ConfigError("zeta must be nonnegative and finite");
  if (quadrature_nodes < 8) throw ConfigError("quadrature_nodes must be >= 8");
  if (!(tolerances.inner_tol > 0.0) || !(tolerances.outer_tol > 0.0)) {
    throw ConfigError("saddle tolerances must be positive");
  }
  if (tolerances.max_inner_iterations < 1 || tolerances.max_outer_iterations < 1) {
    throw ConfigError("saddle iteration caps must be >= 1");
  }
}

double expectation_dist_sq(const PredictorParams& p, double theta, double alpha) {
  if (p.expectation == ExpectationMethod::tensor_gauss_hermite) {
    return expectation_dist_sq_tensor(p, theta, alpha, p.quadrature_nodes);
  }
  switch (p.relaxation.kind()) {
    case RelaxationKind::unconstrained: return 0.0;
    case RelaxationKind::box: return box_expectation(p, theta, alpha);
    case RelaxationKind::disk: return disk_expectation(p, theta, alpha);
  }
  return 0.0;
}

double expectation_dist_sq_tensor(const PredictorParams& p, double theta, double alpha, int nodes) {
  if (p.relaxation.kind() == RelaxationKind::unconstrained) return 0.0;
  const auto rule = gauss_hermite_rule(nodes);
  const auto& x = rule->nodes;
  const auto& w = rule->weights;
  double total = 0.0;
  for (const cplx& s : p.constellation.points()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const cplx point = theta * (s - alpha * cplx(x[i], x[j]));
        row += w[j] * p.relaxation.dist_sq(point);
      }
      acc += w[i] * row;
    }
    total += acc;
  }
  return total / p.constellation.order();
}

double objective(const PredictorParams& p, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw InputError("objective needs finite alpha > 0 and beta > 0");
  }
  const double k = p.kappa;
  const double s2 = p.sigma_sq;
  const double z = p.zeta;
  const double theta = beta / (beta + 2.0 * z * alpha);
  double value = k * alpha * beta + s2 * beta / (2.0 * alpha) - 0.5 * beta * beta -
                 alpha * beta * beta / (beta + 2.0 * z * alpha) +
                 (beta / (2.0 * alpha) - beta * beta / (2.0 * alpha * beta + 4.0 * z * alpha * alpha));
  if (p.relaxation.kind() != RelaxationKind::unconstrained) {
    value += (beta / (2.0 * alpha) + z) * expectation_dist_sq(p, theta, alpha);
  }
  if (!std::isfinite(value)) throw NumericalError("objective is not finite at the requested point");
  return value;
}

SaddleSolution solve_saddle(const PredictorParams& p) {
  p.validate();
  NestedSaddleSolver solver(p);
  return solver.solve();
}

double predict_mse(const SaddleSolution& s, const PredictorParams& p) {
  return std::max(2.0 * p.kappa * s.alpha_star * s.alpha_star - p.sigma_sq, 0.0);
}

std::string_view to_string(SepMethod m) noexcept {
  switch (m) {
    case SepMethod::closed_form_psk: return "closed_form_psk";
    case SepMethod::quadrature: return "quadrature";
    case SepMethod::monte_carlo: return "monte_carlo";
  }
  return "quadrature";
}

SepMethod sep_method_from_string(std::string_view s) {
  if (s == "closed_form_psk") return SepMethod::closed_form_psk;
  if (s == "quadrature") return SepMethod::quadrature;
  if (s == "monte_carlo") return SepMethod::monte_carlo;
  throw ConfigError("unknown sep_method '" + std::string(s) + "'");
}

Prediction predict(const PredictorParams& p, SepChoice sep) { return evaluate_prediction(p, solve_saddle(p), sep); }

Prediction evaluate_prediction(const PredictorParams& p, const SaddleSolution& solution, SepChoice sep) {
  Prediction out;
  out.solution = solution;
  const double raw = 2.0 * p.kappa * out.solution.alpha_star * out.solution.alpha_star - p.sigma_sq;
  out.mse = predict_mse(out.solution, p);
  out.mse_clamped = raw < -1e-9;

  const bool psk_closed_form_valid =
      p.constellation.kind() == ConstellationKind::psk && p.relaxation.rotation_invariant();
  switch (sep) {
    case SepChoice::automatic:
      if (psk_closed_form_valid) {
        out.sep = predict_sep_psk(out.solution.alpha_star, p.constellation.order());
        out.sep_method = SepMethod::closed_form_psk;
      } else {
        const SepEstimate e = predict_sep_generic(out.solution, p);
        out.sep = e.value;
        out.sep_method = e.method;
      }
      break;
    case SepChoice::closed_form_psk:
      if (!psk_closed_form_valid) {
        throw ConfigError("sep_method closed_form_psk needs a PSK constellation with a disk or no relaxation");
      }
      out.sep = predict_sep_psk(out.solution.alpha_star, p.constellation.order());
      out.sep_method = SepMethod::closed_form_psk;
      break;
    case SepChoice::quadrature: {
      const SepEstimate e = predict_sep_generic(out.solution, p);
      if (e.method != SepMethod::quadrature) {
        throw ConfigError("sep_method quadrature needs square QAM with a box or no relaxation");
      }
      out.sep = e.value;
      out.sep_method = e.method;
      break;
    }
    case SepChoice::monte_carlo:
      out.sep = predict_sep_qmc(out.solution, p);
      out.sep_method = SepMethod::monte_carlo;
      break;
  }
  return out;
}

ZetaOptimum optimal_zeta(PredictorParams base, ZetaMetric metric, double zeta_max, SepChoice sep) {
  if (!(zeta_max >= 0.0) || !std::isfinite(zeta_max)) throw ConfigError("zeta_max must be nonnegative");
  ZetaOptimum best;
  auto evaluate = [&](double zeta) {
    base.zeta = zeta;
    ++best.evaluations;
    try {
      const Prediction pr = predict(base, sep);
      return metric == ZetaMetric::mse ? pr.mse : pr.sep;
    } catch (const SaddleError& e) {
      std::ostringstream os;
      os.precision(17);
      os << e.what() << " (at zeta=" << zeta << ")";
      throw SaddleError(e.kind(), os.str(), e.best());
    }
  };

  if (zeta_max == 0.0) {
    best.zeta = 0.0;
    best.value = evaluate(0.0);
    return best;
  }

  constexpr int kScan = 21;
  std::vector<double> grid(kScan);
  std::vector<double> values(kScan);
  for (int i = 0; i < kScan; ++i) {
    grid[static_cast<std::size_t>(i)] = zeta_max * i / (kScan - 1);
    values[static_cast<std::size_t>(i)] = evaluate(grid[static_cast<std::size_t>(i)]);
  }
  const auto k = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  const double lo = grid[k == 0 ? 0 : k - 1];
  const double hi = grid[std::min<std::size_t>(k + 1, kScan - 1)];
  const ScalarMinimum m = golden_section_minimize(evaluate, lo, hi, 1e-6 * zeta_max, 200);

  if (m.value < values[k]) {
    best.zeta = m.x;
    best.value = m.value;
  } else {
    best.zeta = grid[k];
    best.value = values[k];
  }
  best.interior = best.zeta > 1e-3 * zeta_max && best.zeta < (1.0 - 1e-3) * zeta_max;
  return best;
}

}  // namespace rcr
