#pragma once

#include <string>
#include <string_view>

#include "rcr/constellation.hpp"
#include "rcr/errors.hpp"
#include "rcr/relaxation.hpp"

namespace rcr {

/// How the expectation of the squared distance is evaluated.
enum class ExpectationMethod {
  /// Closed-form per-coordinate moments for the box, a 1-D radial (Rice)
  /// integral for rotation-invariant sets, zero when unconstrained.
  exact_reduction,
  /// Tensor-product Gauss-Hermite over the two Gaussian components, per
  /// symbol. Generic, but only algebraically accurate for smooth integrands.
  tensor_gauss_hermite,
};

struct SaddleTolerances {
  double inner_tol = 1e-10;  // on beta
  double outer_tol = 1e-8;   // on alpha
  int max_inner_iterations = 200;
  int max_outer_iterations = 200;
  int max_bracket_doublings = 6;
};

struct PredictorParams {
  double kappa = 2.0;
  double sigma_sq = 1.0;
  double zeta = 0.0;
  Constellation constellation = Constellation::psk(16);
  RelaxationSet relaxation = RelaxationSet::disk(1.0);
  int quadrature_nodes = 64;
  ExpectationMethod expectation = ExpectationMethod::exact_reduction;
  SaddleTolerances tolerances{};

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct SaddleSolution {
  double alpha_star = 0.0;
  double beta_star = 0.0;
  double objective = 0.0;
  bool converged = false;
  int outer_iterations = 0;
  int inner_iterations = 0;
  // Central-difference partial derivatives at (alpha*, beta*).
  double grad_alpha = 0.0;
  double grad_beta = 0.0;

  double theta(double zeta) const { return beta_star / (beta_star + 2.0 * zeta * alpha_star); }
};

enum class SepMethod { closed_form_psk, quadrature, monte_carlo };

std::string_view to_string(SepMethod m) noexcept;
SepMethod sep_method_from_string(std::string_view s);

struct Prediction {
  double mse = 0.0;
  double sep = 0.0;
  SaddleSolution solution;
  SepMethod sep_method = SepMethod::quadrature;
  /// Set when 2*kappa*alpha^2 - sigma^2 was below -1e-9 before clamping.
  bool mse_clamped = false;
};

/// Raised by solve_saddle. Carries the best iterate found.
class SaddleError : public NumericalError {
 public:
  enum class Kind { non_convergence, bracket_exhausted };

  SaddleError(Kind kind, const std::string& what, SaddleSolution best)
      : NumericalError(what), kind_(kind), best_(best) {}

  Kind kind() const noexcept { return kind_; }
  const SaddleSolution& best() const noexcept { return best_; }

 private:
  Kind kind_;
  SaddleSolution best_;
};

/// The scalar min-max objective
///   k a b + s2 b/(2a) - b^2/2 - a b^2/(b + 2 z a) + (b/(2a) - b^2/(2ab + 4 z a^2))
///   + (b/(2a) + z) E[D^2(b/(b + 2 z a) (S0 - a Gc); V)]
/// with Gc ~ CN(0, 2). Throws NumericalError if the value is not finite.
double objective(const PredictorParams& p, double alpha, double beta);

/// E[D^2(theta (S0 - alpha Gc); V)] with S0 uniform on the alphabet and Gc
/// having independent standard-normal real and imaginary parts.
double expectation_dist_sq(const PredictorParams& p, double theta, double alpha);

/// Tensor Gauss-Hermite evaluation with `nodes` points per axis, summed over
/// every symbol in the original frame. Independent of expectation_dist_sq's
/// reductions.
double expectation_dist_sq_tensor(const PredictorParams& p, double theta, double alpha, int nodes);

/// Nested golden-section solve: outer minimization over alpha, inner
/// maximization over beta, with bracket doubling.
SaddleSolution solve_saddle(const PredictorParams& p);

/// max(2 kappa alpha*^2 - sigma^2, 0).
double predict_mse(const SaddleSolution& s, const PredictorParams& p);

struct SepEstimate {
  double value = 0.0;
  SepMethod method = SepMethod::quadrature;
};

/// P[Pi(theta (S0 - alpha* Gc); V) not in the decision cell of S0].
/// Square QAM with a box or no relaxation factors per coordinate into
/// Gaussian tails (method = quadrature); anything else uses a
/// quasi-Monte-Carlo rule with 2^20 points (method = monte_carlo).
SepEstimate predict_sep_generic(const SaddleSolution& s, const PredictorParams& p);
/// Same event, forced through the quasi-Monte-Carlo rule.
double predict_sep_qmc(const SaddleSolution& s, const PredictorParams& p, int log2_points = 20);

/// P[|Z / (G - 1/alpha*)| >= tan(pi/M)] for independent standard normals,
/// integrated over G.
double predict_sep_psk(double alpha_star, int order);

enum class SepChoice { automatic, closed_form_psk, quadrature, monte_carlo };

/// Solves the saddle problem and evaluates both metrics. The automatic SEP
/// choice uses the closed form for PSK over a rotation-invariant set and the
/// generic evaluator otherwise. Propagates SaddleError.
Prediction predict(const PredictorParams& p, SepChoice sep = SepChoice::automatic);
/// MSE and SEP at a given (possibly unconverged) solution.
Prediction evaluate_prediction(const PredictorParams& p, const SaddleSolution& solution,
                               SepChoice sep = SepChoice::automatic);

enum class ZetaMetric { mse, sep };

struct ZetaOptimum {
  double zeta = 0.0;
  double value = 0.0;
  bool interior = false;
  int evaluations = 0;
};

/// Minimizes the predicted metric over zeta in [0, zeta_max]: a uniform scan
/// followed by golden-section refinement around the best scan point.
ZetaOptimum optimal_zeta(PredictorParams base, ZetaMetric metric, double zeta_max,
                         SepChoice sep = SepChoice::automatic);

}  // namespace rcr
