#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rcr/constellation.hpp"
#include "rcr/relaxation.hpp"

namespace rcr {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct SolverSettings {
  int max_iters = 10000;
  double rel_tol = 1e-9;
  int power_iterations = 50;
  double step_fraction = 0.99;  // step = step_fraction / L
  bool track_objective = false;

  void validate() const;
};

struct DetectionOutcome {
  CVector s_hat;
  CVector s_star;  // empty unless produced by detect()
  int iterations = 0;
  double final_objective = 0.0;
  double kkt_residual = 0.0;
  bool converged = false;
  std::vector<double> objective_trace;  // filled when track_objective is set
};

/// 0.5 ||H s - r||^2 + 0.5 zeta ||s||^2
double rcr_objective(const CMatrix& H, const CVector& r, double zeta, const CVector& s);

/// Largest eigenvalue of a Hermitian PSD matrix by power iteration from the
/// all-ones vector.
double power_iteration_lambda_max(const CMatrix& gram, int iterations);

/// Minimizes 0.5 ||H s - r||^2 + 0.5 zeta ||s||^2 over V^n by projected
/// gradient with fixed step 0.99 / (lambda_max(H^H H) + zeta), starting from
/// zero. Stops when ||s_k+1 - s_k|| <= rel_tol * max(||s_k+1||, 1) or after
/// max_iters; non-convergence is reported through `converged`, not thrown.
DetectionOutcome rcr_solve(const CMatrix& H, const CVector& r, double zeta, const RelaxationSet& v,
                           const SolverSettings& settings = {});

/// Direct solve of (H^H H + zeta I) s = H^H r. Throws NumericalError when the
/// system is singular (zeta = 0 without full column rank).
DetectionOutcome rls_solve(const CMatrix& H, const CVector& r, double zeta, const SolverSettings& settings = {});

/// rcr_solve followed by entrywise nearest-symbol decisions.
DetectionOutcome detect(const CMatrix& H, const CVector& r, double zeta, const RelaxationSet& v,
                        const Constellation& c, const SolverSettings& settings = {});

}  // namespace rcr
