#include "rcr/detector.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "rcr/errors.hpp"

namespace rcr {
namespace {

void check_problem(const CMatrix& H, const CVector& r, double zeta) {
  if (H.rows() < 1 || H.cols() < 1) throw InputError("channel matrix must be non-empty");
  if (H.rows() != r.size()) {
    throw InputError("dimension mismatch: H has " + std::to_string(H.rows()) + " rows but r has " +
                     std::to_string(r.size()) + " entries");
  }
  if (!(zeta >= 0.0) || !std::isfinite(zeta)) throw InputError("zeta must be nonnegative and finite");
  if (!H.allFinite() || !r.allFinite()) throw InputError("non-finite entries in H or r");
}

void project_vector(const RelaxationSet& v, CVector& s) {
  if (v.kind() == RelaxationKind::unconstrained) return;
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = v.project(s(i));
}

}  // namespace

void SolverSettings::validate() const {
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(rel_tol > 0.0)) throw ConfigError("rel_tol must be positive");
  if (power_iterations < 1) throw ConfigError("power_iterations must be >= 1");
  if (!(step_fraction > 0.0 && step_fraction < 2.0)) throw ConfigError("step_fraction must be in (0, 2)");
}

double rcr_objective(const CMatrix& H, const CVector& r, double zeta, const CVector& s) {
  return 0.5 * (H * s - r).squaredNorm() + 0.5 * zeta * s.squaredNorm();
}

double power_iteration_lambda_max(const CMatrix& gram, int iterations) {
  CVector x = CVector::Ones(gram.cols()) / std::sqrt(static_cast<double>(gram.cols()));
  double lambda = 0.0;
  for (int k = 0; k < iterations; ++k) {
    CVector y = gram * x;
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    lambda = x.dot(y).real();
    x = y / norm;
  }
  return std::max(lambda, (x.dot(gram * x)).real());
}

DetectionOutcome rcr_solve(const CMatrix& H, const CVector& r, double zeta, const RelaxationSet& v,
                           const SolverSettings& settings) {
  settings.validate();
  check_problem(H, r, zeta);
  if (zeta == 0.0 && v.kind() == RelaxationKind::unconstrained && H.rows() < H.cols()) {
    throw InputError("unconstrained solve with zeta = 0 needs m >= n");
  }

  const CMatrix gram = H.adjoint() * H;
  const CVector hr = H.adjoint() * r;
  const double rr = r.squaredNorm();
  const double lipschitz = power_iteration_lambda_max(gram, settings.power_iterations) + zeta;
  const double step = lipschitz > 0.0 ? settings.step_fraction / lipschitz : 1.0;

  DetectionOutcome out;
  CVector s = CVector::Zero(H.cols());
  CVector gs = CVector::Zero(H.cols());
  CVector grad = -hr;
  auto objective_from_gram = [&] {
    return 0.5 * s.dot(gs).real() - s.dot(hr).real() + 0.5 * rr + 0.5 * zeta * s.squaredNorm();
  };
  if (settings.track_objective) out.objective_trace.push_back(objective_from_gram());

  CVector next(H.cols());
  for (int it = 1; it <= settings.max_iters; ++it) {
    next = s - step * grad;
    project_vector(v, next);
    const double change = (next - s).norm();
    s.swap(next);
    gs.noalias() = gram * s;
    grad = gs - hr + zeta * s;
    out.iterations = it;
    if (settings.track_objective) out.objective_trace.push_back(objective_from_gram());
    if (change <= settings.rel_tol * std::max(s.norm(), 1.0)) {
      out.converged = true;
      break;
    }
  }

  next = s - step * grad;
  project_vector(v, next);
  out.kkt_residual = (s - next).norm() / std::sqrt(static_cast<double>(s.size()));
  out.final_objective = rcr_objective(H, r, zeta, s);
  out.s_hat = std::move(s);
  return out;
}

DetectionOutcome rls_solve(const CMatrix& H, const CVector& r, double zeta, const SolverSettings& settings) {
  settings.validate();
  check_problem(H, r, zeta);
  if (zeta == 0.0 && H.rows() < H.cols()) throw NumericalError("singular normal equations: zeta = 0 with m < n");

  CMatrix system = H.adjoint() * H;
  system.diagonal().array() += zeta;
  const Eigen::LLT<CMatrix> llt(system);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-13) {
    throw NumericalError("singular normal equations: H^H H + zeta I is not positive definite");
  }

  DetectionOutcome out;
  out.s_hat = llt.solve(H.adjoint() * r);
  out.converged = true;
  const CVector grad = system * out.s_hat - H.adjoint() * r;
  out.kkt_residual = grad.norm() / std::sqrt(static_cast<double>(H.cols()));
  out.final_objective = rcr_objective(H, r, zeta, out.s_hat);
  return out;
}

DetectionOutcome detect(const CMatrix& H, const CVector& r, double zeta, const RelaxationSet& v,
                        const Constellation& c, const SolverSettings& settings) {
  DetectionOutcome out = rcr_solve(H, r, zeta, v, settings);
  out.s_star.resize(out.s_hat.size());
  for (Eigen::Index i = 0; i < out.s_hat.size(); ++i) out.s_star(i) = c.hard_decide(out.s_hat(i));
  return out;
}

}  // namespace rcr
