#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "rcr/detector.hpp"

namespace rcr::testing {

struct GridOracleResult {
  double objective = std::numeric_limits<double>::infinity();
  Eigen::Vector4d x = Eigen::Vector4d::Zero();  // (Re s1, Re s2, Im s1, Im s2)
  double resolution_bound = 0.0;
};

// Minimizes 0.5 ||H s - r||^2 + 0.5 zeta ||s||^2 for n = 2 over the box
// [-c, c]^4 in real coordinates. Three coordinates run over a uniform grid
// of `points` values including both ends; the fourth is minimized exactly
// for each grid triple, so the result is no worse than the full 4-D grid.
// resolution_bound covers the gap to the continuous minimum.
inline GridOracleResult box_grid_oracle(const CMatrix& H, const CVector& r, double zeta, double c, int points = 401) {
  const Eigen::Index m = H.rows();
  Eigen::MatrixXd A(2 * m, 4);
  A << H.real(), -H.imag(), H.imag(), H.real();
  Eigen::VectorXd y(2 * m);
  y << r.real(), r.imag();
  const Eigen::Matrix4d Q = A.transpose() * A + zeta * Eigen::Matrix4d::Identity();
  const Eigen::Vector4d b = A.transpose() * y;
  const double c0 = 0.5 * y.squaredNorm();

  const double h = 2.0 * c / (points - 1);
  GridOracleResult best;
  for (int i = 0; i < points; ++i) {
    const double x0 = -c + h * i;
    for (int j = 0; j < points; ++j) {
      const double x1 = -c + h * j;
      // Parts of the quadratic that do not involve x2 and x3.
      const double q01 = 0.5 * (Q(0, 0) * x0 * x0 + Q(1, 1) * x1 * x1) + Q(0, 1) * x0 * x1 - b(0) * x0 - b(1) * x1;
      const double lin2 = Q(2, 0) * x0 + Q(2, 1) * x1 - b(2);
      const double lin3_base = Q(3, 0) * x0 + Q(3, 1) * x1 - b(3);
      for (int k = 0; k < points; ++k) {
        const double x2 = -c + h * k;
        const double lin3 = lin3_base + Q(3, 2) * x2;
        const double x3 = std::clamp(-lin3 / Q(3, 3), -c, c);
        const double f = c0 + q01 + 0.5 * Q(2, 2) * x2 * x2 + lin2 * x2 + 0.5 * Q(3, 3) * x3 * x3 + lin3 * x3;
        if (f < best.objective) {
          best.objective = f;
          best.x = Eigen::Vector4d(x0, x1, x2, x3);
        }
      }
    }
  }
  // Rounding the three gridded coordinates of the continuous minimizer moves
  // each by at most h/2; coordinates at the bounds are on the grid and the
  // free ones have zero partial derivative.
  const double lambda_max = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(Q).eigenvalues().maxCoeff();
  best.resolution_bound = 0.5 * lambda_max * 3.0 * (h / 2) * (h / 2);
  return best;
}

}  // namespace rcr::testing
