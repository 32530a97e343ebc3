#pragma once

#include <memory>
#include <vector>

namespace rcr {

/// Gauss-Hermite rule for expectations over a standard normal variable:
/// E[f(Z)] ~ sum_i weights[i] * f(nodes[i]), with the weights summing to 1.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Builds an n-point rule by Golub-Welsch on the probabilists' Hermite
/// Jacobi matrix. Rules are cached; the returned pointer is shared and
/// immutable.
std::shared_ptr<const GaussHermiteRule> gauss_hermite_rule(int n);

}  // namespace rcr
