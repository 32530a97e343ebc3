#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "rcr/predictor.hpp"

namespace rcr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// P[Y <= x] and P[Y >= x] for Y ~ N(mean, sd^2), written to keep tails exact.
double lower_tail(double x, double mean, double sd) {
  if (x == -kInf) return 0.0;
  if (x == kInf) return 1.0;
  return 0.5 * std::erfc(-(x - mean) / (sd * std::numbers::sqrt2));
}
double upper_tail(double x, double mean, double sd) {
  if (x == kInf) return 0.0;
  if (x == -kInf) return 1.0;
  return 0.5 * std::erfc((x - mean) / (sd * std::numbers::sqrt2));
}

// Probability that one QAM axis is decided wrongly. The decision interval of
// level `index` is pulled back through the clamp to [-c, c].
double axis_error(std::span<const double> levels, std::size_t index, double theta, double alpha, double c) {
  double lo = index == 0 ? -kInf : 0.5 * (levels[index - 1] + levels[index]);
  double hi = index + 1 == levels.size() ? kInf : 0.5 * (levels[index] + levels[index + 1]);
  if (hi <= -c || lo >= c) return 1.0;
  if (lo < -c) lo = -kInf;
  if (hi > c) hi = kInf;
  const double mean = theta * levels[index];
  const double sd = theta * alpha;
  return std::min(1.0, lower_tail(lo, mean, sd) + upper_tail(hi, mean, sd));
}

std::size_t level_index(std::span<const double> levels, double v) {
  const auto it = std::min_element(levels.begin(), levels.end(),
                                   [v](double a, double b) { return std::abs(a - v) < std::abs(b - v); });
  return static_cast<std::size_t>(it - levels.begin());
}

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

double standard_normal_quantile(double u) { return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u); }

}  // namespace

SepEstimate predict_sep_generic(const SaddleSolution& s, const PredictorParams& p) {
  const Constellation& k = p.constellation;
  const bool separable = k.kind() == ConstellationKind::qam && p.relaxation.kind() != RelaxationKind::disk;
  if (!separable) return {predict_sep_qmc(s, p), SepMethod::monte_carlo};

  const double c = p.relaxation.kind() == RelaxationKind::box ? p.relaxation.halfwidth() : kInf;
  const double theta = s.theta(p.zeta);
  const auto levels = k.pam_levels();
  double total = 0.0;
  for (const cplx& pt : k.points()) {
    const double er = axis_error(levels, level_index(levels, pt.real()), theta, s.alpha_star, c);
    const double ei = axis_error(levels, level_index(levels, pt.imag()), theta, s.alpha_star, c);
    total += er + ei - er * ei;
  }
  return {total / k.order(), SepMethod::quadrature};
}

double predict_sep_qmc(const SaddleSolution& s, const PredictorParams& p, int log2_points) {
  const std::uint64_t count = std::uint64_t{1} << log2_points;
  const double theta = s.theta(p.zeta);
  const double alpha = s.alpha_star;
  const auto points = p.constellation.points();
  std::uint64_t errors = 0;
  for (std::uint64_t i = 1; i <= count; ++i) {
    const cplx g(standard_normal_quantile(radical_inverse(i, 2)), standard_normal_quantile(radical_inverse(i, 3)));
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
      const cplx z = p.relaxation.project(theta * (points[idx] - alpha * g));
      const auto cell = p.constellation.cell_index(z);
      if (!cell || *cell != idx) ++errors;
    }
  }
  return static_cast<double>(errors) / (static_cast<double>(count) * static_cast<double>(points.size()));
}

double predict_sep_psk(double alpha_star, int order) {
  if (!(alpha_star > 0.0)) throw InputError("alpha_star must be positive");
  if (order < 4) throw InputError("PSK order must be >= 4");
  const double t = std::tan(std::numbers::pi / order);
  const double shift = 1.0 / alpha_star;
  // Conditional on G, the event is |Z| >= t |G - 1/alpha*|.
  auto integrand = [&](double g) {
    const double pdf = std::exp(-0.5 * g * g) / std::sqrt(2.0 * std::numbers::pi);
    return pdf * std::erfc(t * std::abs(g - shift) / std::numbers::sqrt2);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr double kSpan = 40.0;
  double value = 0.0;
  if (shift > -kSpan && shift < kSpan) {
    value = GK::integrate(integrand, -kSpan, shift, 20, 1e-14) + GK::integrate(integrand, shift, kSpan, 20, 1e-14);
  } else {
    value = GK::integrate(integrand, -kSpan, kSpan, 20, 1e-14);
  }
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace rcr
