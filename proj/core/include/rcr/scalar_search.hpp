#pragma once

#include <cmath>
#include <utility>

namespace rcr {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Golden-section minimization of a unimodal f on [lo, hi]. Stops once the
/// bracket is narrower than `tol` or after `max_iter` reductions.
template <class F>
ScalarMinimum golden_section_minimize(F&& f, double lo, double hi, double tol, int max_iter) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  while (b - a > tol && it < max_iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    ++it;
  }
  ScalarMinimum out;
  out.iterations = it;
  out.converged = b - a <= tol;
  if (fc < fd) {
    out.x = c;
    out.value = fc;
  } else {
    out.x = d;
    out.value = fd;
  }
  return out;
}

}  // namespace rcr
