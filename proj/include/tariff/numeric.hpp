#pragma once

#include <cmath>
#include <utility>

#include "tariff/errors.hpp"

namespace tariff {

// Default tolerance for threshold comparisons.  Every strict inequality of
// the form "theta > level" is evaluated as theta > level + eps.
inline constexpr double kEpsilon = 1e-9;

// Bisection on [lo, hi] for continuous f with f(lo) and f(hi) of opposite
// sign.  Stops once the interval is narrower than tol (absolute).
template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-10, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo < 0) == (fhi < 0))
    throw consistency_error("bisect: no sign change in bracket");
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if ((fmid < 0) == (flo < 0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace tariff
