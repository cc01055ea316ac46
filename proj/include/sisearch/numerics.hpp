#pragma once

#include <cmath>
#include <string>

#include "sisearch/errors.hpp"

namespace sisearch {

/// Root of f in [lo, hi] by bisection. Requires f(lo) and f(hi) of opposite
/// (or zero) sign; stops once the bracket is narrower than `tolerance`.
template <typename Fn>
double bisect(Fn&& f, double lo, double hi, double tolerance, const char* what = "bisection") {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0))
    throw BracketFailure(std::string(what) + ": no sign change on [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
  for (int it = 0; it < 400 && hi - lo > tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct GoldenResult {
  double x;
  double value;
};

/// Maximizer of f on [lo, hi] by golden-section search.
template <typename Fn>
GoldenResult golden_section_max(Fn&& f, double lo, double hi, double tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tolerance) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  // The endpoints are candidates too: the golden bracket never evaluates them.
  GoldenResult best = f1 >= f2 ? GoldenResult{x1, f1} : GoldenResult{x2, f2};
  for (double edge : {lo, hi}) {
    if (std::abs(best.x - edge) <= tolerance) {
      const double fe = f(edge);
      if (fe > best.value) best = {edge, fe};
    }
  }
  return best;
}

}  // namespace sisearch
