#pragma once

#include <cmath>

#include "expsum/exp_sum.hpp"

namespace expsum::detail {

/// evaluate without the overflow check: scanning code wants saturating
/// infinities (a sign is still a sign) instead of exceptions.
inline double evaluate_unchecked(const ExpSum& sum, double k) noexcept {
  double acc = 0.0;
  double compensation = 0.0;
  for (const ExpTerm& term : sum.terms()) {
    const double value = term.coefficient * std::pow(term.base, k);
    const double next = acc + value;
    if (std::fabs(acc) >= std::fabs(value)) {
      compensation += (acc - next) + value;
    } else {
      compensation += (value - next) + acc;
    }
    acc = next;
  }
  return acc + compensation;
}

inline int sign_of(double value) noexcept {
  if (value > 0.0) return 1;
  if (value < 0.0) return -1;
  return 0;  // exact zero or NaN
}

/// Plain bisection between a and b (any order) with f(a), f(b) of strictly
/// opposite sign; runs to floating-point resolution or until |f| drops to
/// the absolute tolerance, whichever comes first.
template <class F>
double bisect(F&& f, double a, double fa, double b,
              double f_tolerance, int max_iterations = 200) {
  for (int i = 0; i < max_iterations; ++i) {
    const double mid = a + 0.5 * (b - a);
    if (mid == a || mid == b) return mid;
    const double fm = f(mid);
    if (fm == 0.0 || std::fabs(fm) <= f_tolerance) return mid;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return a + 0.5 * (b - a);
}

}  // namespace expsum::detail
