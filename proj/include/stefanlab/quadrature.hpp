// Adaptive Simpson quadrature with an explicit split budget.
#pragma once

#include <cmath>
#include <string>

#include "stefanlab/errors.hpp"

namespace stefanlab {

struct QuadratureControl {
  double abs_tol = 1e-10;
  long max_intervals = 1000000;
};

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double fa, double b, double fb, double m,
                   double fm, double whole, double tol, int depth, long& budget) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fb + 4.0 * frm + fm);
  const double err = left + right - whole;
  if (depth > 0 && std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
  budget -= 2;
  if (budget <= 0 || depth > 60)
    throw NumericalError("adaptive_simpson: split budget exhausted");
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1, budget) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1, budget);
}

} // namespace detail

/// Integral of f over [a, b] to absolute tolerance ctl.abs_tol. Throws
/// NumericalError once more than ctl.max_intervals subintervals were needed.
template <class F>
double adaptive_simpson(const F& f, double a, double b, QuadratureControl ctl = {}) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  long budget = ctl.max_intervals;
  // Force at least one refinement so smooth-looking coarse samples cannot
  // accept a wrong value.
  return detail::simpson_rec(f, a, fa, b, fb, m, fm, whole, ctl.abs_tol, 0, budget);
}

} // namespace stefanlab
