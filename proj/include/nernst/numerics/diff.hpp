#pragma once

#include <algorithm>
#include <cmath>

#include "nernst/errors.hpp"
#include "nernst/numerics/roots.hpp"

namespace nernst::num {

// Default central-difference step.
inline double default_step(double x) { return std::max(1e-6, 1e-6 * std::abs(x)); }

/// Central difference (f(x+h) - f(x-h)) / 2h.
template <class F>
double finite_diff(F&& f, double x, double h) {
  if (!(h > 0.0)) throw InputError("finite_diff: step must be positive");
  const double fp = detail::checked_eval(f, x + h);
  const double fm = detail::checked_eval(f, x - h);
  return (fp - fm) / (2.0 * h);
}

template <class F>
double finite_diff(F&& f, double x) {
  return finite_diff(f, x, default_step(x));
}

/// One Richardson step on the central difference: (4 D(h/2) - D(h)) / 3,
/// fourth-order accurate. Used where acceptance tolerances sit near the
/// roundoff floor of the plain stencil.
template <class F>
double finite_diff_richardson(F&& f, double x, double h) {
  const double coarse = finite_diff(f, x, h);
  const double fine = finite_diff(f, x, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace nernst::num
