#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nernst/errors.hpp"

namespace nernst::num {

inline constexpr int kMaxBesselOrder = 200;

/// Exponentially scaled modified spherical Bessel functions of the first
/// kind, e^{-x} i_l(x) for l = 0..l_max.
///
/// Miller's algorithm: the recurrence i_{l-1} = i_{l+1} + (2l+1)/x i_l is run
/// downward from an order well above l_max, then normalized by the exact
/// i_0(x) e^{-x} = (1 - e^{-2x}) / (2x). The upward direction (and the
/// ascending closed forms) lose all digits for l > x. Orders whose value is
/// below the smallest normal double come out as 0.
inline std::vector<double> bessel_i_sph_scaled(int l_max, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("bessel_i_sph: x must be positive and finite");
  }
  if (l_max < 0 || l_max > kMaxBesselOrder) {
    throw InputError("bessel_i_sph: l_max must lie in [0, 200], got " + std::to_string(l_max));
  }

  const int start = l_max + 30 + static_cast<int>(std::ceil(x + 6.0 * std::sqrt(x + l_max + 1.0)));
  std::vector<double> work(static_cast<std::size_t>(l_max) + 1, 0.0);

  double upper = 0.0;  // i_{l+1}
  double value = 1e-280;  // i_l, arbitrary seed
  for (int l = start; l >= 1; --l) {
    const double lower = upper + (2.0 * l + 1.0) / x * value;
    upper = value;
    value = lower;
    if (l - 1 <= l_max) work[static_cast<std::size_t>(l - 1)] = value;
    if (l <= l_max) work[static_cast<std::size_t>(l)] = upper;
    if (std::abs(value) > 1e250) {
      value *= 1e-250;
      upper *= 1e-250;
      for (int k = l - 1; k <= l_max; ++k) work[static_cast<std::size_t>(k)] *= 1e-250;
    }
  }

  const double i0_scaled = -std::expm1(-2.0 * x) / (2.0 * x);
  const double norm = i0_scaled / work[0];
  for (double& v : work) v *= norm;
  return work;
}

/// Modified spherical Bessel functions i_0(x)..i_{l_max}(x), unscaled.
/// Overflows for x beyond ~700; use bessel_i_sph_scaled there.
inline std::vector<double> bessel_i_sph(int l_max, double x) {
  auto v = bessel_i_sph_scaled(l_max, x);
  const double ex = std::exp(x);
  for (double& e : v) e *= ex;
  return v;
}

}  // namespace nernst::num
