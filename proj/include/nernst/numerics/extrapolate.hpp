#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nernst/errors.hpp"

namespace nernst::num {

enum class LimitClass { finite, diverges_neg, diverges_pos, inconclusive };

inline std::string_view to_string(LimitClass c) {
  switch (c) {
    case LimitClass::finite: return "FINITE";
    case LimitClass::diverges_neg: return "DIVERGES_NEG";
    case LimitClass::diverges_pos: return "DIVERGES_POS";
    case LimitClass::inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

/// Outcome of a sequence-limit extrapolation.
///
/// `value` is meaningful only for FINITE. `slope` is the divergence rate with
/// respect to the log-coordinate that grows toward the limit point:
/// d(value)/d ln(1/p) when p -> 0 and d(value)/d ln p when p -> infinity.
/// A sequence S(T) = ln T therefore has slope -1 as T -> 0.
struct LimitEstimate {
  LimitClass classification = LimitClass::inconclusive;
  double value = std::numeric_limits<double>::quiet_NaN();
  double slope = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();

  bool is_finite() const noexcept { return classification == LimitClass::finite; }
  bool diverges() const noexcept {
    return classification == LimitClass::diverges_neg || classification == LimitClass::diverges_pos;
  }
};

enum class LimitDirection { toward_zero, toward_infinity };

struct Sample {
  double parameter;
  double value;
};

namespace detail {

// Neville interpolation of (x_i, y_i) evaluated at x = 0.
inline double neville_at_zero(std::span<const double> x, std::span<const double> y) {
  std::vector<double> p(y.begin(), y.end());
  const std::size_t n = x.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i) p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
  return p[0];
}

// Exponent r > 0 such that v = a + c q^r passes through three points with
// q1 > q2 > q3 > 0. Empty when the differences do not shrink faster than a
// logarithm would make them (r <= 0 or oscillation).
inline std::optional<double> three_point_exponent(std::span<const double> q, std::span<const double> v) {
  const double d1 = v[1] - v[0];
  const double d2 = v[2] - v[1];
  if (d1 == 0.0) return std::nullopt;
  const double ratio = d2 / d1;
  const double l21 = std::log(q[1] / q[0]);
  const double l31 = std::log(q[2] / q[0]);
  const double log_limit = (l31 - l21) / l21;
  if (!(ratio > 0.0) || !(ratio < log_limit)) return std::nullopt;

  auto g = [&](double r) {
    const double x2 = std::exp(r * l21);
    const double x3 = std::exp(r * l31);
    return (x3 - x2) / (x2 - 1.0);
  };
  double lo = 1e-8;
  double hi = 64.0;
  if (g(hi) >= ratio) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (g(mid) > ratio) lo = mid;
    else hi = mid;
  }
  return std::sqrt(lo * hi);
}

// Least-squares fit v = a + s L + c q; returns {s, rms residual}.
inline std::array<double, 2> log_model_fit(std::span<const double> L, std::span<const double> q,
                                           std::span<const double> v) {
  const std::size_t n = v.size();
  // Normal equations, 3x3, solved by Gaussian elimination with pivoting.
  double ata[3][3] = {};
  double atb[3] = {};
  for (std::size_t i = 0; i < n; ++i) {
    const double row[3] = {1.0, L[i], q[i]};
    for (int r = 0; r < 3; ++r) {
      atb[r] += row[r] * v[i];
      for (int c = 0; c < 3; ++c) ata[r][c] += row[r] * row[c];
    }
  }
  double m[3][4];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m[r][c] = ata[r][c];
    m[r][3] = atb[r];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    for (int c = 0; c < 4; ++c) std::swap(m[col][c], m[piv][c]);
    if (m[col][col] == 0.0) return {0.0, std::numeric_limits<double>::infinity()};
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  const double a = m[0][3] / m[0][0];
  const double s = m[1][3] / m[1][1];
  const double c = m[2][3] / m[2][2];
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = a + s * L[i] + c * q[i] - v[i];
    ss += r * r;
  }
  return {s, std::sqrt(ss / static_cast<double>(n))};
}

}  // namespace detail

/// Classify and extrapolate the limit of a sampled sequence.
///
/// Parameters must be positive and strictly decreasing (toward zero) or
/// strictly increasing (toward infinity); at least four samples. The last
/// max(4, ceil(n/2)) samples form the tail window on which the decision is
/// made:
///   - a tail flat to 1e-12 of the largest |value| is FINITE;
///   - tail local slopes that keep one sign and shrink tenfold, or shrink
///     geometrically at every step, are taken as algebraic convergence;
///   - otherwise v = a + s L + c q is fitted (L the growing log-coordinate,
///     q the distance to the limit). A log term carrying at least half the
///     tail variation, with stable local slopes, is a divergence; one
///     carrying at most a tenth is treated as convergence; anything in
///     between is INCONCLUSIVE.
/// Convergent sequences are accelerated by Neville extrapolation to q = 0 in
/// the variable q^r, with r fitted through the last three samples. The
/// reported residual is the shift of that estimate against the previous
/// window. A fit residual above 10% of the sample spread is INCONCLUSIVE.
inline LimitEstimate extrapolate_limit(std::span<const Sample> samples,
                                       LimitDirection direction = LimitDirection::toward_zero) {
  const std::size_t n = samples.size();
  if (n < 4) throw InputError("extrapolate_limit: need at least 4 samples, got " + std::to_string(n));

  std::vector<double> q(n);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = samples[i].parameter;
    if (!(p > 0.0) || !std::isfinite(p)) throw InputError("extrapolate_limit: parameters must be positive and finite");
    if (!std::isfinite(samples[i].value)) throw InputError("extrapolate_limit: non-finite sample value");
    q[i] = direction == LimitDirection::toward_zero ? p : 1.0 / p;
    v[i] = samples[i].value;
    if (i > 0 && !(q[i] < q[i - 1])) {
      throw InputError(direction == LimitDirection::toward_zero
                           ? "extrapolate_limit: parameters must be strictly decreasing"
                           : "extrapolate_limit: parameters must be strictly increasing");
    }
  }

  LimitEstimate out;
  const std::size_t m = std::max<std::size_t>(4, (n + 1) / 2);
  const std::size_t t0 = n - m;
  std::span<const double> qt(q.data() + t0, m);
  std::span<const double> vt(v.data() + t0, m);

  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  const auto [vmin, vmax] = std::minmax_element(v.begin(), v.end());
  const double spread = *vmax - *vmin;
  const auto [tmin, tmax] = std::minmax_element(vt.begin(), vt.end());
  const double tail_spread = *tmax - *tmin;

  if (tail_spread <= 1e-12 * scale) {
    out.classification = LimitClass::finite;
    out.value = v.back();
    out.residual = tail_spread;
    return out;
  }

  std::vector<double> L(m);
  for (std::size_t i = 0; i < m; ++i) L[i] = -std::log(qt[i]);
  std::vector<double> local(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) local[i] = (vt[i + 1] - vt[i]) / (L[i + 1] - L[i]);

  // A slope that reaches exactly zero (the sequence settled in floating
  // point) keeps the sign test; the magnitude test forbids it restarting.
  bool convergent = local[0] != 0.0;
  for (std::size_t i = 0; i < local.size(); ++i) {
    if (local[i] != 0.0 && (local[i] > 0.0) != (local[0] > 0.0)) convergent = false;
    if (i > 0 && std::abs(local[i]) > std::abs(local[i - 1])) convergent = false;
  }
  // Either a tenfold overall decay, or steady geometric decay of at least
  // exp(-0.15) per unit of L between every pair of neighbouring slopes.
  bool geometric = convergent;
  for (std::size_t i = 1; i < local.size() && geometric; ++i) {
    const double dl = 0.5 * (L[i + 1] - L[i - 1]);
    if (std::abs(local[i]) > std::exp(-0.15 * dl) * std::abs(local[i - 1])) geometric = false;
  }
  convergent = convergent && (std::abs(local.back()) <= 0.1 * std::abs(local.front()) || geometric);

  if (!convergent) {
    const auto [s, fit_residual] = detail::log_model_fit(L, qt, vt);
    const double explained = std::abs(s) * (L.back() - L.front()) / tail_spread;
    out.slope = s;
    out.residual = fit_residual;
    if (explained >= 0.5) {
      bool stable = true;
      const std::size_t k = std::min<std::size_t>(3, local.size());
      for (std::size_t i = local.size() - k; i < local.size(); ++i)
        if (std::abs(local[i] - s) > 0.05 * std::abs(s)) stable = false;
      if (stable && fit_residual <= 0.1 * spread) {
        out.classification = s < 0.0 ? LimitClass::diverges_neg : LimitClass::diverges_pos;
      }
      return out;
    }
    if (explained > 0.1) return out;
    out.slope = std::numeric_limits<double>::quiet_NaN();
  }

  // Algebraic convergence: accelerate.
  const auto r = detail::three_point_exponent(std::span<const double>(q).last(3), std::span<const double>(v).last(3));
  double value;
  double residual;
  if (!r || *r > 30.0) {
    value = v.back();
    residual = std::abs(v[n - 1] - v[n - 2]);
  } else {
    const std::size_t k = std::min<std::size_t>(4, n - 1);
    auto window = [&](std::size_t end) {
      std::vector<double> xs(k);
      std::vector<double> ys(k);
      const double ref = q[end - k];
      for (std::size_t i = 0; i < k; ++i) {
        xs[i] = std::pow(q[end - k + i] / ref, *r);
        ys[i] = v[end - k + i];
      }
      return detail::neville_at_zero(xs, ys);
    };
    value = window(n);
    residual = std::abs(value - window(n - 1));
  }
  if (!std::isfinite(value) || !(residual <= 0.1 * spread)) {
    out.residual = residual;
    return out;
  }
  out.classification = LimitClass::finite;
  out.value = value;
  out.residual = residual;
  return out;
}

inline LimitEstimate extrapolate_limit(const std::vector<Sample>& samples,
                                       LimitDirection direction = LimitDirection::toward_zero) {
  return extrapolate_limit(std::span<const Sample>(samples), direction);
}

}  // namespace nernst::num
