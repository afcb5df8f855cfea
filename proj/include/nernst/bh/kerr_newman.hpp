#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "nernst/core/model.hpp"
#include "nernst/errors.hpp"
#include "nernst/numerics/diff.hpp"
#include "nernst/numerics/roots.hpp"

// Kerr-Newman black holes in geometric units G = c = hbar = k = 1.

namespace nernst::bh {

struct KNParams {
  double M = 1.0;
  double J = 0.0;
  double Q = 0.0;
};

struct KNDerived {
  double a;
  double r_plus;
  double r_minus;
  double kappa;
  double alpha;  // r_plus^2 + a^2
  double area;
  double S_B;
  double Omega;
  double T;
  double Phi;
  bool extremal;
};

// M^2 - a^2 - Q^2 below this fraction of M^2 counts as extremal.
inline constexpr double kExtremalThreshold = 1e-14;

namespace detail {

// No sign restriction on J, so finite-difference stencils may cross J = 0.
inline KNDerived derive(double M, double J, double Q) {
  if (!(M > 0.0) || !std::isfinite(M)) throw DomainError("kerr_newman: mass M must be positive");
  if (!std::isfinite(J) || !std::isfinite(Q)) throw DomainError("kerr_newman: J and Q must be finite");
  const double a = J / M;
  double disc = M * M - a * a - Q * Q;
  if (disc < -kExtremalThreshold * M * M) {
    throw DomainError("kerr_newman: M^2 < a^2 + Q^2 (no horizon); M = " + std::to_string(M) +
                      " is below the extremal mass");
  }
  const bool extremal = disc < kExtremalThreshold * M * M;
  if (extremal) disc = 0.0;
  const double root = std::sqrt(disc);
  KNDerived d{};
  d.a = a;
  d.r_plus = M + root;
  d.r_minus = M - root;
  d.alpha = d.r_plus * d.r_plus + a * a;
  d.kappa = root / d.alpha;  // (r+ - r-) / (2 alpha)
  d.area = 4.0 * std::numbers::pi * d.alpha;
  d.S_B = std::numbers::pi * d.alpha;
  d.Omega = a / d.alpha;
  d.T = d.kappa / (2.0 * std::numbers::pi);
  d.Phi = Q * d.r_plus / d.alpha;
  d.extremal = extremal;
  return d;
}

inline void check_jq(double J, double Q) {
  if (!(J >= 0.0) || !std::isfinite(J)) throw DomainError("kerr_newman: angular momentum J must be non-negative");
  if (!std::isfinite(Q)) throw DomainError("kerr_newman: charge Q must be finite");
}

}  // namespace detail

inline KNDerived kn_derived(const KNParams& p) {
  detail::check_jq(p.J, p.Q);
  return detail::derive(p.M, p.J, p.Q);
}

/// Positive root of M^4 - Q^2 M^2 - J^2 = 0; zero for (J, Q) = (0, 0).
inline double kn_extremal_mass(double J, double Q) {
  detail::check_jq(J, Q);
  const double q2 = Q * Q;
  return std::sqrt(0.5 * (q2 + std::sqrt(q2 * q2 + 4.0 * J * J)));
}

/// S_B at the extremal mass, pi (4 J^2 / (Q^2 + sqrt(Q^4 + 4 J^2)) + Q^2).
inline double kn_residual_entropy(double J, double Q) {
  detail::check_jq(J, Q);
  if (J == 0.0 && Q == 0.0) {
    throw InputError("kn_residual_entropy: (J, Q) = (0, 0) has no extremal black hole (the limit is M -> 0)");
  }
  const double q2 = Q * Q;
  return std::numbers::pi * (4.0 * J * J / (q2 + std::sqrt(q2 * q2 + 4.0 * J * J)) + q2);
}

struct TemperaturePeak {
  double M;      // mass at the maximum (0 when there is none)
  double T_max;  // infinity for (J, Q) = (0, 0)
};

/// The single interior maximum of M -> T(M; J, Q) on [M_ext, 8 M_ext].
inline TemperaturePeak kn_max_temperature(double J, double Q) {
  detail::check_jq(J, Q);
  if (J == 0.0 && Q == 0.0) return {0.0, kInfinity};
  const double m_ext = kn_extremal_mass(J, Q);
  const auto peak = num::golden_section_max([&](double M) { return detail::derive(M, J, Q).T; }, m_ext, 8.0 * m_ext);
  return {peak.x, peak.value};
}

enum class Branch { near_extremal, large_mass };

inline std::string_view to_string(Branch b) { return b == Branch::near_extremal ? "near_extremal" : "large_mass"; }

inline Branch parse_branch(std::string_view s) {
  if (s == "near_extremal") return Branch::near_extremal;
  if (s == "large_mass") return Branch::large_mass;
  throw InputError("branch must be 'near_extremal' or 'large_mass', got '" + std::string(s) + "'");
}

struct Inversion {
  double M;
  double S_B;
  double residual;  // |T(M) - T_target|
};

/// Mass (and entropy) at temperature T_target on the requested branch of
/// the two-valued map M -> T at fixed (J, Q).
inline Inversion kn_invert_temperature(double T_target, double J, double Q, Branch branch) {
  detail::check_jq(J, Q);
  if (!(T_target > 0.0) || !std::isfinite(T_target)) {
    throw DomainError("kn_invert_temperature: T must be positive and finite");
  }
  const bool schwarzschild = J == 0.0 && Q == 0.0;
  if (schwarzschild && branch == Branch::near_extremal) {
    throw DomainError("kn_invert_temperature: (J, Q) = (0, 0) has no near_extremal branch; use large_mass");
  }
  const auto peak = kn_max_temperature(J, Q);
  if (T_target >= peak.T_max) {
    throw DomainError("kn_invert_temperature: no solution, T = " + std::to_string(T_target) +
                      " is not below T_max = " + std::to_string(peak.T_max));
  }
  auto temp = [&](double M) { return detail::derive(M, J, Q).T; };
  double M = 0.0;
  if (branch == Branch::near_extremal) {
    // T ~ sqrt(M - M_ext) near the extremal end; solve in u = sqrt(M - M_ext).
    const double m_ext = kn_extremal_mass(J, Q);
    const double u_hi = std::sqrt(peak.M - m_ext);
    const double u = num::brent_root([&](double v) { return temp(m_ext + v * v) - T_target; }, 0.0, u_hi);
    M = m_ext + u * u;
  } else {
    double lo = schwarzschild ? 1.0 / (16.0 * std::numbers::pi * T_target) : peak.M;
    double hi = schwarzschild ? 2.0 * lo : 2.0 * lo;
    while (temp(hi) > T_target) {
      lo = hi;
      hi *= 2.0;
      if (!std::isfinite(hi)) throw NumericalError("kn_invert_temperature: large_mass bracket overflow");
    }
    M = num::brent_root([&](double m) { return temp(m) - T_target; }, lo, hi);
  }
  const auto d = detail::derive(M, J, Q);
  const double residual = std::abs(d.T - T_target);
  if (residual > 1e-10) {
    throw NumericalError("kn_invert_temperature: residual " + std::to_string(residual) + " exceeds 1e-10");
  }
  return {M, d.S_B, residual};
}

struct FirstLawResidual {
  double temperature;  // |T dS/dM - 1|
  double rotation;     // |dM/dJ at fixed S, Q - Omega|
  double electric;     // |dM/dQ at fixed S, J - Phi|
  double max() const { return std::max({temperature, rotation, electric}); }
};

/// First-law consistency by implicit differentiation of S_B(M, J, Q):
/// (dM/dS) = 1/S_M, (dM/dJ)_S = -S_J/S_M, (dM/dQ)_S = -S_Q/S_M.
inline FirstLawResidual kn_first_law_residual(const KNParams& p) {
  const auto d = kn_derived(p);
  if (d.extremal) throw DomainError("kn_first_law_residual: requires a strictly sub-extremal black hole");
  const double M = p.M;
  auto entropy = [](double m, double j, double q) { return detail::derive(m, j, q).S_B; };
  auto inside = [](double m, double j, double q) {
    return m > 0.0 && m * m - (j / m) * (j / m) - q * q > kExtremalThreshold * m * m;
  };
  // The entropy has a square-root branch point at extremality, so the step
  // scales with the dimensionless discriminant, then shrinks until the whole
  // stencil is sub-extremal.
  const double eta = (M * M - d.a * d.a - p.Q * p.Q) / (M * M);
  double rel = std::min(1e-4, 1e-3 * eta);
  for (;; rel *= 0.5) {
    if (rel < 1e-12) {
      throw NumericalError("kn_first_law_residual: too close to extremality for a finite-difference stencil");
    }
    const double hm = rel * M;
    const double hj = rel * M * M;
    const double hq = rel * M;
    bool ok = true;
    for (double s : {-1.0, 1.0}) {
      ok = ok && inside(M + s * hm, p.J, p.Q) && inside(M, p.J + s * hj, p.Q) && inside(M, p.J, p.Q + s * hq);
    }
    if (ok) break;
  }
  const double sm = num::finite_diff_richardson([&](double m) { return entropy(m, p.J, p.Q); }, M, rel * M);
  const double sj = num::finite_diff_richardson([&](double j) { return entropy(M, j, p.Q); }, p.J, rel * M * M);
  const double sq = num::finite_diff_richardson([&](double q) { return entropy(M, p.J, q); }, p.Q, rel * M);
  return {std::abs(d.T * sm - 1.0), std::abs(-sj / sm - d.Omega), std::abs(-sq / sm - d.Phi)};
}

/// S_B(T; J, Q) on the near-extremal branch, z = (J, Q). The model is not
/// extensive and its admissible temperatures are bounded by T_max(J, Q).
class KerrNewmanModel final : public EntropyModel {
 public:
  KerrNewmanModel() : space_{Coordinate{"J", 0.0, kInfinity, true}, Coordinate{"Q"}} {}

  std::string name() const override { return "kerr_newman"; }
  const std::vector<Coordinate>& z_space() const override { return space_; }
  double size() const override { return 1.0; }
  bool extensive() const override { return false; }
  ModelKind kind() const override { return ModelKind::geometric; }
  double temperature_scale(std::span<const double> z) const override { return 0.5 * max_temperature(z); }
  double max_temperature(std::span<const double> z) const override {
    return kn_max_temperature(z[0], z[1]).T_max;
  }

 protected:
  double entropy_unchecked(std::span<const double> z, double T) const override {
    return kn_invert_temperature(T, z[0], z[1], Branch::near_extremal).S_B;
  }

 private:
  std::vector<Coordinate> space_;
};

}  // namespace nernst::bh
