#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nernst/errors.hpp"

namespace nernst {

// Table marker for a zero-temperature entropy that diverges to -infinity.
inline constexpr double kNegInfinity = -std::numeric_limits<double>::infinity();

/// S(Z, T) on a grid whose temperature axis runs strictly downward and ends
/// at the closure value T = 0. values[i][j] belongs to (z_grid[i], t_grid[j]).
struct EntropyTable {
  std::string model;
  std::vector<std::string> z_names;
  std::vector<std::vector<double>> z_grid;
  std::vector<double> t_grid;
  std::vector<std::vector<double>> values;
  double size = 1.0;  // degrees of freedom, for per-site spreads

  std::size_t zero_column() const { return t_grid.size() - 1; }
  double residual(std::size_t zi) const { return values[zi][zero_column()]; }

  void validate() const {
    if (z_grid.empty()) throw InputError("entropy table: empty z grid");
    if (t_grid.size() < 2) throw InputError("entropy table: t grid needs at least one positive entry and T=0");
    for (std::size_t j = 0; j + 1 < t_grid.size(); ++j) {
      if (!(t_grid[j] > t_grid[j + 1])) throw InputError("entropy table: t grid must be strictly decreasing");
    }
    if (t_grid.back() != 0.0) throw InputError("entropy table: last t grid entry must be 0");
    if (!(size > 0.0)) throw InputError("entropy table: size must be positive");
    if (values.size() != z_grid.size()) throw InputError("entropy table: one value row per z point required");
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
      if (z_grid[i].size() != z_names.size()) {
        throw InputError("entropy table: z point " + std::to_string(i) + " has wrong dimension");
      }
      if (values[i].size() != t_grid.size()) {
        throw InputError("entropy table: row " + std::to_string(i) + " has wrong length");
      }
      for (std::size_t j = 0; j < t_grid.size(); ++j) {
        const double v = values[i][j];
        const bool at_zero = j == zero_column();
        if (std::isnan(v) || (std::isinf(v) && !(at_zero && v == kNegInfinity))) {
          throw InputError("entropy table: invalid value at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
        }
      }
    }
  }
};

struct ThirdLawWitness {
  std::size_t z_index;        // Z, whose S(Z, 0) is too large
  std::size_t z_prime_index;  // Z'
  std::size_t t_index;        // T1 > 0
  double s_zero;
  double s_t1;
};

struct ThirdLawCheck {
  bool holds = true;
  std::optional<ThirdLawWitness> witness;
};

/// Tabulated form of S(Z, 0) <= S(Z', T1) for all Z, Z' and every T1 > 0.
///
/// Equality is admitted; comparisons carry a 1e-12 relative tolerance so that
/// extrapolated zero rows are not flagged on roundoff. The witness is the
/// first failure in (Z, Z', T1) grid order.
inline ThirdLawCheck check_third_law_table(const EntropyTable& table, double rel_tol = 1e-12) {
  table.validate();
  ThirdLawCheck out;
  const std::size_t zc = table.zero_column();
  for (std::size_t i = 0; i < table.z_grid.size(); ++i) {
    const double s0 = table.values[i][zc];
    if (s0 == kNegInfinity) continue;
    for (std::size_t k = 0; k < table.z_grid.size(); ++k) {
      for (std::size_t j = 0; j < zc; ++j) {
        const double s1 = table.values[k][j];
        if (s0 > s1 + rel_tol * std::max({1.0, std::abs(s0), std::abs(s1)})) {
          out.holds = false;
          out.witness = ThirdLawWitness{i, k, j, s0, s1};
          return out;
        }
      }
    }
  }
  return out;
}

struct PlanckSpread {
  double spread;
  double per_site_spread;
};

/// Range of the zero-temperature row. Refuses (ContinuityFailure) when any
/// residual is -infinity, since equality of residuals is then undefined.
inline PlanckSpread planck_spread(const EntropyTable& table) {
  table.validate();
  double lo = kNegInfinity;
  double hi = kNegInfinity;
  bool first = true;
  for (std::size_t i = 0; i < table.z_grid.size(); ++i) {
    const double s0 = table.residual(i);
    if (s0 == kNegInfinity) {
      throw ContinuityFailure("planck_spread: CONTINUITY_FAILURE, zero-temperature entropy diverges at z point " +
                              std::to_string(i));
    }
    if (first) {
      lo = hi = s0;
      first = false;
    } else {
      lo = std::min(lo, s0);
      hi = std::max(hi, s0);
    }
  }
  const double spread = hi - lo;
  return {spread, spread / table.size};
}

}  // namespace nernst
