#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nernst/errors.hpp"

namespace nernst {

using StateLabel = std::string;
using EntropyAssignment = std::map<StateLabel, double>;

// (X, t, X_t): X_t is declared to be the t-scaled copy of X.
struct Scaling {
  StateLabel state;
  double factor;
  StateLabel scaled;
};

/// Finite accessibility data: strict relations X << Y, adiabatic
/// equivalences X ~ Y and scaled copies.
struct AccessibilityStructure {
  std::set<StateLabel> states;
  std::vector<std::pair<StateLabel, StateLabel>> strict_edges;
  std::vector<std::pair<StateLabel, StateLabel>> equiv_pairs;
  std::vector<Scaling> scalings;

  // Throws InputError when an edge is reflexive, a pair is both strict and
  // equivalent, or an edge names an undeclared state.
  void validate() const {
    auto known = [&](const StateLabel& s) {
      if (!states.contains(s)) throw InputError("accessibility: unknown state '" + s + "'");
    };
    std::set<std::pair<StateLabel, StateLabel>> equiv;
    for (const auto& [x, y] : equiv_pairs) {
      known(x);
      known(y);
      equiv.insert({x, y});
      equiv.insert({y, x});
    }
    for (const auto& [x, y] : strict_edges) {
      known(x);
      known(y);
      if (x == y) throw InputError("accessibility: strict edge is reflexive at '" + x + "'");
      if (equiv.contains({x, y})) {
        throw InputError("accessibility: pair ('" + x + "', '" + y + "') is both strict and equivalent");
      }
    }
    for (const auto& s : scalings) {
      known(s.state);
      known(s.scaled);
    }
  }
};

enum class ViolationKind {
  equivalence,      // X ~ Y with S(X) != S(Y)
  strict_increase,  // X << Y with S(X) >= S(Y)
  extensivity,      // S(X_t) != t S(X)
  third_law,        // S(Z, 0) > S(Z', T1)
};

inline std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::equivalence: return "equivalence";
    case ViolationKind::strict_increase: return "strict_increase";
    case ViolationKind::extensivity: return "extensivity";
    case ViolationKind::third_law: return "third_law";
  }
  return "equivalence";
}

struct Violation {
  ViolationKind kind;
  StateLabel first;
  StateLabel second;
  double lhs;  // the entropy (or scaled entropy) that should not exceed / differ
  double rhs;
  double factor = 1.0;  // scaling factor for extensivity violations
};

inline constexpr double kEntropyTolerance = 1e-12;

namespace detail {
inline double lookup(const EntropyAssignment& s, const StateLabel& x) {
  const auto it = s.find(x);
  if (it == s.end()) throw InputError("entropy assignment has no value for state '" + x + "'");
  if (!std::isfinite(it->second)) throw InputError("entropy of state '" + x + "' is not finite");
  return it->second;
}
}  // namespace detail

/// Monotonicity checks: equal entropy on equivalent states (to 1e-12
/// relative) and strict increase along every strict edge.
inline std::vector<Violation> check_entropy_principle(const AccessibilityStructure& s,
                                                      const EntropyAssignment& entropy) {
  std::vector<Violation> out;
  for (const auto& [x, y] : s.equiv_pairs) {
    const double sx = detail::lookup(entropy, x);
    const double sy = detail::lookup(entropy, y);
    const double tol = kEntropyTolerance * std::max({1.0, std::abs(sx), std::abs(sy)});
    if (std::abs(sx - sy) > tol) out.push_back({ViolationKind::equivalence, x, y, sx, sy});
  }
  for (const auto& [x, y] : s.strict_edges) {
    const double sx = detail::lookup(entropy, x);
    const double sy = detail::lookup(entropy, y);
    if (!(sx < sy)) out.push_back({ViolationKind::strict_increase, x, y, sx, sy});
  }
  return out;
}

/// Scaling check S(X_t) = t S(X) on every declared scaled copy.
inline std::vector<Violation> check_extensivity(const AccessibilityStructure& s, const EntropyAssignment& entropy) {
  std::vector<Violation> out;
  for (const auto& sc : s.scalings) {
    if (!(sc.factor > 0.0) || !std::isfinite(sc.factor)) {
      throw InputError("check_extensivity: scaling factor must be positive, got " + std::to_string(sc.factor));
    }
    const double sx = detail::lookup(entropy, sc.state);
    const double st = detail::lookup(entropy, sc.scaled);
    const double expected = sc.factor * sx;
    if (std::abs(st - expected) > kEntropyTolerance * std::max(1.0, std::abs(expected))) {
      out.push_back({ViolationKind::extensivity, sc.state, sc.scaled, st, expected, sc.factor});
    }
  }
  return out;
}

}  // namespace nernst
