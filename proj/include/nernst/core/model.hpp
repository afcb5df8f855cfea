#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nernst/errors.hpp"

namespace nernst {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// One work coordinate of a model's Z-space, with its admissible range.
struct Coordinate {
  std::string name;
  double lower = -kInfinity;
  double upper = kInfinity;
  bool lower_inclusive = true;

  bool contains(double x) const {
    if (!std::isfinite(x)) return false;
    if (lower_inclusive ? x < lower : x <= lower) return false;
    return x <= upper;
  }
};

/// A point (Z, T) of the state space. T = 0 appears only in closure tables,
/// never as a live evaluation point.
struct ThermoState {
  std::vector<double> z;
  double T = 0.0;
};

enum class ModelKind { quantum, classical, geometric };

inline std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::quantum: return "quantum";
    case ModelKind::classical: return "classical";
    case ModelKind::geometric: return "geometric";
  }
  return "quantum";
}

/// Common contract of every model whose entropy S(Z, T) is tabulated,
/// classified and audited. Entropies are in nats (k = 1).
class EntropyModel {
 public:
  virtual ~EntropyModel() = default;

  virtual std::string name() const = 0;
  virtual const std::vector<Coordinate>& z_space() const = 0;
  // Degrees of freedom used for intensive normalization.
  virtual double size() const = 0;
  virtual bool extensive() const = 0;
  virtual ModelKind kind() const = 0;

  // Natural temperature unit at z (field, coupling, or a fraction of the
  // highest admitted temperature).
  virtual double temperature_scale(std::span<const double> z) const = 0;
  // Supremum of admitted temperatures at z.
  virtual double max_temperature(std::span<const double> /*z*/) const { return kInfinity; }

  /// Total entropy at (z, T); validates the state first.
  double entropy(std::span<const double> z, double T) const {
    validate(z, T);
    return entropy_unchecked(z, T);
  }
  double entropy(const ThermoState& s) const { return entropy(s.z, s.T); }

  void validate(std::span<const double> z, double T) const {
    const auto& space = z_space();
    if (z.size() != space.size()) {
      std::ostringstream os;
      os << name() << ": expected " << space.size() << " work coordinate(s), got " << z.size();
      throw DomainError(os.str());
    }
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (!space[i].contains(z[i])) {
        std::ostringstream os;
        os << name() << ": coordinate " << space[i].name << " = " << z[i] << " outside "
           << (space[i].lower_inclusive ? "[" : "(") << space[i].lower << ", " << space[i].upper << "]";
        throw DomainError(os.str());
      }
    }
    if (!(T > 0.0) || !std::isfinite(T)) {
      std::ostringstream os;
      os << name() << ": temperature T = " << T << " must be positive and finite";
      throw DomainError(os.str());
    }
    const double tmax = max_temperature(z);
    if (T >= tmax) {
      std::ostringstream os;
      os << name() << ": temperature T = " << T << " is not below the maximum " << tmax;
      throw DomainError(os.str());
    }
  }

 protected:
  virtual double entropy_unchecked(std::span<const double> z, double T) const = 0;
};

/// Total entropy of `model` at `state`, in nats.
inline double evaluate_entropy(const EntropyModel& model, const ThermoState& state) {
  return model.entropy(state);
}

}  // namespace nernst
