#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nernst/core/model.hpp"
#include "nernst/spin/heisenberg.hpp"
#include "nernst/spin/paramagnet.hpp"

// EntropyModel adapters for the spin systems. Every model has a single work
// coordinate (field B or coupling lambda) and reports total entropy.

namespace nernst::spin {

namespace detail {
inline std::vector<Coordinate> positive_coordinate(const char* name) {
  return {Coordinate{name, 0.0, kInfinity, false}};
}
inline void check_sites(int N) {
  if (N < 1) throw DomainError("number of sites N must be positive");
}
}  // namespace detail

class QuantumParamagnetModel final : public EntropyModel {
 public:
  QuantumParamagnetModel(int N, int twoJ) : n_(N), two_j_(twoJ), space_(detail::positive_coordinate("B")) {
    detail::check_sites(N);
    check_two_j(twoJ);
  }

  std::string name() const override { return "paramagnet"; }
  const std::vector<Coordinate>& z_space() const override { return space_; }
  double size() const override { return n_; }
  bool extensive() const override { return true; }
  ModelKind kind() const override { return ModelKind::quantum; }
  double temperature_scale(std::span<const double> z) const override { return z[0]; }

  int N() const { return n_; }
  int twoJ() const { return two_j_; }

 protected:
  double entropy_unchecked(std::span<const double> z, double T) const override {
    return n_ * pm_quantum_entropy(two_j_, z[0] / T);
  }

 private:
  int n_;
  int two_j_;
  std::vector<Coordinate> space_;
};

class ClassicalRotorModel final : public EntropyModel {
 public:
  explicit ClassicalRotorModel(int N) : n_(N), space_(detail::positive_coordinate("B")) { detail::check_sites(N); }

  std::string name() const override { return "rotor"; }
  const std::vector<Coordinate>& z_space() const override { return space_; }
  double size() const override { return n_; }
  bool extensive() const override { return true; }
  ModelKind kind() const override { return ModelKind::classical; }
  double temperature_scale(std::span<const double> z) const override { return z[0]; }

 protected:
  double entropy_unchecked(std::span<const double> z, double T) const override {
    return n_ * rotor_classical_entropy(z[0] / T);
  }

 private:
  int n_;
  std::vector<Coordinate> space_;
};

/// Infinite classical chain, entropy per site.
class ClassicalHeisenbergLimitModel final : public EntropyModel {
 public:
  ClassicalHeisenbergLimitModel() : space_(detail::positive_coordinate("lambda")) {}

  std::string name() const override { return "heisenberg_classical"; }
  const std::vector<Coordinate>& z_space() const override { return space_; }
  double size() const override { return 1.0; }
  bool extensive() const override { return true; }
  ModelKind kind() const override { return ModelKind::classical; }
  double temperature_scale(std::span<const double> z) const override { return z[0]; }

 protected:
  double entropy_unchecked(std::span<const double> z, double T) const override {
    return heis_classical_entropy_limit(1.0 / T, z[0]);
  }

 private:
  std::vector<Coordinate> space_;
};

/// Finite classical chain of N sites, total entropy from the transfer sum.
class ClassicalHeisenbergChainModel final : public EntropyModel {
 public:
  ClassicalHeisenbergChainModel(int N, Boundary bc) : n_(N), bc_(bc), space_(detail::positive_coordinate("lambda")) {
    detail::check_sites(N);
  }

  std::string name() const override { return "heisenberg_classical_chain"; }
  const std::vector<Coordinate>& z_space() const override { return space_; }
  double size() const override { return n_; }
  bool extensive() const override { return true; }
  ModelKind kind() const override { return ModelKind::classical; }
  double temperature_scale(std::span<const double> z) const override { return z[0]; }

 protected:
  double entropy_unchecked(std::span<const double> z, double T) const override {
    return heis_classical_entropy_finite(n_, z[0] / T, bc_);
  }

 private:
  int n_;
  Boundary bc_;
  std::vector<Coordinate> space_;
};

/// Finite quantum chain by exact diagonalization. The spectrum is linear in
/// lambda, so it is computed once at lambda = 1 and rescaled.
class QuantumHeisenbergModel final : public EntropyModel {
 public:
  QuantumHeisenbergModel(int N, int twoJ, Boundary bc)
      : spec_{N, twoJ, 1.0, bc}, space_(detail::positive_coordinate("lambda")) {
    detail::check_sites(N);
    unit_spectrum_ = heis_quantum_spectrum(spec_);
  }

  std::string name() const override { return "heisenberg_quantum"; }
  const std::vector<Coordinate>& z_space() const override { return space_; }
  double size() const override { return spec_.N; }
  // Finite-chain entropies are not additive in N (boundary and ring terms).
  bool extensive() const override { return false; }
  ModelKind kind() const override { return ModelKind::quantum; }
  double temperature_scale(std::span<const double> z) const override { return z[0]; }

  const HeisenbergSpec& spec() const { return spec_; }
  bool bond_double_counted() const { return periodic_bond_double_counted(spec_.N, spec_.bc); }

 protected:
  double entropy_unchecked(std::span<const double> z, double T) const override {
    return entropy_from_spectrum(unit_spectrum_, z[0] / T);
  }

 private:
  HeisenbergSpec spec_;
  std::vector<Coordinate> space_;
  std::vector<double> unit_spectrum_;
};

}  // namespace nernst::spin
