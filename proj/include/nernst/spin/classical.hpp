#pragma once

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "nernst/core/model.hpp"
#include "nernst/errors.hpp"
#include "nernst/numerics/quadrature.hpp"
#include "nernst/spin/heisenberg.hpp"
#include "nernst/spin/paramagnet.hpp"

namespace nernst::spin {

enum class ClassicalKind { rotor, heisenberg };

inline std::string_view to_string(ClassicalKind k) { return k == ClassicalKind::rotor ? "rotor" : "heisenberg_classical"; }

/// Classical unit-vector models on the normalized product measure.
/// rotor:      H = -coupling sum_i (cos theta_i + 1)
/// heisenberg: H = -coupling sum_bonds S_i . S_j
struct ClassicalSpec {
  ClassicalKind kind = ClassicalKind::rotor;
  int N = 1;
  double coupling = 1.0;
  Boundary bc = Boundary::periodic;
};

inline int bond_count(const ClassicalSpec& spec) {
  return spec.kind == ClassicalKind::rotor ? 0 : static_cast<int>(chain_bonds(spec.N, spec.bc).size());
}

/// Minimum of H over configurations (all spins aligned).
inline double classical_ground_energy(const ClassicalSpec& spec) {
  if (spec.kind == ClassicalKind::rotor) return -2.0 * spec.coupling * spec.N;
  return -spec.coupling * bond_count(spec);
}

struct QuadratureEstimate {
  double value;        // -integral of delta ln delta
  double error_bound;  // |value - value at the coarser rule|
  double log_z;        // ln of integral exp(-beta (H - shift))
};

inline constexpr int kMaxQuadratureSites = 4;
inline constexpr int kMaxQuadratureNodes = 64;

namespace detail {

struct WeightSums {
  double w = 0.0;      // sum W w
  double wlnw = 0.0;   // sum W w ln w
};

inline void check_classical_spec(const ClassicalSpec& spec, std::string_view op) {
  if (spec.N < 1) throw DomainError(std::string(op) + ": N must be positive");
  if (!(spec.coupling >= 0.0)) throw DomainError(std::string(op) + ": coupling must be non-negative");
}

// Rotor: the energy depends only on u_i = cos theta_i, so the azimuths
// integrate to one. Tensor-product Gauss-Legendre over (u_1..u_N), weight 1/2.
inline WeightSums rotor_sums(int N, double beta_b, double beta_shift, const num::QuadratureRule& rule) {
  WeightSums out;
  const std::size_t n = rule.nodes.size();
  std::vector<std::size_t> idx(static_cast<std::size_t>(N), 0);
  while (true) {
    double weight = 1.0;
    double log_w = beta_shift;  // -beta (H - shift)
    for (std::size_t k : idx) {
      weight *= 0.5 * rule.weights[k];
      log_w += beta_b * (rule.nodes[k] + 1.0);
    }
    const double w = std::exp(log_w);
    out.w += weight * w;
    out.wlnw += weight * w * log_w;
    std::size_t d = 0;
    for (; d < idx.size(); ++d) {
      if (++idx[d] < n) break;
      idx[d] = 0;
    }
    if (d == idx.size()) break;
  }
  return out;
}

struct Vec3 {
  double x, y, z;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

// Heisenberg: rotational invariance fixes spin 0 along z and spin 1 in the
// xz-plane. Remaining coordinates: u_1; (u_k, phi_k) for k >= 2. Gauss-Legendre
// in u (weight 1/2), trapezoid in phi (weight 1/m), exact for the periodic
// integrand up to aliasing.
class HeisenbergIntegrator {
 public:
  HeisenbergIntegrator(const ClassicalSpec& spec, double beta, double shift, const num::QuadratureRule& rule)
      : n_(spec.N), x_(beta * spec.coupling), shift_(beta * shift), rule_(rule) {
    const std::size_t m = rule.nodes.size();
    for (std::size_t j = 0; j < m; ++j) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
      cos_phi_.push_back(std::cos(phi));
      sin_phi_.push_back(std::sin(phi));
    }
    periodic_ = spec.bc == Boundary::periodic && n_ >= 2;
    spins_.resize(static_cast<std::size_t>(n_));
    spins_[0] = {0.0, 0.0, 1.0};
  }

  WeightSums run() {
    sums_ = {};
    if (n_ == 1) {
      // No bonds; the density is uniform.
      const double log_w = shift_;
      sums_.w = std::exp(log_w);
      sums_.wlnw = sums_.w * log_w;
      return sums_;
    }
    recurse(1, 1.0, 0.0);
    return sums_;
  }

 private:
  void recurse(int k, double weight, double log_w) {
    const std::size_t nu = rule_.nodes.size();
    const bool last = k == n_ - 1;
    for (std::size_t i = 0; i < nu; ++i) {
      const double u = rule_.nodes[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
      const double wu = 0.5 * rule_.weights[i];
      const std::size_t nphi = k == 1 ? 1 : cos_phi_.size();
      const double wphi = k == 1 ? 1.0 : 1.0 / static_cast<double>(nphi);
      for (std::size_t j = 0; j < nphi; ++j) {
        Vec3& v = spins_[static_cast<std::size_t>(k)];
        v = k == 1 ? Vec3{s, 0.0, u} : Vec3{s * cos_phi_[j], s * sin_phi_[j], u};
        double lw = log_w + x_ * dot(spins_[static_cast<std::size_t>(k - 1)], v);
        const double wt = weight * wu * wphi;
        if (last) {
          if (periodic_) lw += x_ * dot(v, spins_[0]);
          lw += shift_;
          const double w = std::exp(lw);
          sums_.w += wt * w;
          sums_.wlnw += wt * w * lw;
        } else {
          recurse(k + 1, wt, lw);
        }
      }
    }
  }

  int n_;
  double x_;
  double shift_;
  const num::QuadratureRule& rule_;
  bool periodic_ = false;
  std::vector<double> cos_phi_, sin_phi_;
  std::vector<Vec3> spins_;
  WeightSums sums_;
};

inline WeightSums classical_sums(const ClassicalSpec& spec, double beta, double shift, int nodes) {
  const auto rule = num::gauss_legendre(nodes);
  if (spec.kind == ClassicalKind::rotor) {
    return rotor_sums(spec.N, beta * spec.coupling, beta * shift, rule);
  }
  HeisenbergIntegrator integ(spec, beta, shift, rule);
  return integ.run();
}

}  // namespace detail

/// Total entropy -integral delta ln delta of the classical Gibbs density by
/// tensor-product quadrature, evaluated with energies measured from
/// energy_shift (the result does not depend on it beyond roundoff).
inline QuadratureEstimate classical_entropy_quadrature(const ClassicalSpec& spec, double beta, int nodes = 32,
                                                       double energy_shift = 0.0) {
  detail::check_classical_spec(spec, "classical_entropy_quadrature");
  if (spec.N > kMaxQuadratureSites) {
    throw InputError("classical_entropy_quadrature: N = " + std::to_string(spec.N) + " exceeds the limit of 4");
  }
  if (nodes < 2 || nodes > kMaxQuadratureNodes) {
    throw InputError("classical_entropy_quadrature: nodes must lie in [2, 64]");
  }
  if (!(beta >= 0.0)) throw DomainError("classical_entropy_quadrature: beta must be non-negative");
  auto eval = [&](int n) {
    const auto sums = detail::classical_sums(spec, beta, energy_shift, n);
    const double log_z = std::log(sums.w);
    return std::pair{log_z - sums.wlnw / sums.w, log_z};
  };
  const auto [value, log_z] = eval(nodes);
  const auto [coarse, coarse_log_z] = eval(std::max(2, (2 * nodes) / 3));
  (void)coarse_log_z;
  return {value, std::abs(value - coarse), log_z};
}

struct MonteCarloEstimate {
  double value;
  double std_error;
  std::uint64_t samples;
};

inline constexpr int kMonteCarloBatches = 20;

/// Monte Carlo estimate of the classical entropy: configurations are drawn
/// uniformly from the normalized product measure and reweighted by
/// exp(-beta (H - shift)). The pooled ratio estimate is
/// ln <w> - <w ln w>/<w>; its standard error comes from batch means.
/// Batch b draws from mt19937_64 seeded with seed_seq{seed, b}.
inline MonteCarloEstimate classical_entropy_montecarlo(const ClassicalSpec& spec, double beta, std::uint64_t samples,
                                                       std::uint64_t seed, double energy_shift = kInfinity) {
  detail::check_classical_spec(spec, "classical_entropy_montecarlo");
  if (samples < 10000) throw InputError("classical_entropy_montecarlo: at least 10^4 samples required");
  if (!(beta >= 0.0)) throw DomainError("classical_entropy_montecarlo: beta must be non-negative");
  const double shift = std::isinf(energy_shift) ? classical_ground_energy(spec) : energy_shift;
  const auto bonds = chain_bonds(spec.N, spec.bc);
  const std::uint64_t per_batch = samples / kMonteCarloBatches;

  std::vector<detail::Vec3> v(static_cast<std::size_t>(spec.N));
  double tot_w = 0.0;
  double tot_wlnw = 0.0;
  std::uint64_t total = 0;
  std::vector<double> batch_values;
  for (int b = 0; b < kMonteCarloBatches; ++b) {
    const std::uint64_t count = b + 1 == kMonteCarloBatches ? samples - per_batch * (kMonteCarloBatches - 1) : per_batch;
    std::seed_seq sseq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(b)};
    std::mt19937_64 rng(sseq);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    double bw = 0.0;
    double bwlnw = 0.0;
    for (std::uint64_t s = 0; s < count; ++s) {
      double energy = 0.0;
      if (spec.kind == ClassicalKind::rotor) {
        for (int i = 0; i < spec.N; ++i) energy -= spec.coupling * (unit(rng) + 1.0);
      } else {
        for (auto& vi : v) {
          const double u = unit(rng);
          const double phi = angle(rng);
          const double r = std::sqrt(std::max(0.0, 1.0 - u * u));
          vi = {r * std::cos(phi), r * std::sin(phi), u};
        }
        for (const auto& [i, j] : bonds) energy -= spec.coupling * detail::dot(v[i], v[j]);
      }
      const double log_w = -beta * (energy - shift);
      const double w = std::exp(log_w);
      bw += w;
      bwlnw += w * log_w;
    }
    const double n = static_cast<double>(count);
    batch_values.push_back(std::log(bw / n) - bwlnw / bw);
    tot_w += bw;
    tot_wlnw += bwlnw;
    total += count;
  }
  const double value = tot_w > 0.0 ? std::log(tot_w / static_cast<double>(total)) - tot_wlnw / tot_w : 0.0;
  double mean = 0.0;
  for (double x : batch_values) mean += x;
  mean /= kMonteCarloBatches;
  double var = 0.0;
  for (double x : batch_values) var += (x - mean) * (x - mean);
  var /= (kMonteCarloBatches - 1);
  return {value, std::sqrt(var / kMonteCarloBatches), total};
}

struct GibbsDensityReport {
  double max_density;
  bool exceeds_one;
  double shift_invariance_gap;  // entropy(H) - entropy(H - E0)
};

/// Supremum of the Gibbs density against the normalized measure, attained at
/// the aligned ground configuration: exp(-beta (E0 - shift)) / Z_shift.
inline GibbsDensityReport classical_density_report(const ClassicalSpec& spec, double beta) {
  detail::check_classical_spec(spec, "classical_density_report");
  if (!(beta >= 0.0)) throw DomainError("classical_density_report: beta must be non-negative");
  double log_max = 0.0;
  if (spec.kind == ClassicalKind::rotor) {
    // per rotor 2b / (1 - e^{-2b})
    const double b = beta * spec.coupling;
    log_max = b > 0.0 ? spec.N * (std::log(2.0 * b) - std::log(-std::expm1(-2.0 * b))) : 0.0;
  } else {
    const double x = beta * spec.coupling;
    log_max = x > 0.0 ? x * bond_count(spec) - heis_classical_transfer(spec.N, x, spec.bc).log_z : 0.0;
  }
  const double e0 = classical_ground_energy(spec);
  double gap;
  if (spec.N <= kMaxQuadratureSites) {
    const int nodes = spec.kind == ClassicalKind::rotor || spec.N <= 3 ? 32 : 16;
    gap = classical_entropy_quadrature(spec, beta, nodes, 0.0).value -
          classical_entropy_quadrature(spec, beta, nodes, e0).value;
  } else {
    gap = classical_entropy_montecarlo(spec, beta, 20000, 1, 0.0).value -
          classical_entropy_montecarlo(spec, beta, 20000, 1, e0).value;
  }
  const double max_density = std::exp(log_max);
  return {max_density, max_density > 1.0, gap};
}

}  // namespace nernst::spin
