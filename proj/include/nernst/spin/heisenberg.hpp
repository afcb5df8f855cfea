#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "nernst/errors.hpp"
#include "nernst/numerics/bessel.hpp"
#include "nernst/numerics/eigen.hpp"
#include "nernst/spin/gibbs.hpp"
#include "nernst/spin/paramagnet.hpp"

namespace nernst::spin {

enum class Boundary { periodic, open };

inline std::string_view to_string(Boundary bc) { return bc == Boundary::periodic ? "periodic" : "open"; }

inline Boundary parse_boundary(std::string_view s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "open") return Boundary::open;
  throw InputError("boundary condition must be 'periodic' or 'open', got '" + std::string(s) + "'");
}

// Bonds (i, i+1) for i < N-1, plus (N-1, 0) when periodic. A periodic pair
// of sites therefore carries the same bond twice.
inline std::vector<std::pair<int, int>> chain_bonds(int N, Boundary bc) {
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + 1 < N; ++i) bonds.emplace_back(i, i + 1);
  if (bc == Boundary::periodic && N >= 2) bonds.emplace_back(N - 1, 0);
  return bonds;
}

inline bool periodic_bond_double_counted(int N, Boundary bc) { return bc == Boundary::periodic && N == 2; }

// Open for N <= 2 (see periodic_bond_double_counted), periodic otherwise.
inline Boundary default_boundary(int N) { return N <= 2 ? Boundary::open : Boundary::periodic; }

// ---------------------------------------------------------------------------
// Classical chain, H = -lambda sum S_i . S_{i+1} with unit vectors, on the
// normalized product measure. With x = beta lambda the bond kernel expands as
// exp(x cos g) = sum_l (2l+1) i_l(x) P_l(cos g), so
//   periodic: Z_N = sum_l (2l+1) i_l(x)^N,    open: Z_N = i_0(x)^(N-1).

struct TransferSum {
  double log_z;        // ln Z_N
  double x_dlogz_dx;   // x d(ln Z_N)/dx = -<beta H>
  int terms;           // number of l terms kept
};

inline TransferSum heis_classical_transfer(int N, double x, Boundary bc, int l_max = num::kMaxBesselOrder) {
  if (N < 1) throw DomainError("heis_classical: N must be positive");
  if (!(x > 0.0)) throw DomainError("heis_classical: x = beta lambda must be positive");
  if (N == 1) return {0.0, 0.0, 1};  // a single site carries no bond

  if (bc == Boundary::open) {
    const double s_bond = rotor_classical_entropy(x);
    // ln i_0(x) = ln(sinh x / x); x d ln i_0 / dx = x coth x - 1 = ln i_0 - s_bond
    const double ln_i0 = x < 20.0 ? std::log(std::sinh(x) / x)
                                  : x - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * x)) - std::log(x);
    return {(N - 1) * ln_i0, (N - 1) * (ln_i0 - s_bond), 1};
  }

  const auto scaled = num::bessel_i_sph_scaled(l_max, x);
  // Ratios r_l = i_l / i_0 keep the sum bounded for any x.
  const double i0 = scaled[0];
  double sum = 0.0;     // sum (2l+1) r_l^N
  double dsum = 0.0;    // sum (2l+1) r_l^(N-1) i_l'/i_0
  int kept = -1;
  for (int l = 0; l <= l_max; ++l) {
    const double r = scaled[static_cast<std::size_t>(l)] / i0;
    const double term = (2.0 * l + 1.0) * std::pow(r, N);
    // i_0' = i_1, i_l' = i_{l-1} - (l+1)/x i_l
    const double next = l + 1 <= l_max ? scaled[static_cast<std::size_t>(l + 1)] / i0 : 0.0;
    const double deriv = l == 0 ? next : scaled[static_cast<std::size_t>(l - 1)] / i0 - (l + 1.0) / x * r;
    sum += term;
    dsum += (2.0 * l + 1.0) * std::pow(r, N - 1) * deriv;
    if (l > 0 && term < 1e-16 * sum) {
      kept = l;
      break;
    }
  }
  if (kept < 0) {
    throw NumericalError("heis_classical_Z_finite: transfer sum not converged within l_max = " +
                         std::to_string(l_max) + " at x = " + std::to_string(x));
  }
  // Z = i_0^N * sum, dZ/dx = N i_0^N * dsum
  const double ln_i0 = std::log(i0) + x;
  return {N * ln_i0 + std::log(sum), x * N * dsum / sum, kept + 1};
}

/// Partition value Z_N of the classical chain at x = beta lambda.
inline double heis_classical_Z_finite(int N, double x, Boundary bc, int l_max = num::kMaxBesselOrder) {
  return std::exp(heis_classical_transfer(N, x, bc, l_max).log_z);
}

/// Total entropy of the finite classical chain, S = ln Z + <beta H>.
inline double heis_classical_entropy_finite(int N, double x, Boundary bc) {
  const auto t = heis_classical_transfer(N, x, bc);
  return t.log_z - t.x_dlogz_dx;
}

/// Free energy per site in the infinite chain, f = -T ln(sinh(x)/x).
inline double heis_classical_f_limit(double beta, double lambda) {
  if (!(beta > 0.0) || !(lambda > 0.0)) throw DomainError("heis_classical_f_limit: beta and lambda must be positive");
  const double x = beta * lambda;
  if (x < 1e-3) return -(x * x / 6.0 - x * x * x * x / 180.0) / beta;
  const double ln_i0 = x < 20.0 ? std::log(std::sinh(x) / x)
                                : x - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * x)) - std::log(x);
  return -ln_i0 / beta;
}

/// Entropy per site of the infinite chain, -df/dT, which equals the rotor
/// form s(x) = ln(sinh x/x) - x coth x + 1 at x = beta lambda.
/// s(x) + ln x -> 1 - ln 2 as x -> infinity.
inline double heis_classical_entropy_limit(double beta, double lambda) {
  if (!(beta > 0.0) || !(lambda > 0.0)) {
    throw DomainError("heis_classical_entropy_limit: beta and lambda must be positive");
  }
  return rotor_classical_entropy(beta * lambda);
}

// ---------------------------------------------------------------------------
// Quantum chain, H = -(lambda/J^2) sum S_i . S_{i+1}.

struct HeisenbergSpec {
  int N = 2;
  int twoJ = 1;
  double lambda = 1.0;
  Boundary bc = Boundary::open;
};

inline constexpr std::uint64_t kMaxChainDimension = 1024;

/// Full spectrum of the quantum chain. Total S^z is conserved, so the
/// Hamiltonian is assembled and diagonalized one magnetization sector at a
/// time.
inline std::vector<double> heis_quantum_spectrum(const HeisenbergSpec& spec) {
  check_two_j(spec.twoJ);
  if (spec.N < 1) throw DomainError("heis_quantum: N must be positive");
  const int d = spec.twoJ + 1;
  std::uint64_t dim = 1;
  for (int i = 0; i < spec.N; ++i) {
    dim *= static_cast<std::uint64_t>(d);
    if (dim > kMaxChainDimension) throw DomainError("heis_quantum: Hilbert space dimension exceeds 1024");
  }

  // Basis state: local index k in [0, 2J] per site, 2m = 2k - 2J.
  std::map<int, std::vector<std::uint64_t>> sectors;  // 2 M_total -> states
  for (std::uint64_t s = 0; s < dim; ++s) {
    std::uint64_t rest = s;
    int two_m = 0;
    for (int i = 0; i < spec.N; ++i) {
      two_m += 2 * static_cast<int>(rest % d) - spec.twoJ;
      rest /= d;
    }
    sectors[two_m].push_back(s);
  }

  std::vector<std::uint64_t> stride(static_cast<std::size_t>(spec.N), 1);
  for (int i = 1; i < spec.N; ++i) stride[i] = stride[i - 1] * static_cast<std::uint64_t>(d);
  auto local = [&](std::uint64_t s, int i) { return static_cast<int>((s / stride[i]) % d); };

  const double pref = -4.0 * spec.lambda / (static_cast<double>(spec.twoJ) * spec.twoJ);  // -lambda/J^2
  const double jj = static_cast<double>(spec.twoJ) * (spec.twoJ + 2);               // 4 J(J+1)
  // <m+1|S^+|m> with 2m = tm: sqrt(J(J+1) - m(m+1)) = sqrt(4J(J+1) - tm(tm+2)) / 2
  auto raise = [&](int tm) { return 0.5 * std::sqrt(jj - static_cast<double>(tm) * (tm + 2)); };
  const auto bonds = chain_bonds(spec.N, spec.bc);

  std::vector<double> spectrum;
  spectrum.reserve(dim);
  for (const auto& [two_m, states] : sectors) {
    std::map<std::uint64_t, std::size_t> index;
    for (std::size_t k = 0; k < states.size(); ++k) index[states[k]] = k;
    num::Matrix h(states.size());
    for (std::size_t col = 0; col < states.size(); ++col) {
      const std::uint64_t s = states[col];
      for (const auto& [i, j] : bonds) {
        const int ki = local(s, i);
        const int kj = local(s, j);
        const int tmi = 2 * ki - spec.twoJ;
        const int tmj = 2 * kj - spec.twoJ;
        h(col, col) += pref * 0.25 * tmi * tmj;
        // (S+_i S-_j + S-_i S+_j) / 2
        if (ki < spec.twoJ && kj > 0) {
          const std::uint64_t t = s + stride[i] - stride[j];
          const double amp = 0.5 * raise(tmi) * raise(tmj - 2);
          h(index.at(t), col) += pref * amp;
        }
        if (ki > 0 && kj < spec.twoJ) {
          const std::uint64_t t = s - stride[i] + stride[j];
          const double amp = 0.5 * raise(tmi - 2) * raise(tmj);
          h(index.at(t), col) += pref * amp;
        }
      }
    }
    const auto eig = num::sym_eigenvalues(std::move(h));
    spectrum.insert(spectrum.end(), eig.begin(), eig.end());
  }
  std::sort(spectrum.begin(), spectrum.end());
  return spectrum;
}

/// Total von Neumann entropy of the quantum chain at temperature T.
inline double heis_quantum_entropy_small(const HeisenbergSpec& spec, double T) {
  if (!(T > 0.0)) throw DomainError("heis_quantum_entropy_small: T must be positive");
  const auto spectrum = heis_quantum_spectrum(spec);
  return entropy_from_spectrum(spectrum, 1.0 / T);
}

}  // namespace nernst::spin
