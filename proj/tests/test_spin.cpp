#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nernst/model_spec.hpp"
#include "nernst/numerics/bessel.hpp"
#include "nernst/numerics/diff.hpp"
#include "nernst/spin/classical.hpp"
#include "nernst/spin/heisenberg.hpp"
#include "nernst/spin/models.hpp"
#include "nernst/spin/paramagnet.hpp"

using namespace nernst;
using namespace nernst::spin;

// Reference values below were computed independently at 30 digits.

TEST(Paramagnet, ClosedFormValues) {
  EXPECT_NEAR(pm_quantum_entropy(1, 1.0), 0.365333855087207608, 1e-15);
  EXPECT_NEAR(pm_quantum_entropy(2, 1.0), 0.832395581839938873, 1e-15);
  EXPECT_NEAR(pm_quantum_entropy(1, 1.0), std::log(2.0 * std::cosh(1.0)) - std::tanh(1.0), 1e-15);
  EXPECT_EQ(pm_quantum_entropy(3, 0.0), std::log(4.0));
  // Tiny entropies keep relative precision: leading term e^{-bd}(1 + bd), d = 2/5.
  EXPECT_NEAR(pm_quantum_entropy(5, 800.0) / (std::exp(-320.0) * 321.0), 1.0, 1e-12);
}

TEST(Paramagnet, BoundsAndErrors) {
  for (int tj = 1; tj <= 12; ++tj)
    for (double b : {0.0, 0.01, 0.5, 3.0, 40.0}) {
      const double s = pm_quantum_entropy(tj, b);
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, std::log(tj + 1.0) + 1e-15);
    }
  EXPECT_THROW(pm_quantum_entropy(0, 1.0), DomainError);
  EXPECT_THROW(pm_quantum_entropy(1, -1.0), DomainError);
}

TEST(Paramagnet, TraceOracle) {
  EXPECT_NEAR(pm_quantum_entropy_trace({2, 1, 1.0}, 1.0), 0.730667710174415, 1e-14);
  EXPECT_NEAR(pm_quantum_entropy_trace({1, 2, 1.0}, 1.0), pm_quantum_entropy(2, 1.0), 1e-12);
  EXPECT_NEAR(pm_quantum_entropy_trace({3, 3, 1.0}, 1e8), 3.0 * std::log(4.0), 1e-6);
  EXPECT_THROW(pm_quantum_entropy_trace({7, 3, 1.0}, 1.0), DomainError);  // 4^7 > 4096
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> n(1, 4), tj(1, 3);
  std::uniform_real_distribution<double> t(0.1, 10.0);
  for (int i = 0; i < 50; ++i) {
    const ParamagnetSpec spec{n(rng), tj(rng), 1.0};
    const double T = t(rng);
    const double closed = spec.N * pm_quantum_entropy(spec.twoJ, spec.B / T);
    EXPECT_NEAR(pm_quantum_entropy_trace(spec, T), closed, 1e-12 * std::max(1.0, closed));
  }
}

TEST(Paramagnet, SmallEntropiesAgreeRelatively) {
  for (double T : {0.1, 0.05, 0.02}) {
    const double closed = 3.0 * pm_quantum_entropy(2, 1.0 / T);
    EXPECT_GT(closed, 0.0);
    EXPECT_NEAR(pm_quantum_entropy_trace({3, 2, 1.0}, T) / closed, 1.0, 1e-12) << T;
  }
}

TEST(Paramagnet, ShiftInvariantAndTemperatureConsistent) {
  // The +1 in H = -B(S^z/J + 1) shifts every level equally; entropy ignores it.
  std::vector<double> e{-2.0, 0.0};
  std::vector<double> shifted{-1.0, 1.0};
  EXPECT_NEAR(entropy_from_spectrum(e, 0.7), entropy_from_spectrum(shifted, 0.7), 1e-15);
  // (dS/dT) / (dU/dT) = 1/T
  for (int tj : {1, 2, 5}) {
    for (double T : {0.5, 1.0, 2.0}) {
      const double ds = num::finite_diff([&](double t) { return pm_quantum_entropy(tj, 1.0 / t); }, T);
      const double du = num::finite_diff([&](double t) { return pm_quantum_energy(tj, 1.0, t); }, T);
      EXPECT_NEAR(ds / du, 1.0 / T, 1e-6);
    }
  }
}

TEST(Paramagnet, ApproachesRotorAfterLevelCount) {
  EXPECT_NEAR(pm_quantum_entropy(40, 1.0) - std::log(41.0) - rotor_classical_entropy(1.0), -0.006849105874, 1e-11);
  EXPECT_NEAR(pm_quantum_entropy(80, 1.0) - std::log(81.0) - rotor_classical_entropy(1.0), -0.003436967643, 1e-11);
  double prev = 1.0;
  for (int tj = 2; tj <= 200; tj *= 2) {
    const double gap = std::abs(pm_quantum_entropy(tj, 1.0) - std::log(tj + 1.0) - rotor_classical_entropy(1.0));
    EXPECT_LT(gap, prev);
    prev = gap;
  }
}

TEST(Paramagnet, PrintedExpression) {
  EXPECT_NEAR(pm_quantum_entropy_as_printed(1, 1, 1.0), -1.67198086564034, 1e-13);
  EXPECT_NEAR(pm_quantum_entropy_as_printed(1, 2, 1.0), -0.324122060909727, 1e-13);
  // Per spin it tends to -b/J for large N.
  EXPECT_NEAR(pm_quantum_entropy_as_printed(64, 4, 1.0) / 64.0, -0.5, 1e-12);
}

TEST(Rotor, ClosedFormValues) {
  EXPECT_NEAR(rotor_classical_entropy(1.0), -0.151595923928135670, 1e-15);
  EXPECT_NEAR(rotor_classical_entropy(10.0), -1.99573231683821715, 1e-14);
  EXPECT_EQ(rotor_classical_entropy(0.0), 0.0);
  EXPECT_NEAR(rotor_classical_entropy(1e-4), -1e-8 / 6.0 + 1e-16 / 60.0, 1e-24);
  EXPECT_NEAR(rotor_classical_entropy(100.0) + std::log(100.0), 0.306852819440054691, 1e-12);
  // Continuity across the series and asymptotic branch points.
  for (double b : {1e-3, 20.0}) {
    EXPECT_NEAR(rotor_classical_entropy(b * (1 - 1e-12)), rotor_classical_entropy(b * (1 + 1e-12)), 1e-11);
  }
  for (double b = 1e-3; b < 1e3; b *= 1.7) EXPECT_LE(rotor_classical_entropy(b), 0.0);
}

TEST(HeisenbergClassical, TransferIdentity) {
  for (double x : {0.5, 1.0, 2.0, 5.0}) {
    const double z2 = heis_classical_Z_finite(2, x, Boundary::periodic);
    EXPECT_NEAR(z2, std::sinh(2.0 * x) / (2.0 * x), 1e-10 * z2);
  }
  EXPECT_NEAR(heis_classical_Z_finite(2, 1.0, Boundary::periodic), 1.81343020392350938, 1e-14);
  for (int n : {1, 2, 5}) {
    EXPECT_NEAR(heis_classical_Z_finite(n, 1.0, Boundary::open), std::pow(1.17520119364380146, n - 1), 1e-13);
  }
}

TEST(HeisenbergClassical, EntropyMatchesDerivativeOfLogZ) {
  for (auto bc : {Boundary::periodic, Boundary::open}) {
    for (int n : {2, 3, 6}) {
      for (double x : {0.3, 1.0, 4.0}) {
        // S = ln Z - x d ln Z / dx
        auto lnz = [&](double y) { return heis_classical_transfer(n, y, bc).log_z; };
        const double fd = lnz(x) - x * num::finite_diff_richardson(lnz, x, 1e-3);
        EXPECT_NEAR(heis_classical_entropy_finite(n, x, bc), fd, 1e-9);
      }
    }
  }
}

TEST(HeisenbergClassical, TruncationFailureIsReported) {
  EXPECT_THROW(heis_classical_transfer(2, 1e5, Boundary::periodic), NumericalError);
  EXPECT_THROW(heis_classical_Z_finite(2, 0.0, Boundary::periodic), DomainError);
}

TEST(HeisenbergClassical, InfiniteChain) {
  EXPECT_NEAR(heis_classical_f_limit(1.0, 1.0), -0.161439361571195634, 1e-15);
  EXPECT_NEAR(heis_classical_f_limit(2.0, 0.5), -0.161439361571195634 / 2.0, 1e-15);
  EXPECT_NEAR(heis_classical_f_limit(1e-9, 1.0), 0.0, 1e-9);
  EXPECT_NEAR(heis_classical_entropy_limit(1.0, 1.0), -0.151595923928135670, 1e-15);
  // s = -df/dT
  for (double T : {0.5, 1.0, 3.0}) {
    const double s = -num::finite_diff_richardson([](double t) { return heis_classical_f_limit(1.0 / t, 1.0); }, T,
                                                  1e-3);
    EXPECT_NEAR(heis_classical_entropy_limit(1.0 / T, 1.0), s, 1e-9);
  }
  // Normalized-measure asymptote; the other measure convention is lower by ln 4 pi per site.
  EXPECT_NEAR(heis_classical_entropy_limit(100.0, 1.0) + std::log(100.0), 1.0 - std::numbers::ln2, 1e-3);
  EXPECT_NEAR(1.0 - std::numbers::ln2 - kMeasureOffset, 1.0 - std::log(8.0 * std::numbers::pi), 1e-15);
}

TEST(HeisenbergClassical, FiniteChainApproachesInfiniteChain) {
  for (double x : {0.5, 1.0, 2.0}) {
    const double target = std::log(std::sinh(x) / x);
    const double per_site = heis_classical_transfer(32, x, Boundary::periodic).log_z / 32.0;
    // Leading correction is ln(1 + 3 r^N) / N with r = i1/i0 = coth x - 1/x.
    const double r = 1.0 / std::tanh(x) - 1.0 / x;
    EXPECT_NEAR(per_site - target, std::log1p(3.0 * std::pow(r, 32)) / 32.0, 1e-3 * std::pow(r, 32) + 1e-15);
  }
}

TEST(HeisenbergQuantum, TwoSiteSpectrumAndEntropy) {
  const auto e = heis_quantum_spectrum({2, 1, 1.0, Boundary::open});
  ASSERT_EQ(e.size(), 4u);
  EXPECT_NEAR(e[0], -1.0, 1e-14);
  EXPECT_NEAR(e[1], -1.0, 1e-14);
  EXPECT_NEAR(e[2], -1.0, 1e-14);
  EXPECT_NEAR(e[3], 3.0, 1e-14);
  EXPECT_NEAR(heis_quantum_entropy_small({2, 1, 1.0, Boundary::open}, 1.0), 1.12897160240765792, 1e-14);
  EXPECT_NEAR(heis_quantum_entropy_small({2, 1, 1.0, Boundary::open}, 1e-3), std::log(3.0), 1e-12);
  EXPECT_NEAR(heis_quantum_entropy_small({4, 3, 1.0, Boundary::periodic}, 1e7), 4.0 * std::log(4.0), 1e-5);
}

TEST(HeisenbergQuantum, SpectrumProperties) {
  // Ferromagnetic ground multiplet: energy -lambda * bonds (S_i.S_j = J^2 at full alignment), degeneracy 2NJ+1.
  for (int tj : {1, 2, 3}) {
    for (int n : {2, 3, 4}) {
      std::uint64_t dim = 1;
      for (int i = 0; i < n; ++i) dim *= tj + 1;
      if (dim > kMaxChainDimension) continue;
      for (auto bc : {Boundary::open, Boundary::periodic}) {
        const auto e = heis_quantum_spectrum({n, tj, 1.0, bc});
        const double bonds = static_cast<double>(chain_bonds(n, bc).size());
        const int degeneracy = n * tj + 1;
        for (int k = 0; k < degeneracy; ++k) EXPECT_NEAR(e[k], -bonds, 1e-10);
        if (degeneracy < static_cast<int>(e.size())) {
          EXPECT_GT(e[degeneracy], -bonds + 1e-6);
        }
        double trace = 0.0;
        for (double v : e) trace += v;
        EXPECT_NEAR(trace, 0.0, 1e-9);  // S_i.S_j is traceless for i != j
      }
    }
  }
  EXPECT_THROW(heis_quantum_spectrum({6, 3, 1.0, Boundary::open}), DomainError);  // 4^6 > 1024
}

TEST(HeisenbergQuantum, BoundaryDefaults) {
  EXPECT_EQ(default_boundary(2), Boundary::open);
  EXPECT_EQ(default_boundary(3), Boundary::periodic);
  EXPECT_TRUE(periodic_bond_double_counted(2, Boundary::periodic));
  EXPECT_FALSE(periodic_bond_double_counted(3, Boundary::periodic));
  // The doubled bond doubles the spectrum.
  const auto open = heis_quantum_spectrum({2, 1, 1.0, Boundary::open});
  const auto ring = heis_quantum_spectrum({2, 1, 1.0, Boundary::periodic});
  for (std::size_t i = 0; i < open.size(); ++i) EXPECT_NEAR(ring[i], 2.0 * open[i], 1e-14);
}

TEST(ClassicalQuadrature, RotorMatchesClosedForm) {
  const auto q1 = classical_entropy_quadrature({ClassicalKind::rotor, 1, 1.0}, 1.0);
  EXPECT_NEAR(q1.value, -0.151595923928135670, 1e-12);
  EXPECT_LT(q1.error_bound, 1e-8);
  const auto q3 = classical_entropy_quadrature({ClassicalKind::rotor, 3, 1.0}, 1.0);
  EXPECT_NEAR(q3.value, 3.0 * -0.151595923928135670, 1e-7);
}

TEST(ClassicalQuadrature, HeisenbergMatchesTransferExpansion) {
  for (auto bc : {Boundary::periodic, Boundary::open}) {
    for (int n : {2, 3, 4}) {
      const int nodes = n == 4 ? 20 : 32;
      const auto q = classical_entropy_quadrature({ClassicalKind::heisenberg, n, 1.0, bc}, 1.0, nodes);
      EXPECT_NEAR(q.value, heis_classical_entropy_finite(n, 1.0, bc), 1e-6) << n;
      EXPECT_NEAR(q.log_z, heis_classical_transfer(n, 1.0, bc).log_z, 1e-8) << n;
    }
  }
}

TEST(ClassicalQuadrature, ShiftInvarianceAndLimits) {
  const ClassicalSpec spec{ClassicalKind::heisenberg, 3, 1.5, Boundary::periodic};
  const double a = classical_entropy_quadrature(spec, 1.0, 24, 0.0).value;
  const double b = classical_entropy_quadrature(spec, 1.0, 24, classical_ground_energy(spec)).value;
  EXPECT_NEAR(a, b, 1e-12);
  EXPECT_THROW(classical_entropy_quadrature({ClassicalKind::rotor, 5, 1.0}, 1.0), InputError);
  EXPECT_THROW(classical_entropy_quadrature({ClassicalKind::rotor, 2, 1.0}, 1.0, 65), InputError);
}

TEST(ClassicalMonteCarlo, RotorWithinThreeSigma) {
  const auto mc = classical_entropy_montecarlo({ClassicalKind::rotor, 1, 1.0}, 1.0, 1000000, 42);
  EXPECT_NEAR(mc.value, -0.151595923928135670, 3.0 * mc.std_error);
  EXPECT_GT(mc.std_error, 0.0);
  EXPECT_LT(mc.std_error, 1e-3);
}

TEST(ClassicalMonteCarlo, ZeroCouplingIsExactlyZero) {
  for (std::uint64_t n : {10000ull, 123457ull}) {
    EXPECT_EQ(classical_entropy_montecarlo({ClassicalKind::rotor, 3, 1.0}, 0.0, n, 9).value, 0.0);
  }
}

TEST(ClassicalMonteCarlo, ReproducibleGivenSeed) {
  const ClassicalSpec spec{ClassicalKind::heisenberg, 4, 1.0, Boundary::periodic};
  const auto a = classical_entropy_montecarlo(spec, 1.0, 40000, 5);
  const auto b = classical_entropy_montecarlo(spec, 1.0, 40000, 5);
  const auto c = classical_entropy_montecarlo(spec, 1.0, 40000, 6);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_NE(a.value, c.value);
  EXPECT_THROW(classical_entropy_montecarlo(spec, 1.0, 9999, 5), InputError);
}

TEST(DensityReport, RotorAndHeisenberg) {
  const auto r = classical_density_report({ClassicalKind::rotor, 1, 1.0}, 1.0);
  EXPECT_NEAR(r.max_density, 2.31303528549933130, 1e-14);
  EXPECT_TRUE(r.exceeds_one);
  EXPECT_NEAR(r.shift_invariance_gap, 0.0, 1e-12);
  const auto small = classical_density_report({ClassicalKind::rotor, 1, 1.0}, 1e-9);
  EXPECT_NEAR(small.max_density, 1.0, 1e-8);
  const auto h = classical_density_report({ClassicalKind::heisenberg, 3, 1.0, Boundary::periodic}, 2.0);
  EXPECT_GT(h.max_density, 1.0);
  EXPECT_NEAR(h.shift_invariance_gap, 0.0, 1e-12);
  for (double beta : {0.1, 1.0, 5.0}) {
    EXPECT_GE(classical_density_report({ClassicalKind::heisenberg, 6, 1.0, Boundary::open}, beta).max_density, 1.0);
  }
}

TEST(Models, QuantumHeisenbergScalesWithLambda) {
  const QuantumHeisenbergModel m(3, 1, Boundary::periodic);
  for (double lambda : {0.5, 2.0}) {
    EXPECT_NEAR(m.entropy(std::vector<double>{lambda}, 1.3),
                heis_quantum_entropy_small({3, 1, lambda, Boundary::periodic}, 1.3), 1e-13);
  }
}

TEST(ModelSpec, ParsesAllModels) {
  EXPECT_EQ(parse_model_spec(R"({"model":"paramagnet","N":2,"twoJ":1,"B":1.0})").model->size(), 2.0);
  const auto pm = parse_model_spec(R"({"model":"paramagnet","N":2,"twoJ":1,"B":1.0})");
  ASSERT_TRUE(pm.z.has_value());
  EXPECT_NEAR(pm.model->entropy(*pm.z, 1.0), 0.730667710174415, 1e-14);
  EXPECT_EQ(parse_model_spec(R"({"model":"rotor","N":3})").model->name(), "rotor");
  EXPECT_EQ(parse_model_spec(R"({"model":"heisenberg_classical"})").model->name(), "heisenberg_classical");
  EXPECT_EQ(parse_model_spec(R"({"model":"heisenberg_classical","N":4,"bc":"open"})").model->name(),
            "heisenberg_classical_chain");
  EXPECT_EQ(parse_model_spec(R"({"model":"heisenberg_quantum","N":2,"twoJ":1})").model->name(),
            "heisenberg_quantum");
  const auto kn = parse_model_spec(R"({"model":"kerr_newman","J":1,"Q":0})");
  EXPECT_EQ(kn.z->size(), 2u);
  EXPECT_THROW(parse_model_spec(R"({"model":"ideal_gas"})"), InputError);
  EXPECT_THROW(parse_model_spec(R"({"model":"paramagnet","twoJ":"x"})"), InputError);
  EXPECT_THROW(parse_model_spec("{not json"), InputError);
  EXPECT_THROW(parse_model_spec(R"({"model":"heisenberg_quantum","bc":"twisted"})"), InputError);
}
