#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nernst/bh/kerr_newman.hpp"
#include "nernst/limits/lab.hpp"
#include "nernst/spin/heisenberg.hpp"
#include "nernst/spin/models.hpp"

using namespace nernst;
using namespace nernst::lab;
using num::LimitClass;

namespace {
const std::vector<std::vector<double>> kBGrid{{0.5}, {1.0}, {2.0}};
const std::vector<std::vector<double>> kKNGrid{{0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}};

std::vector<double> t_seq(const EntropyModel& m, const std::vector<std::vector<double>>& z, int steps = kDefaultSteps) {
  return default_t_sequence(default_t0(m, z), steps);
}
}  // namespace

TEST(HeatCapacity, TwoLevelValue) {
  const spin::QuantumParamagnetModel pm(1, 1);
  const std::vector<double> z{1.0};
  EXPECT_NEAR(heat_capacity(pm, z, 1.0), 0.419974341614026069, 1e-6);
  EXPECT_LT(heat_capacity(pm, z, std::ldexp(1.0, -8)), 1e-6);
  EXPECT_GE(heat_capacity(pm, z, std::ldexp(1.0, -8)), 0.0);
}

TEST(HeatCapacity, RotorPlateau) {
  const spin::ClassicalRotorModel rotor(1);
  const std::vector<double> z{1.0};
  EXPECT_NEAR(heat_capacity(rotor, z, 1e-3), 1.0, 1e-3);
  EXPECT_NEAR(heat_capacity(rotor, z, 1e-5), 1.0, 1e-5);
}

TEST(HeatCapacity, KerrNewmanStepStaysBelowPeak) {
  const bh::KerrNewmanModel kn;
  const std::vector<double> z{1.0, 1.0};
  const double t = 0.999 * kn.max_temperature(z);
  EXPECT_NO_THROW(heat_capacity(kn, z, t));
  EXPECT_GT(heat_capacity(kn, z, 0.01), 0.0);
}

TEST(TemperatureSequence, Defaults) {
  const auto t = default_t_sequence(2.0);
  ASSERT_EQ(t.size(), 13u);
  EXPECT_EQ(t.front(), 2.0);
  EXPECT_EQ(t.back(), 2.0 / 4096.0);
  EXPECT_THROW(default_t_sequence(1.0, 4), InputError);
  EXPECT_THROW(default_t_sequence(0.0), DomainError);
}

TEST(T0Classify, ParamagnetIsFiniteZero) {
  for (int tj : {1, 2, 5}) {
    const spin::QuantumParamagnetModel pm(3, tj);
    for (double b : {0.5, 1.0, 2.0}) {
      const std::vector<double> z{b};
      const auto e = t0_classify(pm, z, default_t_sequence(b));
      EXPECT_EQ(e.classification, LimitClass::finite);
      EXPECT_NEAR(e.value, 0.0, 1e-8);
    }
  }
}

TEST(T0Classify, ClassicalModelsDivergeLikeLogT) {
  const std::vector<double> z{1.0};
  const spin::ClassicalRotorModel rotor(1);
  const auto r = t0_classify(rotor, z, default_t_sequence(1.0));
  EXPECT_EQ(r.classification, LimitClass::diverges_neg);
  EXPECT_NEAR(r.slope, -1.0, 0.01);
  const spin::ClassicalHeisenbergLimitModel heis;
  const auto h = t0_classify(heis, z, default_t_sequence(1.0));
  EXPECT_EQ(h.classification, LimitClass::diverges_neg);
  EXPECT_NEAR(h.slope, -1.0, 0.01);
  // Extensive rate: N rotors diverge N times faster.
  const auto r3 = t0_classify(spin::ClassicalRotorModel(3), z, default_t_sequence(1.0));
  EXPECT_NEAR(r3.slope, -3.0, 0.03);
  EXPECT_THROW(t0_classify(rotor, z, std::vector<double>{1.0, 0.5, 0.25}), InputError);
}

TEST(T0Classify, QuantumHeisenbergKeepsGroundDegeneracy) {
  // Ferromagnetic ground multiplet of 2 spins 1/2 is threefold.
  const spin::QuantumHeisenbergModel q(2, 1, spin::Boundary::open);
  const std::vector<double> z{1.0};
  const auto e = t0_classify(q, z, default_t_sequence(1.0));
  EXPECT_EQ(e.classification, LimitClass::finite);
  EXPECT_NEAR(e.value, std::log(3.0), 1e-8);
}

TEST(InfiniteChainLimit, FiniteChainExtrapolatesToFreeEnergy) {
  for (double x : {0.5, 1.0, 2.0}) {
    std::vector<num::Sample> s;
    for (int n : {2, 4, 8, 16, 32, 64}) {
      s.push_back({static_cast<double>(n), spin::heis_classical_transfer(n, x, spin::Boundary::periodic).log_z / n});
    }
    const auto e = num::extrapolate_limit(s, num::LimitDirection::toward_infinity);
    ASSERT_EQ(e.classification, LimitClass::finite) << x;
    EXPECT_NEAR(e.value, -x * spin::heis_classical_f_limit(x, 1.0), 1e-6) << x;
  }
}

TEST(IteratedLimits, DerivedExpressionBothOrders) {
  for (auto order : {LimitOrder::n_then_j, LimitOrder::j_then_n}) {
    const auto r = iterated_limit_experiment(order);
    EXPECT_EQ(r.derived.outer.classification, LimitClass::diverges_pos) << to_string(order);
    EXPECT_NEAR(r.derived.outer.slope, 1.0, 0.02) << to_string(order);
    EXPECT_GE(r.quantum_min, 0.0);
    EXPECT_LE(r.classical_max, 0.0);
    for (const auto& [tj, gap] : r.gaps) {
      if (tj >= 40) {
        EXPECT_LT(std::abs(gap), 0.01);
      }
    }
  }
}

TEST(IteratedLimits, NStageIsFiniteAndFactorized) {
  const auto r = iterated_limit_experiment(LimitOrder::n_then_j);
  ASSERT_FALSE(r.derived.inner.empty());
  const auto& first = r.derived.inner.front();
  EXPECT_EQ(first.held, 2);
  EXPECT_EQ(first.estimate.classification, LimitClass::finite);
  EXPECT_NEAR(first.estimate.value, 0.832395581839938873, 1e-12);
  for (const auto& st : r.derived.inner) {
    EXPECT_EQ(st.estimate.classification, LimitClass::finite);
    EXPECT_NEAR(st.estimate.value, spin::pm_quantum_entropy(st.held, 1.0), 1e-12);
  }
}

TEST(IteratedLimits, PrintedExpressionIsReportedSeparately) {
  const auto r = iterated_limit_experiment(LimitOrder::n_then_j);
  EXPECT_EQ(r.printed.expression, Expression::printed);
  EXPECT_EQ(r.printed.inner.size(), r.derived.inner.size());
  // The printed per-spin values are negative, unlike any quantum entropy.
  bool negative = false;
  for (const auto& st : r.printed.inner)
    for (const auto& s : st.samples) negative = negative || s.value < 0.0;
  EXPECT_TRUE(negative);
  EXPECT_THROW(parse_order("sideways"), InputError);
  EXPECT_EQ(parse_order("JN"), LimitOrder::j_then_n);
  EXPECT_EQ(parse_order("N_then_J"), LimitOrder::n_then_j);
}

TEST(Audit, ParamagnetCompliant) {
  const spin::QuantumParamagnetModel pm(1, 1);
  const auto r = audit_model(pm, kBGrid, t_seq(pm, kBGrid));
  EXPECT_EQ(r.verdict, Verdict::compliant);
  ASSERT_TRUE(r.planck_spread.has_value());
  EXPECT_LT(*r.planck_spread, 1e-8);
  for (const auto& row : r.residual_table) EXPECT_LT(std::abs(row.residual), 1e-8);
  EXPECT_TRUE(r.third_law_holds.value_or(false));
  EXPECT_TRUE(r.stability);
  EXPECT_LT(r.heat_capacity.back().C, 1e-6);
}

TEST(Audit, ClassicalContinuityFailure) {
  const spin::ClassicalRotorModel rotor(1);
  const auto r = audit_model(rotor, kBGrid, t_seq(rotor, kBGrid));
  EXPECT_EQ(r.verdict, Verdict::continuity_failure);
  EXPECT_FALSE(r.planck_spread.has_value());
  for (const auto& row : r.residual_table) EXPECT_EQ(row.residual, -kInfinity);
  const spin::ClassicalHeisenbergLimitModel heis;
  EXPECT_EQ(audit_model(heis, kBGrid, t_seq(heis, kBGrid)).verdict, Verdict::continuity_failure);
}

TEST(Audit, KerrNewmanPlanckViolation) {
  const bh::KerrNewmanModel kn;
  const auto r = audit_model(kn, kKNGrid, t_seq(kn, kKNGrid));
  EXPECT_EQ(r.verdict, Verdict::planck_violation);
  ASSERT_TRUE(r.planck_spread.has_value());
  EXPECT_NEAR(*r.planck_spread, std::numbers::pi * (std::sqrt(5.0) - 1.0), 1e-6);
  EXPECT_NEAR(r.residual_table[0].residual, std::numbers::pi, 1e-6);
  EXPECT_NEAR(r.residual_table[1].residual, 2.0 * std::numbers::pi, 1e-6);
  EXPECT_NEAR(r.residual_table[2].residual, std::sqrt(5.0) * std::numbers::pi, 1e-6);
  EXPECT_FALSE(r.notes.empty());
  // The (0,1) and (1,0) rows alone differ by pi.
  const std::vector<std::vector<double>> pair{{0.0, 1.0}, {1.0, 0.0}};
  const auto two = audit_model(kn, pair, t_seq(kn, pair));
  EXPECT_EQ(two.verdict, Verdict::planck_violation);
  EXPECT_NEAR(two.planck_spread.value_or(0.0), std::numbers::pi, 1e-6);
}

TEST(Audit, DoubleCountedBondIsNoted) {
  const spin::QuantumHeisenbergModel q(2, 1, spin::Boundary::periodic);
  const std::vector<std::vector<double>> z{{1.0}};
  const auto r = audit_model(q, z, t_seq(q, z));
  bool noted = false;
  for (const auto& n : r.notes) noted = noted || n.find("twice") != std::string::npos;
  EXPECT_TRUE(noted);
}

TEST(Audit, VerdictStableUnderRefinement) {
  const spin::QuantumParamagnetModel pm(2, 3);
  const spin::ClassicalRotorModel rotor(2);
  const bh::KerrNewmanModel kn;
  const std::vector<std::pair<const EntropyModel*, std::vector<std::vector<double>>>> cases{
      {&pm, kBGrid}, {&rotor, kBGrid}, {&kn, kKNGrid}};
  for (const auto& [m, z] : cases) {
    const auto coarse = audit_model(*m, z, t_seq(*m, z, 10)).verdict;
    const auto fine = audit_model(*m, z, t_seq(*m, z, 14)).verdict;
    EXPECT_EQ(coarse, fine) << m->name();
  }
}

TEST(Audit, SpreadShrinksUnderRefinementForParamagnet) {
  const spin::QuantumParamagnetModel pm(1, 2);
  double prev = kInfinity;
  for (int steps : {6, 8, 10, 12}) {
    const auto r = audit_model(pm, kBGrid, t_seq(pm, kBGrid, steps));
    ASSERT_EQ(r.verdict, Verdict::compliant);
    EXPECT_LE(*r.planck_spread, prev);
    prev = *r.planck_spread;
  }
}

TEST(Audit, DeterministicJson) {
  const spin::QuantumParamagnetModel pm(1, 1);
  const auto a = io::dump(audit_to_json(audit_model(pm, kBGrid, t_seq(pm, kBGrid))));
  const auto b = io::dump(audit_to_json(audit_model(pm, kBGrid, t_seq(pm, kBGrid))));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("\"COMPLIANT\""), std::string::npos);
  EXPECT_THROW(audit_model(pm, {}, t_seq(pm, kBGrid)), InputError);
}
