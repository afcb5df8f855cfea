#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nernst/core/model.hpp"
#include "nernst/core/table.hpp"
#include "nernst/errors.hpp"
#include "nernst/io/json_io.hpp"
#include "nernst/numerics/diff.hpp"
#include "nernst/numerics/extrapolate.hpp"
#include "nernst/spin/models.hpp"
#include "nernst/spin/paramagnet.hpp"

namespace nernst::lab {

using num::LimitClass;
using num::LimitEstimate;
using num::Sample;

/// C = T (dS/dT)_Z by a central difference. The step is the numerics default,
/// clamped to T/4 and to half the distance to the model's maximum temperature.
inline double heat_capacity(const EntropyModel& model, std::span<const double> z, double T) {
  model.validate(z, T);
  // Relative step: S varies on the scale of T itself as T -> 0.
  double h = 1e-4 * T;
  const double tmax = model.max_temperature(z);
  if (std::isfinite(tmax)) h = std::min(h, 0.5 * (tmax - T));
  return T * num::finite_diff([&](double t) { return model.entropy(z, t); }, T, h);
}

inline constexpr int kDefaultSteps = 12;

/// T0 2^{-k}, k = 0..steps.
inline std::vector<double> default_t_sequence(double t0, int steps = kDefaultSteps) {
  if (!(t0 > 0.0) || !std::isfinite(t0)) throw DomainError("t0 must be positive and finite");
  if (steps < 5) throw InputError("temperature sequence needs at least 6 points (k >= 5)");
  std::vector<double> t;
  for (int k = 0; k <= steps; ++k) t.push_back(std::ldexp(t0, -k));
  return t;
}

/// Classification of T -> 0+ along a descending temperature sequence.
inline LimitEstimate t0_classify(const EntropyModel& model, std::span<const double> z,
                                 std::span<const double> t_sequence) {
  if (t_sequence.size() < 6) throw InputError("t0_classify: temperature sequence needs at least 6 points");
  std::vector<Sample> samples;
  for (double t : t_sequence) samples.push_back({t, model.entropy(z, t)});
  return num::extrapolate_limit(samples, num::LimitDirection::toward_zero);
}

// ---------------------------------------------------------------------------
// Iterated N / J limits for the paramagnet family.

enum class LimitOrder { n_then_j, j_then_n };

inline std::string_view to_string(LimitOrder o) { return o == LimitOrder::n_then_j ? "N_then_J" : "J_then_N"; }

inline LimitOrder parse_order(std::string_view s) {
  if (s == "NJ" || s == "N_then_J") return LimitOrder::n_then_j;
  if (s == "JN" || s == "J_then_N") return LimitOrder::j_then_n;
  throw InputError("order must be NJ or JN, got '" + std::string(s) + "'");
}

enum class Expression { derived, printed };

inline std::string_view to_string(Expression e) { return e == Expression::derived ? "derived" : "printed"; }

/// Per-spin entropy of N spins at b = B/T. `derived` is the factorized form
/// (independent of N); `printed` divides the commonly printed closed-form
/// total by N.
inline double per_spin_entropy(Expression e, int N, int twoJ, double b) {
  if (e == Expression::derived) return spin::pm_quantum_entropy(twoJ, b);
  return spin::pm_quantum_entropy_as_printed(N, twoJ, b) / N;
}

/// Quantum per-spin entropy with the level-count growth ln(2J+1) removed,
/// measured against the classical rotor at the same b.
inline double classical_gap(int twoJ, double b) {
  return spin::pm_quantum_entropy(twoJ, b) - std::log(twoJ + 1.0) - spin::rotor_classical_entropy(b);
}

struct LimitGrids {
  std::vector<int> N{1, 2, 4, 8, 16, 32, 64};
  std::vector<int> twoJ{2, 4, 8, 16, 32, 64, 100};  // J = 1 .. 50
  double b = 1.0;
};

struct Stage {
  int held;                   // the parameter held fixed (N, or 2J)
  std::vector<Sample> samples;
  LimitEstimate estimate;
};

struct ExpressionRun {
  Expression expression;
  std::vector<Stage> inner;
  LimitEstimate outer;
  std::vector<Sample> outer_samples;
};

struct IteratedLimitReport {
  LimitOrder order;
  LimitGrids grids;
  ExpressionRun derived;
  ExpressionRun printed;
  double quantum_min;    // smallest derived per-spin value seen; >= 0 for quantum spins
  double classical_max;  // rotor comparator at b; <= 0
  std::vector<std::pair<int, double>> gaps;  // (2J, classical_gap)
};

namespace detail {

// Outer-stage classification when an inner stage has no finite value: a
// common divergence propagates, anything else is inconclusive.
inline LimitEstimate propagate(const std::vector<Stage>& inner) {
  LimitEstimate out;
  const auto cls = inner.front().estimate.classification;
  const bool same = std::all_of(inner.begin(), inner.end(),
                                [&](const Stage& s) { return s.estimate.classification == cls; });
  if (same && inner.front().estimate.diverges()) {
    out.classification = cls;
    double slope = 0.0;
    for (const auto& s : inner) slope += s.estimate.slope;
    out.slope = slope / static_cast<double>(inner.size());
  }
  return out;
}

inline ExpressionRun run_expression(Expression e, LimitOrder order, const LimitGrids& g) {
  ExpressionRun run{e, {}, {}, {}};
  // N is sampled toward infinity in N; J toward infinity in p = 2J + 1.
  const auto& outer_grid = order == LimitOrder::n_then_j ? g.twoJ : g.N;
  const auto& inner_grid = order == LimitOrder::n_then_j ? g.N : g.twoJ;
  for (int held : outer_grid) {
    Stage st{held, {}, {}};
    for (int v : inner_grid) {
      const int n = order == LimitOrder::n_then_j ? v : held;
      const int tj = order == LimitOrder::n_then_j ? held : v;
      const double p = order == LimitOrder::n_then_j ? n : tj + 1.0;
      st.samples.push_back({p, per_spin_entropy(e, n, tj, g.b)});
    }
    st.estimate = num::extrapolate_limit(st.samples, num::LimitDirection::toward_infinity);
    run.inner.push_back(std::move(st));
  }
  const bool all_finite =
      std::all_of(run.inner.begin(), run.inner.end(), [](const Stage& s) { return s.estimate.is_finite(); });
  if (!all_finite) {
    run.outer = propagate(run.inner);
    return run;
  }
  for (const auto& st : run.inner) {
    const double p = order == LimitOrder::n_then_j ? st.held + 1.0 : st.held;
    run.outer_samples.push_back({p, st.estimate.value});
  }
  run.outer = num::extrapolate_limit(run.outer_samples, num::LimitDirection::toward_infinity);
  return run;
}

}  // namespace detail

/// Both orders of the N and J limits of the per-spin paramagnet entropy at
/// fixed b, for the derived and the printed expression side by side. Each
/// stage is classified by extrapolate_limit; nothing is asserted about the
/// outcome.
inline IteratedLimitReport iterated_limit_experiment(LimitOrder order, const LimitGrids& grids = {}) {
  if (grids.N.size() < 4 || grids.twoJ.size() < 4) throw InputError("iterated limits: grids need at least 4 points");
  if (!(grids.b > 0.0)) throw DomainError("iterated limits: b must be positive");
  for (std::size_t i = 0; i < grids.N.size(); ++i) {
    if (grids.N[i] < 1 || (i > 0 && grids.N[i] <= grids.N[i - 1])) {
      throw InputError("iterated limits: N grid must be positive and increasing");
    }
  }
  for (std::size_t i = 0; i < grids.twoJ.size(); ++i) {
    if (grids.twoJ[i] < 1 || (i > 0 && grids.twoJ[i] <= grids.twoJ[i - 1])) {
      throw InputError("iterated limits: J grid must be positive and increasing");
    }
  }
  IteratedLimitReport r{order, grids, detail::run_expression(Expression::derived, order, grids),
                        detail::run_expression(Expression::printed, order, grids), kInfinity,
                        spin::rotor_classical_entropy(grids.b), {}};
  for (const auto& st : r.derived.inner)
    for (const auto& s : st.samples) r.quantum_min = std::min(r.quantum_min, s.value);
  for (int tj : grids.twoJ) r.gaps.emplace_back(tj, classical_gap(tj, grids.b));
  return r;
}

// ---------------------------------------------------------------------------
// Third-law audit.

enum class Verdict { compliant, planck_violation, continuity_failure, inconclusive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::compliant: return "COMPLIANT";
    case Verdict::planck_violation: return "PLANCK_VIOLATION";
    case Verdict::continuity_failure: return "CONTINUITY_FAILURE";
    case Verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

inline constexpr double kPlanckTolerance = 1e-6;
inline constexpr double kStabilityRoundoff = 1e-8;

struct ResidualRow {
  std::vector<double> z;
  LimitEstimate estimate;
  // S(Z, 0): the extrapolated value, -inf / +inf for divergence, NaN when
  // inconclusive.
  double residual;
};

struct HeatCapacityPoint {
  double T;
  double C;
};

struct AuditReport {
  std::string model;
  Verdict verdict = Verdict::inconclusive;
  std::vector<ResidualRow> residual_table;
  std::optional<double> planck_spread;           // per site
  std::optional<bool> third_law_holds;
  std::vector<HeatCapacityPoint> heat_capacity;  // at the first Z
  bool stability = true;                         // (dS/dT)_Z >= 0 on every sampled point, up to roundoff
  std::vector<std::string> notes;
  std::optional<EntropyTable> table;
};

/// Smallest temperature scale over the grid; keeps T0 admissible for every Z.
inline double default_t0(const EntropyModel& model, const std::vector<std::vector<double>>& z_grid) {
  double t0 = kInfinity;
  for (const auto& z : z_grid) t0 = std::min(t0, model.temperature_scale(z));
  return t0;
}

inline AuditReport audit_model(const EntropyModel& model, const std::vector<std::vector<double>>& z_grid,
                               const std::vector<double>& t_sequence, double tolerance = kPlanckTolerance) {
  if (z_grid.empty()) throw InputError("audit: z grid is empty");
  if (t_sequence.size() < 6) throw InputError("audit: temperature sequence needs at least 6 points");
  if (!(tolerance >= 0.0)) throw InputError("audit: tolerance must be non-negative");

  AuditReport r;
  r.model = model.name();
  bool diverges = false;
  bool inconclusive = false;
  for (const auto& z : z_grid) {
    ResidualRow row{z, t0_classify(model, z, t_sequence), 0.0};
    switch (row.estimate.classification) {
      case LimitClass::finite: row.residual = row.estimate.value; break;
      case LimitClass::diverges_neg: row.residual = -kInfinity; diverges = true; break;
      case LimitClass::diverges_pos: row.residual = kInfinity; diverges = true; break;
      case LimitClass::inconclusive:
        row.residual = std::numeric_limits<double>::quiet_NaN();
        inconclusive = true;
        break;
    }
    r.residual_table.push_back(std::move(row));
  }

  for (double t : t_sequence) r.heat_capacity.push_back({t, heat_capacity(model, z_grid.front(), t)});
  // Negative C beyond difference roundoff counts against stability.
  const double c_floor = -kStabilityRoundoff * model.size();
  for (const auto& p : r.heat_capacity)
    if (p.C < c_floor) r.stability = false;
  for (std::size_t i = 1; i < z_grid.size(); ++i)
    for (double t : t_sequence)
      if (heat_capacity(model, z_grid[i], t) < c_floor) r.stability = false;

  if (!model.extensive()) {
    r.notes.push_back(model.kind() == ModelKind::geometric
                          ? "model is not extensive and the second law for its entropy is not established; the "
                            "hypotheses behind the Planck equivalence do not apply, so the verdict describes the "
                            "numbers only"
                          : "model is not extensive; the verdict describes the numbers only");
  }
  if (const auto* q = dynamic_cast<const spin::QuantumHeisenbergModel*>(&model); q && q->bond_double_counted()) {
    r.notes.push_back("periodic chain of two sites counts its single bond twice");
  }

  if (diverges) {
    r.verdict = Verdict::continuity_failure;
    r.notes.push_back("zero-temperature entropy diverges at one or more Z; the Planck spread is undefined");
    return r;
  }
  if (inconclusive) {
    r.verdict = Verdict::inconclusive;
    r.notes.push_back("T -> 0 extrapolation inconclusive at one or more Z");
    return r;
  }

  EntropyTable table;
  table.model = model.name();
  for (const auto& c : model.z_space()) table.z_names.push_back(c.name);
  table.z_grid = z_grid;
  table.t_grid = t_sequence;
  table.t_grid.push_back(0.0);
  table.size = model.size();
  for (std::size_t i = 0; i < z_grid.size(); ++i) {
    std::vector<double> row;
    for (double t : t_sequence) row.push_back(model.entropy(z_grid[i], t));
    row.push_back(r.residual_table[i].residual);
    table.values.push_back(std::move(row));
  }
  const auto third = check_third_law_table(table);
  r.third_law_holds = third.holds;
  if (!third.holds) {
    const auto& w = *third.witness;
    r.notes.push_back("third-law table check fails: S(Z[" + std::to_string(w.z_index) + "], 0) = " +
                      io::format_number(w.s_zero) + " exceeds S(Z[" + std::to_string(w.z_prime_index) + "], T[" +
                      std::to_string(w.t_index) + "]) = " + io::format_number(w.s_t1));
  }
  const auto spread = planck_spread(table);
  r.planck_spread = spread.per_site_spread;
  r.verdict = spread.per_site_spread <= tolerance ? Verdict::compliant : Verdict::planck_violation;
  r.table = std::move(table);
  return r;
}

inline io::json estimate_to_json(const LimitEstimate& e) {
  io::json j;
  j["classification"] = std::string(num::to_string(e.classification));
  j["value"] = e.value;
  j["slope"] = e.slope;
  j["residual"] = e.residual;
  return j;
}

inline io::json audit_to_json(const AuditReport& r) {
  io::json j;
  j["model"] = r.model;
  j["verdict"] = std::string(to_string(r.verdict));
  io::json rows = io::json::array();
  for (const auto& row : r.residual_table) {
    io::json x;
    x["z"] = row.z;
    x["classification"] = std::string(num::to_string(row.estimate.classification));
    x["S0"] = row.residual;
    x["slope"] = row.estimate.slope;
    x["extrapolation_residual"] = row.estimate.residual;
    rows.push_back(x);
  }
  j["residual_table"] = rows;
  j["planck_spread"] = r.planck_spread ? io::json(*r.planck_spread) : io::json(nullptr);
  j["third_law_holds"] = r.third_law_holds ? io::json(*r.third_law_holds) : io::json(nullptr);
  io::json hc = io::json::array();
  for (const auto& p : r.heat_capacity) hc.push_back({{"T", p.T}, {"C", p.C}});
  j["heat_capacity"] = hc;
  j["stability"] = r.stability;
  j["notes"] = r.notes;
  return j;
}

}  // namespace nernst::lab
