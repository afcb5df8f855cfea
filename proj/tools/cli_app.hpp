#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nernst/bh/kerr_newman.hpp"
#include "nernst/errors.hpp"
#include "nernst/io/json_io.hpp"
#include "nernst/limits/lab.hpp"
#include "nernst/model_spec.hpp"
#include "nernst/spin/classical.hpp"
#include "nernst/spin/models.hpp"
#include "nernst/spin/paramagnet.hpp"

namespace nernst::cli {

using io::format_number;
using io::json;

// Comma list "a,b,c" or geometric range "start:stop:count".
inline std::vector<double> parse_grid(const std::string& text) {
  auto to_double = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw InputError("grid '" + text + "': cannot parse '" + s + "' as a number");
    }
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw InputError("grid '" + text + "': range form is start:stop:count");
    const double a = to_double(parts[0]);
    const double b = to_double(parts[1]);
    const double c = to_double(parts[2]);
    if (!(a > 0.0) || !(b > 0.0)) throw InputError("grid '" + text + "': geometric range needs positive ends");
    if (c < 2 || c != std::floor(c) || c > 1e6) throw InputError("grid '" + text + "': count must be an integer >= 2");
    const int n = static_cast<int>(c);
    for (int i = 0; i < n; ++i) {
      out.push_back(i == n - 1 ? b : a * std::pow(b / a, static_cast<double>(i) / (n - 1)));
    }
    return out;
  }
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(to_double(p));
  if (out.empty()) throw InputError("grid '" + text + "' is empty");
  return out;
}

// "a,b;c,d" -> {{a,b},{c,d}}. For one-coordinate models a plain list is a
// list of points.
inline std::vector<std::vector<double>> parse_z_grid(const std::string& text, std::size_t dim) {
  std::vector<std::vector<double>> out;
  if (dim == 1 && text.find(';') == std::string::npos) {
    for (double v : parse_grid(text)) out.push_back({v});
    return out;
  }
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ';');) {
    auto point = parse_grid(p);
    if (point.size() != dim) {
      throw InputError("z grid point '" + p + "' has " + std::to_string(point.size()) + " coordinate(s), expected " +
                       std::to_string(dim));
    }
    out.push_back(std::move(point));
  }
  if (out.empty()) throw InputError("z grid is empty");
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ModelOptions {
  std::string model;
  std::string spec_path;
  int N = 0;  // 0: model default
  int twoJ = 1;
  std::string bc;
  std::string z_grid;
  std::string b_grid;
  std::string lambda_grid;

  void add_to(CLI::App* app) {
    app->add_option("--model", model, "paramagnet | rotor | heisenberg_classical | heisenberg_quantum | kerr_newman");
    app->add_option("--spec", spec_path, "model spec JSON file");
    app->add_option("--N", N, "number of spins / sites");
    app->add_option("--twoJ", twoJ, "twice the spin quantum number");
    app->add_option("--bc", bc, "periodic | open");
    app->add_option("--z-grid", z_grid, "work-coordinate points, 'a,b;c,d'");
    app->add_option("--B-grid", b_grid, "field grid (alias of --z-grid)");
    app->add_option("--lambda-grid", lambda_grid, "coupling grid (alias of --z-grid)");
  }

  ModelSpec build() const {
    json j;
    if (!spec_path.empty()) {
      try {
        j = json::parse(read_file(spec_path));
      } catch (const json::exception& e) {
        throw InputError("model spec '" + spec_path + "': malformed JSON: " + e.what());
      }
      if (!j.is_object()) throw InputError("model spec must be a JSON object");
    }
    if (!model.empty()) j["model"] = model;
    if (!j.contains("model")) throw InputError("--model or --spec is required");
    if (N > 0) j["N"] = N;
    if (twoJ != 1 || !j.contains("twoJ")) j["twoJ"] = twoJ;
    if (!bc.empty()) j["bc"] = bc;
    return parse_model_spec(j);
  }

  std::vector<std::vector<double>> grid(const ModelSpec& spec) const {
    const std::size_t dim = spec.model->z_space().size();
    int given = !z_grid.empty() + !b_grid.empty() + !lambda_grid.empty();
    if (given > 1) throw InputError("give only one of --z-grid, --B-grid, --lambda-grid");
    const std::string& text = !z_grid.empty() ? z_grid : !b_grid.empty() ? b_grid : lambda_grid;
    if (!text.empty()) return parse_z_grid(text, dim);
    if (spec.z) return {*spec.z};
    throw InputError("a work-coordinate grid is required (--z-grid, --B-grid or --lambda-grid)");
  }
};

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

inline void check_format(const std::string& format) {
  if (format != "json" && format != "csv") throw InputError("--format must be json or csv");
}

inline std::string csv_row(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  return s + '\n';
}

// ---------------------------------------------------------------------------

inline int run_audit(const ModelOptions& mo, std::optional<double> t0, int k, double tol, const std::string& format,
                     const std::string& out_path, std::ostream& out) {
  const auto spec = mo.build();
  const auto grid = mo.grid(spec);
  const double start = t0 ? *t0 : lab::default_t0(*spec.model, grid);
  const auto report = lab::audit_model(*spec.model, grid, lab::default_t_sequence(start, k), tol);
  std::string text;
  if (format == "json") {
    text = io::dump(lab::audit_to_json(report)) + "\n";
  } else {
    std::vector<std::string> header{"model"};
    for (const auto& c : spec.model->z_space()) header.push_back(c.name);
    for (const char* h : {"classification", "S0", "slope", "extrapolation_residual", "verdict", "planck_spread"})
      header.emplace_back(h);
    text = csv_row(header);
    for (const auto& row : report.residual_table) {
      std::vector<std::string> cells{report.model};
      for (double v : row.z) cells.push_back(format_number(v));
      cells.emplace_back(num::to_string(row.estimate.classification));
      cells.push_back(format_number(row.residual));
      cells.push_back(format_number(row.estimate.slope));
      cells.push_back(format_number(row.estimate.residual));
      cells.emplace_back(lab::to_string(report.verdict));
      cells.push_back(report.planck_spread ? format_number(*report.planck_spread) : "");
      text += csv_row(cells);
    }
  }
  emit(text, out_path, out);
  return report.verdict == lab::Verdict::compliant ? 0 : 1;
}

struct OracleOptions {
  std::string method = "none";  // none | trace | quadrature | montecarlo
  int nodes = 32;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
};

// Independent estimate of the total entropy, with its error bar (0 for exact).
inline std::pair<double, double> oracle_value(const ModelSpec& spec, const json& raw, const OracleOptions& o,
                                              double z, double T) {
  const auto& name = spec.model->name();
  const int n = raw.value("N", 1);
  if (o.method == "trace") {
    if (name != "paramagnet") throw InputError("--oracle trace applies to the paramagnet");
    return {spin::pm_quantum_entropy_trace({n, raw.value("twoJ", 1), z}, T), 0.0};
  }
  spin::ClassicalSpec cs;
  if (name == "rotor") {
    cs = {spin::ClassicalKind::rotor, n, z, spin::Boundary::periodic};
  } else if (name == "heisenberg_classical_chain") {
    const auto bc = raw.contains("bc") ? spin::parse_boundary(raw.at("bc").get<std::string>()) : spin::Boundary::periodic;
    cs = {spin::ClassicalKind::heisenberg, n, z, bc};
  } else {
    throw InputError("--oracle " + o.method + " applies to rotor and finite heisenberg_classical chains");
  }
  if (o.method == "quadrature") {
    const auto q = spin::classical_entropy_quadrature(cs, 1.0 / T, o.nodes);
    return {q.value, q.error_bound};
  }
  const auto mc = spin::classical_entropy_montecarlo(cs, 1.0 / T, o.samples, o.seed);
  return {mc.value, mc.std_error};
}

inline int run_tabulate(const ModelOptions& mo, const std::string& t_grid_text, const OracleOptions& oracle,
                        const std::string& format, const std::string& out_path, std::ostream& out) {
  const auto spec = mo.build();
  const auto grid = mo.grid(spec);
  if (t_grid_text.empty()) throw InputError("--t-grid is required");
  const auto t_grid = parse_grid(t_grid_text);
  if (oracle.method != "none" && oracle.method != "trace" && oracle.method != "quadrature" &&
      oracle.method != "montecarlo") {
    throw InputError("--oracle must be none, trace, quadrature or montecarlo");
  }
  json raw;
  raw["N"] = mo.N > 0 ? mo.N : 1;
  raw["twoJ"] = mo.twoJ;
  if (!mo.bc.empty()) raw["bc"] = mo.bc;
  if (!mo.spec_path.empty()) {
    const auto j = json::parse(read_file(mo.spec_path));
    for (const char* key : {"N", "twoJ", "bc"})
      if (j.contains(key) && !(key == std::string("N") && mo.N > 0)) raw[key] = j.at(key);
  }
  const bool with_oracle = oracle.method != "none";
  if (with_oracle && spec.model->z_space().size() != 1) throw InputError("--oracle needs a one-coordinate model");

  const auto& model = *spec.model;
  std::string text;
  json rows = json::array();
  std::vector<std::string> header{"model"};
  for (const auto& c : model.z_space()) header.push_back(c.name);
  for (const char* h : {"T", "S_total", "S_per_site"}) header.emplace_back(h);
  if (with_oracle) {
    header.emplace_back("S_oracle");
    header.emplace_back("oracle_error");
  }
  text = csv_row(header);
  for (const auto& z : grid) {
    for (double t : t_grid) {
      const double s = model.entropy(z, t);
      std::vector<std::string> cells{model.name()};
      json row;
      row["model"] = model.name();
      for (std::size_t i = 0; i < z.size(); ++i) {
        cells.push_back(format_number(z[i]));
        row[model.z_space()[i].name] = z[i];
      }
      cells.push_back(format_number(t));
      cells.push_back(format_number(s));
      cells.push_back(format_number(s / model.size()));
      row["T"] = t;
      row["S_total"] = s;
      row["S_per_site"] = s / model.size();
      if (with_oracle) {
        const auto [v, e] = oracle_value(spec, raw, oracle, z[0], t);
        cells.push_back(format_number(v));
        cells.push_back(format_number(e));
        row["S_oracle"] = v;
        row["oracle_error"] = e;
      }
      text += csv_row(cells);
      rows.push_back(row);
    }
  }
  if (format == "json") text = io::dump(rows) + "\n";
  emit(text, out_path, out);
  return 0;
}

inline int run_limits(const std::string& family, const std::string& order_text, int j_max, int n_max, double b,
                      const std::string& format, const std::string& out_path, std::ostream& out) {
  if (family != "paramagnet") throw InputError("--family must be paramagnet");
  if (order_text.empty()) throw InputError("--order is required (NJ or JN)");
  const auto order = lab::parse_order(order_text);
  if (j_max < 4) throw InputError("--J-max must be at least 4");
  if (n_max < 8) throw InputError("--N-max must be at least 8");
  lab::LimitGrids g;
  g.b = b;
  g.twoJ.clear();
  for (int j = 1; j < j_max; j *= 2) g.twoJ.push_back(2 * j);
  g.twoJ.push_back(2 * j_max);
  g.N.clear();
  for (int n = 1; n < n_max; n *= 2) g.N.push_back(n);
  g.N.push_back(n_max);
  const auto r = lab::iterated_limit_experiment(order, g);

  const bool nj = order == lab::LimitOrder::n_then_j;
  std::string text;
  json j;
  if (format == "csv") {
    text = csv_row({"order", "expression", "level", "N", "twoJ", "value", "classification", "slope", "residual"});
    auto est_row = [&](const std::string& expr, const std::string& level, const std::string& n, const std::string& tj,
                       const lab::LimitEstimate& e) {
      text += csv_row({std::string(lab::to_string(order)), expr, level, n, tj, format_number(e.value),
                       std::string(num::to_string(e.classification)), format_number(e.slope),
                       format_number(e.residual)});
    };
    for (const auto* run : {&r.derived, &r.printed}) {
      const std::string expr(lab::to_string(run->expression));
      for (const auto& st : run->inner) {
        for (const auto& s : st.samples) {
          const int n = nj ? static_cast<int>(s.parameter) : st.held;
          const int tj = nj ? st.held : static_cast<int>(s.parameter) - 1;
          text += csv_row({std::string(lab::to_string(order)), expr, "sample", std::to_string(n), std::to_string(tj),
                           format_number(s.value), "", "", ""});
        }
        est_row(expr, "inner", nj ? "inf" : std::to_string(st.held), nj ? std::to_string(st.held) : "inf",
                st.estimate);
      }
      est_row(expr, "outer", "inf", "inf", run->outer);
    }
    for (const auto& [tj, gap] : r.gaps) {
      text += csv_row({std::string(lab::to_string(order)), "derived", "classical_gap", "", std::to_string(tj),
                       format_number(gap), "", "", ""});
    }
    text += csv_row({std::string(lab::to_string(order)), "derived", "quantum_min", "", "",
                     format_number(r.quantum_min), "", "", ""});
    text += csv_row({std::string(lab::to_string(order)), "rotor", "classical_max", "", "",
                     format_number(r.classical_max), "", "", ""});
  } else {
    j["order"] = std::string(lab::to_string(order));
    j["b"] = b;
    j["N_grid"] = g.N;
    j["twoJ_grid"] = g.twoJ;
    for (const auto* run : {&r.derived, &r.printed}) {
      json e;
      json inner = json::array();
      for (const auto& st : run->inner) {
        json s;
        s[nj ? "twoJ" : "N"] = st.held;
        json samples = json::array();
        for (const auto& x : st.samples) samples.push_back({x.parameter, x.value});
        s["samples"] = samples;
        s["estimate"] = lab::estimate_to_json(st.estimate);
        inner.push_back(s);
      }
      e["inner"] = inner;
      e["outer"] = lab::estimate_to_json(run->outer);
      j[std::string(lab::to_string(run->expression))] = e;
    }
    json gaps = json::array();
    for (const auto& [tj, gap] : r.gaps) gaps.push_back({{"twoJ", tj}, {"gap", gap}});
    j["classical_gap"] = gaps;
    j["quantum_min"] = r.quantum_min;
    j["classical_max"] = r.classical_max;
    text = io::dump(j) + "\n";
  }
  emit(text, out_path, out);
  return 0;
}

inline json derived_to_json(const bh::KNParams& p, const bh::KNDerived& d) {
  json j;
  j["M"] = p.M;
  j["J"] = p.J;
  j["Q"] = p.Q;
  j["a"] = d.a;
  j["r_plus"] = d.r_plus;
  j["r_minus"] = d.r_minus;
  j["kappa"] = d.kappa;
  j["alpha"] = d.alpha;
  j["area"] = d.area;
  j["S_B"] = d.S_B;
  j["Omega"] = d.Omega;
  j["T"] = d.T;
  j["Phi"] = d.Phi;
  j["extremal"] = d.extremal;
  return j;
}

struct BhOptions {
  bool derive = false;
  bool residual = false;
  bool invert = false;
  std::string input;
  std::optional<double> M, J, Q, T;
  std::string branch = "near_extremal";
};

inline int run_bh(BhOptions o, const std::string& format, const std::string& out_path, std::ostream& out) {
  if (!o.input.empty()) {
    json in;
    try {
      in = json::parse(read_file(o.input));
      if (in.contains("M")) o.M = in.at("M").get<double>();
      if (in.contains("T")) o.T = in.at("T").get<double>();
      if (in.contains("J")) o.J = in.at("J").get<double>();
      if (in.contains("Q")) o.Q = in.at("Q").get<double>();
      if (in.contains("branch")) o.branch = in.at("branch").get<std::string>();
    } catch (const json::exception& e) {
      throw InputError(std::string("bh input: ") + e.what());
    }
    if (!o.derive && !o.residual && !o.invert) (o.M ? o.derive : o.invert) = true;
  }
  if (o.derive + o.residual + o.invert != 1) throw InputError("choose exactly one of --derive, --residual, --invert");
  const double J = o.J.value_or(0.0);
  const double Q = o.Q.value_or(0.0);
  json j;
  if (o.derive) {
    if (!o.M) throw InputError("--derive needs --M");
    const bh::KNParams p{*o.M, J, Q};
    j = derived_to_json(p, bh::kn_derived(p));
  } else if (o.residual) {
    j["J"] = J;
    j["Q"] = Q;
    j["S_residual"] = bh::kn_residual_entropy(J, Q);
  } else {
    if (!o.T) throw InputError("--invert needs --T");
    const auto branch = bh::parse_branch(o.branch);
    const auto inv = bh::kn_invert_temperature(*o.T, J, Q, branch);
    const bh::KNParams p{inv.M, J, Q};
    j = derived_to_json(p, bh::kn_derived(p));
    j["T_target"] = *o.T;
    j["branch"] = std::string(bh::to_string(branch));
    j["residual"] = inv.residual;
  }
  std::string text;
  if (format == "json") {
    text = io::dump(j) + "\n";
  } else {
    std::vector<std::string> keys;
    std::vector<std::string> values;
    for (auto it = j.begin(); it != j.end(); ++it) {
      keys.push_back(it.key());
      const auto& v = it.value();
      values.push_back(v.is_number_float() ? format_number(v.get<double>()) : v.is_string() ? v.get<std::string>() : v.dump());
    }
    text = csv_row(keys) + csv_row(values);
  }
  emit(text, out_path, out);
  return 0;
}

/// Entry point. Exit codes: 0 success (audit COMPLIANT), 1 audit verdict
/// other than COMPLIANT, 2 usage or domain error with a one-line reason on
/// the error stream.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Third-law laboratory: entropy audits, tabulations, iterated limits and Kerr-Newman queries",
               "nernst-lab"};
  app.require_subcommand(1, 1);

  std::string format;
  std::string out_path;

  auto* audit = app.add_subcommand("audit", "T -> 0 audit of a model over a work-coordinate grid");
  ModelOptions audit_model;
  audit_model.add_to(audit);
  std::optional<double> t0;
  int k = lab::kDefaultSteps;
  double tol = lab::kPlanckTolerance;
  audit->add_option("--t0", t0, "first temperature of the sequence T0 2^-k (default: smallest model scale)");
  audit->add_option("--k", k, "number of halvings (sequence length k+1)");
  audit->add_option("--tol", tol, "Planck spread tolerance per site");

  auto* tab = app.add_subcommand("tabulate", "entropy table S(Z, T)");
  ModelOptions tab_model;
  tab_model.add_to(tab);
  std::string t_grid;
  OracleOptions oracle;
  tab->add_option("--t-grid", t_grid, "temperatures: 'a,b,c' or 'start:stop:count'");
  tab->add_option("--oracle", oracle.method, "none | trace | quadrature | montecarlo");
  tab->add_option("--nodes", oracle.nodes, "quadrature nodes per axis");
  tab->add_option("--samples", oracle.samples, "Monte Carlo samples");
  tab->add_option("--seed", oracle.seed, "Monte Carlo seed");

  auto* lim = app.add_subcommand("limits", "iterated N and J limits of the paramagnet");
  std::string family = "paramagnet";
  std::string order;
  int j_max = 50;
  int n_max = 64;
  double b = 1.0;
  lim->add_option("--family", family, "model family (paramagnet)");
  lim->add_option("--order", order, "NJ or JN");
  lim->add_option("--J-max", j_max, "largest J");
  lim->add_option("--N-max", n_max, "largest N");
  lim->add_option("--b", b, "B/T");

  auto* bhc = app.add_subcommand("bh", "Kerr-Newman queries");
  BhOptions bo;
  bhc->add_flag("--derive", bo.derive, "derived quantities at (M, J, Q)");
  bhc->add_flag("--residual", bo.residual, "extremal residual entropy at (J, Q)");
  bhc->add_flag("--invert", bo.invert, "mass and entropy at temperature T");
  bhc->add_option("--input", bo.input, "JSON input {M,J,Q} or {T,J,Q,branch}");
  bhc->add_option("--M", bo.M, "mass");
  bhc->add_option("--J", bo.J, "angular momentum");
  bhc->add_option("--Q", bo.Q, "charge");
  bhc->add_option("--T", bo.T, "temperature");
  bhc->add_option("--branch", bo.branch, "near_extremal | large_mass");

  for (auto* sub : {audit, tab, lim, bhc}) {
    sub->add_option("--out", out_path, "output path (default standard output)");
    sub->add_option("--format", format, "csv | json");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "nernst-lab: " << e.what() << "\n";
    return 2;
  }

  try {
    if (audit->parsed()) {
      if (format.empty()) format = "json";
      check_format(format);
      return run_audit(audit_model, t0, k, tol, format, out_path, out);
    }
    if (tab->parsed()) {
      if (format.empty()) format = "csv";
      check_format(format);
      return run_tabulate(tab_model, t_grid, oracle, format, out_path, out);
    }
    if (lim->parsed()) {
      if (format.empty()) format = "csv";
      check_format(format);
      return run_limits(family, order, j_max, n_max, b, format, out_path, out);
    }
    if (format.empty()) format = "json";
    check_format(format);
    return run_bh(bo, format, out_path, out);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (auto& c : msg)
      if (c == '\n') c = ' ';
    err << "nernst-lab: " << msg << "\n";
    return 2;
  }
}

}  // namespace nernst::cli
