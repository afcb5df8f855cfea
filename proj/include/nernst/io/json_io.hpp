#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "nernst/core/table.hpp"
#include "nernst/errors.hpp"

namespace nernst::io {

using json = nlohmann::ordered_json;

// %.17g; every double written by this project goes through here.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {
template <class Json>
void dump_to(std::string& out, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case nlohmann::detail::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump_to(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case nlohmann::detail::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_to(out, e, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case nlohmann::detail::value_t::number_float: {
      const double x = j.template get<double>();
      // JSON has no non-finite numbers; they travel as strings.
      if (!std::isfinite(x)) out += Json(format_number(x)).dump();
      else out += format_number(x);
      return;
    }
    default:
      out += j.dump();
  }
}
}  // namespace detail

/// Serialize with 17 significant digits for every floating value. Keys keep
/// insertion order for ordered_json and sorted order for json.
template <class Json>
std::string dump(const Json& j, int indent = 2) {
  std::string out;
  detail::dump_to(out, j, indent, 0);
  return out;
}

inline json number_or_marker(double v) {
  if (v == kNegInfinity) return "-inf";
  return v;
}

inline double parse_number_or_marker(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "-inf") return kNegInfinity;
    throw InputError("expected a number or \"-inf\", got \"" + j.get<std::string>() + "\"");
  }
  if (!j.is_number()) throw InputError("expected a number or \"-inf\"");
  return j.get<double>();
}

/// EntropyTable <-> {model, z_names, z_grid, t_grid, values, size}. A
/// diverging residual travels as the string "-inf".
inline json table_to_json(const EntropyTable& t) {
  json j;
  j["model"] = t.model;
  j["z_names"] = t.z_names;
  j["z_grid"] = t.z_grid;
  j["t_grid"] = t.t_grid;
  json rows = json::array();
  for (const auto& row : t.values) {
    json r = json::array();
    for (double v : row) r.push_back(number_or_marker(v));
    rows.push_back(r);
  }
  j["values"] = rows;
  j["size"] = t.size;
  return j;
}

inline EntropyTable table_from_json(const json& j) {
  EntropyTable t;
  try {
    t.model = j.at("model").get<std::string>();
    t.z_names = j.at("z_names").get<std::vector<std::string>>();
    t.z_grid = j.at("z_grid").get<std::vector<std::vector<double>>>();
    t.t_grid = j.at("t_grid").get<std::vector<double>>();
    for (const auto& row : j.at("values")) {
      std::vector<double> r;
      for (const auto& v : row) r.push_back(parse_number_or_marker(v));
      t.values.push_back(std::move(r));
    }
    if (j.contains("size")) t.size = j.at("size").get<double>();
  } catch (const json::exception& e) {
    throw InputError(std::string("entropy table JSON: ") + e.what());
  }
  t.validate();
  return t;
}

}  // namespace nernst::io
