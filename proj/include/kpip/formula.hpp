#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "kpip/instance_io.hpp"

namespace kpip::reduction {

enum class Polarity { Positive, Negative };

struct Clause {
  Polarity polarity = Polarity::Positive;
  int layer = 2;               // distance from the variable row; at least 2
  std::vector<int> literals;   // variable indices, 1 to 3 of them
  friend bool operator==(const Clause&, const Clause&) = default;
};

/// Layered rectilinear monotone formula. `order` lists variables left to right.
struct MonotoneFormula {
  int variables = 0;
  std::vector<Clause> clauses;
  std::vector<int> order;
  friend bool operator==(const MonotoneFormula&, const MonotoneFormula&) = default;
};

inline void validate_formula(const MonotoneFormula& f) {
  auto bad = [](const std::string& s) { fail(ErrorCode::InvalidFormula, s); };
  if (f.variables < 1) bad("a formula needs at least one variable");
  if (static_cast<int>(f.order.size()) != f.variables) bad("order must list every variable once");
  std::vector<char> seen(f.variables, 0);
  for (int v : f.order) {
    if (v < 0 || v >= f.variables || seen[v]) bad("order must be a permutation of the variables");
    seen[v] = 1;
  }
  for (std::size_t c = 0; c < f.clauses.size(); ++c) {
    const auto& cl = f.clauses[c];
    if (cl.layer < 2) bad("clause " + std::to_string(c) + " sits on layer " + std::to_string(cl.layer));
    if (cl.literals.empty() || cl.literals.size() > 3) bad("clause " + std::to_string(c) + " needs 1 to 3 literals");
    for (int v : cl.literals)
      if (v < 0 || v >= f.variables) bad("clause " + std::to_string(c) + " references variable " + std::to_string(v));
  }
}

inline bool satisfies(const MonotoneFormula& f, const std::vector<bool>& assignment) {
  require(static_cast<int>(assignment.size()) == f.variables, ErrorCode::InvalidArgument, "assignment size mismatch");
  return std::all_of(f.clauses.begin(), f.clauses.end(), [&](const Clause& c) {
    return std::any_of(c.literals.begin(), c.literals.end(), [&](int v) {
      return assignment[v] == (c.polarity == Polarity::Positive);
    });
  });
}

/// First satisfying assignment in binary counting order, variable 0 least significant.
inline std::optional<std::vector<bool>> brute_force_satisfy(const MonotoneFormula& f) {
  require(f.variables <= 24, ErrorCode::InvalidArgument, "too many variables for a truth table");
  std::vector<bool> a(f.variables);
  for (std::uint32_t m = 0; m < (1u << f.variables); ++m) {
    for (int v = 0; v < f.variables; ++v) a[v] = (m >> v) & 1;
    if (satisfies(f, a)) return a;
  }
  return std::nullopt;
}

inline MonotoneFormula parse_formula(const std::string& text) {
  using detail::as_int;
  using detail::field;
  using detail::schema;
  Json j = detail::parse_text(text);
  MonotoneFormula f;
  f.variables = as_int(field(j, "variables"), "variables");
  const Json& cs = field(j, "clauses");
  if (!cs.is_array()) schema("clauses must be an array");
  for (const Json& c : cs) {
    Clause cl;
    const Json& pol = field(c, "polarity");
    if (!pol.is_string()) schema("polarity must be a string");
    if (pol == "pos") cl.polarity = Polarity::Positive;
    else if (pol == "neg") cl.polarity = Polarity::Negative;
    else schema("polarity must be \"pos\" or \"neg\"");
    cl.layer = as_int(field(c, "layer"), "layer");
    const Json& lits = field(c, "literals");
    if (!lits.is_array()) schema("literals must be an array");
    for (const Json& l : lits) cl.literals.push_back(as_int(l, "literal"));
    f.clauses.push_back(std::move(cl));
  }
  if (j.contains("order")) {
    const Json& o = j["order"];
    if (!o.is_array()) schema("order must be an array");
    for (const Json& v : o) f.order.push_back(as_int(v, "order entry"));
  } else {
    for (int v = 0; v < f.variables; ++v) f.order.push_back(v);
  }
  validate_formula(f);
  return f;
}

inline std::string write_formula(const MonotoneFormula& f) {
  Json j;
  j["variables"] = f.variables;
  j["clauses"] = Json::array();
  for (const auto& c : f.clauses)
    j["clauses"].push_back(
        {{"polarity", c.polarity == Polarity::Positive ? "pos" : "neg"}, {"layer", c.layer}, {"literals", c.literals}});
  j["order"] = f.order;
  return j.dump();
}

/// Accepts `[true,false,...]` or `{"assignment":[...]}`.
inline std::vector<bool> parse_assignment(const std::string& text) {
  Json j = detail::parse_text(text);
  const Json& arr = j.is_object() ? detail::field(j, "assignment") : j;
  if (!arr.is_array()) detail::schema("assignment must be an array of booleans");
  std::vector<bool> out;
  for (const Json& b : arr) {
    if (b.is_boolean()) out.push_back(b.get<bool>());
    else if (b.is_number_integer()) out.push_back(b.get<int>() != 0);
    else detail::schema("assignment entries must be booleans");
  }
  return out;
}

}  // namespace kpip::reduction
