#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "kpip/instance_io.hpp"
#include "kpip/route_search.hpp"
#include "kpip/tri_insert.hpp"
#include "kpip/verifier.hpp"

namespace kpip::oracle {

enum class Status { Feasible, Infeasible, BudgetExceeded };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::Feasible: return "feasible";
    case Status::Infeasible: return "infeasible";
    case Status::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

struct TriangulationOptions {
  long long max_products = 10'000'000;
  /// Run the verifier on every product when there are at most this many, and
  /// count disagreements with the clash rule.
  long long cross_validate_limit = 0;
};

struct TriangulationResult {
  Status status = Status::Infeasible;
  Solution solution;
  std::vector<int> chosen;        // option ids of the reported assignment
  long long products = 0;
  long long feasible_products = 0;
  long long validated = 0;        // products also checked by the verifier
  long long disagreements = 0;    // clash rule vs verifier
};

/// Brute force over the Cartesian product of options; an assignment is
/// feasible iff no two selected options clash. Reports the lexicographically
/// first feasible assignment (options in catalog order, F-edge 0 most significant).
inline TriangulationResult exact_solve_triangulation(const Instance& inst, TriangulationOptions opt = {}) {
  const tri::OptionCatalog cat = tri::enumerate_options(inst);
  const tri::ClashGraph cg = tri::compute_clashes(cat);
  const int nf = cat.f_count();
  TriangulationResult res;
  long double products = 1;
  for (int f = 0; f < nf; ++f) products *= cat.option_end(f) - cat.option_begin(f);
  require(products <= static_cast<long double>(opt.max_products), ErrorCode::SearchSpaceTooLarge,
          "option product exceeds the guard");
  res.products = static_cast<long long>(products);
  if (res.products == 0) return res;
  const bool validate = res.products <= opt.cross_validate_limit;

  std::vector<int> digit(nf, 0);
  std::vector<int> chosen(nf);
  for (long long count = 0; count < res.products; ++count) {
    for (int f = 0; f < nf; ++f) chosen[f] = cat.option_begin(f) + digit[f];
    bool ok = true;
    for (int f = 0; f < nf && ok; ++f)
      for (int x : cg.adj[chosen[f]])
        if (x >= 0 && chosen[cat.options[x].f_edge] == x) ok = false;
    if (ok) {
      ++res.feasible_products;
      if (res.status != Status::Feasible) {
        res.status = Status::Feasible;
        res.chosen = chosen;
        res.solution = tri::solution_from_choice(inst, cat, chosen);
      }
    }
    if (validate) {
      ++res.validated;
      bool accepted = verify(inst, tri::solution_from_choice(inst, cat, chosen)).accepted;
      if (accepted != ok) ++res.disagreements;
    } else if (res.status == Status::Feasible) {
      break;
    }
    for (int f = nf - 1; f >= 0; --f) {
      if (++digit[f] < cat.option_end(f) - cat.option_begin(f)) break;
      digit[f] = 0;
    }
  }
  return res;
}

enum class InsertionOrder {
  Input,        // F in input order
  Dynamic,      // after the pinned prefix, the edge with the fewest realizations in the current drawing
};

struct GeneralOptions {
  long long node_budget = 10'000'000;
  std::optional<std::uint64_t> seed;
  /// Routes for F[0 .. fixed.size()) taken as given (boundary conditions).
  std::vector<std::vector<CrossingEvent>> fixed;
  std::vector<char> forbidden;   // per logical edge (G-edges, then F-edges)
  std::vector<char> required;
  /// Enumerate solutions; return false to stop early.
  std::function<bool(const Solution&)> visitor;
  InsertionOrder order = InsertionOrder::Input;
};

struct GeneralResult {
  Status status = Status::Infeasible;
  Solution solution;
  long long nodes = 0;
};

/// Depth-first search over F (input order unless asked otherwise) and, per
/// F-edge, over all face walks with at most k crossings in the current planarization.
inline GeneralResult exact_solve_general(const Instance& inst, GeneralOptions opt = {}) {
  RouteSearch::Config cfg;
  cfg.dynamic_order = opt.order == InsertionOrder::Dynamic;
  cfg.node_budget = opt.node_budget;
  cfg.seed = opt.seed;
  cfg.fixed_prefix = static_cast<int>(opt.fixed.size());
  cfg.forbidden = std::move(opt.forbidden);
  cfg.required = std::move(opt.required);
  cfg.visitor = std::move(opt.visitor);
  RouteSearch search(inst, std::move(cfg));
  for (std::size_t j = 0; j < opt.fixed.size(); ++j) search.pin(static_cast<int>(j), opt.fixed[j]);
  GeneralResult res;
  try {
    bool found = search.run();
    res.nodes = search.nodes();
    if (found) {
      res.status = Status::Feasible;
      res.solution = search.solution();
    }
  } catch (const RouteSearch::BudgetExceeded&) {
    res.nodes = search.nodes();
    res.status = Status::BudgetExceeded;
  }
  return res;
}

/// Size of the logical-edge space for building forbidden/required masks.
inline int logical_edge_count(const Instance& inst) {
  return inst.graph.edge_count() + static_cast<int>(inst.F.size());
}

}  // namespace kpip::oracle
