#pragma once

#include "kpip/instance_io.hpp"
#include "kpip/plane_graph.hpp"
#include "kpip/rng.hpp"

namespace fixtures {

using namespace kpip;

/// Octahedron with all three antipodal pairs as F.
inline Instance octahedron_antipodal() {
  return make_instance(named::octahedron(), {{0, 5}, {1, 3}, {2, 4}}, 1);
}

/// A certificate for `octahedron_antipodal`.
inline Solution octahedron_certificate() {
  return Solution{{{0, {CrossingEvent::graph_edge(1, 2)}},
                   {1, {CrossingEvent::graph_edge(0, 4)}},
                   {2, {CrossingEvent::graph_edge(3, 5)}}}};
}

/// K4 {0,1,2,3}; 4 stacked into (0,2,3), 5 into (2,3,4), 6 into (3,4,5).
/// No edge has apexes 1 and 6.
inline PlaneGraph apollonian7() {
  return PlaneGraph::from_rotation(7, {{1, 3, 4, 2},
                                       {2, 3, 0},
                                       {0, 4, 5, 3, 1},
                                       {2, 5, 6, 4, 0, 1},
                                       {3, 6, 5, 2, 0},
                                       {2, 4, 6, 3},
                                       {3, 5, 4}});
}

inline Instance apollonian7_infeasible() { return make_instance(apollonian7(), {{1, 6}}, 1); }

/// Unit-square coordinates for the octahedron (0 inside, 5 outside).
inline std::vector<Point> octahedron_coords() {
  auto P = [](int x, int y) { return Point{{x, 1}, {y, 1}}; };
  return {P(0, 0), P(12, 0), P(6, 10), P(4, 5), P(6, 2), P(8, 5)};
}

}  // namespace fixtures

namespace fixtures {

/// Small random k=1 triangulation instance: stacked triangulation with F drawn
/// mostly from apex pairs (so options exist) plus some arbitrary non-edges.
inline Instance random_tri_instance(std::uint64_t seed, int min_n = 6, int max_n = 14, int max_f = 6) {
  Rng rng(seed * 7919 + 17);
  int n = min_n + static_cast<int>(rng.below(max_n - min_n + 1));
  auto g = generate_stacked_triangulation(n, seed);
  int m = 1 + static_cast<int>(rng.below(max_f));
  auto F = sample_apex_pairs(g, m, seed + 1);
  if (rng.below(4) == 0 && F.size() > 1) {
    auto extra = sample_complement_edges(g, 1, seed + 2, FStructure::None);
    bool dup = false;
    for (auto p : F) dup |= p.key() == extra[0].key();
    if (!dup) F.back() = extra[0];
  }
  if (F.empty()) F = sample_complement_edges(g, 1, seed + 3, FStructure::None);
  return make_instance(std::move(g), std::move(F), 1);
}

}  // namespace fixtures

#include "kpip/formula.hpp"
#include "kpip/reduction.hpp"

namespace fixtures {

/// First assignment of clause layers from {2, 3} that the layout accepts.
inline bool place_layers(reduction::MonotoneFormula& f) {
  const int m = static_cast<int>(f.clauses.size());
  for (int mask = 0; mask < (1 << m); ++mask) {
    for (int c = 0; c < m; ++c) f.clauses[c].layer = 2 + ((mask >> c) & 1);
    try {
      reduction::detail::plan_formula(f, 1, reduction::Variant::Path);
      return true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::LayoutInfeasible) throw;
    }
  }
  return false;
}

/// Monotone formulas over at most `max_vars` variables with at most
/// `max_clauses` clauses (distinct-variable literal sets, unordered clause
/// multisets), in every variable order.
inline std::vector<reduction::MonotoneFormula> tiny_formulas(int max_vars = 2, int max_clauses = 2) {
  using namespace reduction;
  std::vector<reduction::MonotoneFormula> out;
  for (int n = 1; n <= max_vars; ++n) {
    std::vector<Clause> pool;
    for (int subset = 1; subset < (1 << n); ++subset)
      for (Polarity p : {Polarity::Positive, Polarity::Negative}) {
        Clause c{p, 2, {}};
        for (int v = 0; v < n; ++v)
          if ((subset >> v) & 1) c.literals.push_back(v);
        pool.push_back(c);
      }
    std::vector<std::vector<Clause>> sets{{}};
    for (int size = 1; size <= max_clauses; ++size) {
      std::vector<int> idx(size, 0);
      while (true) {
        std::vector<Clause> cs;
        for (int i : idx) cs.push_back(pool[i]);
        sets.push_back(cs);
        int pos = size - 1;
        while (pos >= 0 && idx[pos] == static_cast<int>(pool.size()) - 1) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int q = pos + 1; q < size; ++q) idx[q] = idx[pos];
      }
    }
    std::vector<int> order(n);
    for (int v = 0; v < n; ++v) order[v] = v;
    do {
      for (const auto& cs : sets) {
        MonotoneFormula f{n, cs, order};
        if (place_layers(f)) out.push_back(std::move(f));
      }
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return out;
}

}  // namespace fixtures
