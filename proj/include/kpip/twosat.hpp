#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "kpip/errors.hpp"

namespace kpip::twosat {

struct Literal {
  int var = 0;
  bool positive = true;

  Literal operator!() const { return {var, !positive}; }
  friend bool operator==(const Literal&, const Literal&) = default;
};

inline Literal pos(int v) { return {v, true}; }
inline Literal neg(int v) { return {v, false}; }

struct Formula {
  int variable_count = 0;
  std::vector<std::pair<Literal, Literal>> clauses;

  explicit Formula(int n = 0) : variable_count(n) {}
  void add(Literal a, Literal b) { clauses.emplace_back(a, b); }
};

inline bool satisfies(const Formula& f, const std::vector<bool>& model) {
  auto val = [&](Literal l) { return model[l.var] == l.positive; };
  return std::all_of(f.clauses.begin(), f.clauses.end(),
                     [&](const auto& c) { return val(c.first) || val(c.second); });
}

/// Satisfying assignment, or nullopt when unsatisfiable. Iterative SCC on the
/// implication graph; x is true iff comp(x) lies closer to the sinks than
/// comp(!x) in the condensation.
inline std::optional<std::vector<bool>> solve(const Formula& f) {
  const int n = f.variable_count;
  const int nodes = 2 * n;
  auto node = [](Literal l) { return 2 * l.var + (l.positive ? 0 : 1); };

  // CSR implication graph, (a or b) giving !a -> b and !b -> a. Each list
  // ends in -1 so the DFS can advance start[v] in place as its cursor.
  std::vector<int> start(nodes + 1, 0);
  for (const auto& [a, b] : f.clauses) {
    require(a.var >= 0 && a.var < n && b.var >= 0 && b.var < n, ErrorCode::InvalidArgument,
            "2-SAT literal out of range");
    ++start[node(!a)];
    ++start[node(!b)];
  }
  int total = 0;
  for (int i = 0; i < nodes; ++i) {
    total += start[i] + 1;
    start[i] = total - 1;
  }
  std::vector<int> arcs(total);
  for (int i = 0; i < nodes; ++i) arcs[start[i]] = -1;
  for (const auto& [a, b] : f.clauses) {
    arcs[--start[node(!a)]] = node(b);
    arcs[--start[node(!b)]] = node(a);
  }

  // Pearce's single-array SCC variant: rindex holds the DFS index while a node
  // is open and its component id afterwards. Ids count down from nodes - 1,
  // so sink components get the largest ids.
  std::vector<int> rindex(nodes, 0);
  std::vector<char> is_root(nodes, 0);
  std::vector<int> open, call;
  open.reserve(nodes);
  call.reserve(nodes);
  int counter = 1, comp = nodes - 1;
  for (int r = 0; r < nodes; ++r) {
    if (rindex[r]) continue;
    rindex[r] = counter++;
    is_root[r] = 1;
    call.push_back(r);
    while (!call.empty()) {
      const int v = call.back();
      const int w = arcs[start[v]];
      if (w >= 0) {
        ++start[v];
        if (!rindex[w]) {
          rindex[w] = counter++;
          is_root[w] = 1;
          call.push_back(w);
        } else if (rindex[w] < rindex[v]) {
          rindex[v] = rindex[w];
          is_root[v] = 0;
        }
        continue;
      }
      call.pop_back();
      if (is_root[v]) {
        --counter;
        while (!open.empty() && rindex[v] <= rindex[open.back()]) {
          rindex[open.back()] = comp;
          open.pop_back();
          --counter;
        }
        rindex[v] = comp--;
      } else {
        open.push_back(v);
      }
      if (!call.empty()) {
        const int p = call.back();
        if (rindex[v] < rindex[p]) {
          rindex[p] = rindex[v];
          is_root[p] = 0;
        }
      }
    }
  }

  std::vector<bool> model(n);
  for (int v = 0; v < n; ++v) {
    int p = rindex[2 * v], q = rindex[2 * v + 1];
    if (p == q) return std::nullopt;
    model[v] = p > q;
  }
  return model;
}

}  // namespace kpip::twosat
