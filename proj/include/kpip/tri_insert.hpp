#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "kpip/errors.hpp"
#include "kpip/instance_io.hpp"
#include "kpip/plane_graph.hpp"
#include "kpip/twosat.hpp"

namespace kpip::tri {

/// F-edge (u,v) drawn through the two triangles on either side of `crossed`.
struct Option {
  int f_edge = -1;
  int crossed = -1;
  std::array<int, 4> quad{};         // u, x, v, w with crossed = (x, w)
  std::array<int, 4> quad_edges{};   // (u,x), (x,v), (v,w), (w,u) as G-edge ids
};

struct OptionCatalog {
  std::vector<Option> options;
  std::vector<int> first;            // per F-edge: options[first[i] .. first[i+1])
  std::vector<int> option_of_edge;   // per G-edge: option crossing it, or -1
  std::vector<char> alive;
  std::vector<int> alive_count;      // per F-edge
  std::vector<int> committed;        // per F-edge: chosen option, or -1
  int alive_total = 0;

  int f_count() const { return static_cast<int>(first.size()) - 1; }
  std::span<const Option> options_of(int f) const {
    return {options.data() + first[f], static_cast<std::size_t>(first[f + 1] - first[f])};
  }
  int option_begin(int f) const { return first[f]; }
  int option_end(int f) const { return first[f + 1]; }
  bool live(int f) const { return committed[f] < 0; }
};

/// Per option, up to four clashing options of other F-edges (-1 padded).
struct ClashGraph {
  std::vector<std::array<int, 4>> adj;

  int degree(int o) const {
    return static_cast<int>(std::count_if(adj[o].begin(), adj[o].end(), [](int x) { return x >= 0; }));
  }
  bool clash(int a, int b) const { return std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end(); }
};

inline void require_tri_instance(const Instance& inst) {
  require(inst.k == 1, ErrorCode::KNotOne, "k = " + std::to_string(inst.k));
  require(is_triangulation(inst.graph), ErrorCode::NotTriangulation, "G is not a triangulation");
}

/// One option per G-edge whose two apexes are the endpoints of an F-edge.
inline OptionCatalog enumerate_options(const Instance& inst) {
  require_tri_instance(inst);
  const PlaneGraph& g = inst.graph;
  const int nf = static_cast<int>(inst.F.size());
  // F-edges per endpoint, CSR
  const int n = g.vertex_count();
  std::vector<int> f_first(n + 1, 0), f_list(2 * nf);
  for (const auto& p : inst.F) ++f_first[p.u + 1], ++f_first[p.v + 1];
  for (int i = 0; i < n; ++i) f_first[i + 1] += f_first[i];
  {
    std::vector<int> fill(f_first.begin(), f_first.end() - 1);
    for (int i = 0; i < nf; ++i) f_list[fill[inst.F[i].u]++] = i, f_list[fill[inst.F[i].v]++] = i;
  }
  auto f_between = [&](int a, int b) {
    if (f_first[a + 1] - f_first[a] > f_first[b + 1] - f_first[b]) std::swap(a, b);
    for (int j = f_first[a]; j < f_first[a + 1]; ++j) {
      const auto& p = inst.F[f_list[j]];
      if (p.u == b || p.v == b) return f_list[j];
    }
    return -1;
  };

  OptionCatalog cat;
  cat.option_of_edge.assign(g.edge_count(), -1);
  std::vector<Option> raw;
  for (int e = 0; e < g.edge_count(); ++e) {
    const int d = g.edge_dart(e);
    const int r1 = g.face_succ(d), r2 = g.face_succ(r1);
    const int t = g.twin(d);
    const int l1 = g.face_succ(t), l2 = g.face_succ(l1);
    const int right = g.head(r1), left = g.head(l1);
    if (right == left) continue;
    if (f_first[right] == f_first[right + 1] || f_first[left] == f_first[left + 1]) continue;
    const int fi = f_between(right, left);
    if (fi < 0) continue;
    Option o;
    o.f_edge = fi;
    o.crossed = e;
    const int x = g.tail(d), w = g.head(d);
    const int u = inst.F[o.f_edge].u, v = inst.F[o.f_edge].v;
    o.quad = {u, x, v, w};
    // right face is (x, w, right): edges (w,right) and (right,x)
    const int e_w_right = g.edge_of(r1), e_right_x = g.edge_of(r2);
    const int e_x_left = g.edge_of(l1), e_left_w = g.edge_of(l2);
    if (u == right)
      o.quad_edges = {e_right_x, e_x_left, e_left_w, e_w_right};
    else
      o.quad_edges = {e_x_left, e_right_x, e_w_right, e_left_w};
    raw.push_back(o);
  }
  // bucket by F-edge, keeping edge order inside each bucket
  cat.first.assign(nf + 1, 0);
  for (const auto& o : raw) ++cat.first[o.f_edge + 1];
  for (int i = 0; i < nf; ++i) cat.first[i + 1] += cat.first[i];
  cat.options.resize(raw.size());
  {
    std::vector<int> fill(cat.first.begin(), cat.first.end() - 1);
    for (const auto& o : raw) cat.options[fill[o.f_edge]++] = o;
  }
  for (int id = 0; id < static_cast<int>(cat.options.size()); ++id) {
    int& slot = cat.option_of_edge[cat.options[id].crossed];
    require(slot < 0, ErrorCode::InvalidArgument, "G-edge is an option for two F-edges");
    slot = id;
  }
  cat.alive.assign(cat.options.size(), 1);
  cat.alive_count.resize(nf);
  for (int i = 0; i < nf; ++i) cat.alive_count[i] = cat.first[i + 1] - cat.first[i];
  cat.committed.assign(nf, -1);
  cat.alive_total = static_cast<int>(cat.options.size());
  return cat;
}

/// σ and σ' (of different F-edges) clash iff σ' crosses a boundary edge of σ's quadrilateral.
inline ClashGraph compute_clashes(const OptionCatalog& cat) {
  ClashGraph cg;
  cg.adj.assign(cat.options.size(), {-1, -1, -1, -1});
  for (int id = 0; id < static_cast<int>(cat.options.size()); ++id) {
    int n = 0;
    for (int e : cat.options[id].quad_edges) {
      int other = cat.option_of_edge[e];
      if (other >= 0 && cat.options[other].f_edge != cat.options[id].f_edge) cg.adj[id][n++] = other;
    }
  }
  return cg;
}

// ---------------------------------------------------------------------------
// classification

enum class OptionCase { Single, TwoIsolated, Isolated, LongRun, ThreeRun, Cyclic, PairedRuns };

inline std::string_view to_string(OptionCase c) {
  switch (c) {
    case OptionCase::Single: return "single";
    case OptionCase::TwoIsolated: return "two-isolated";
    case OptionCase::Isolated: return "has-nonconsecutive";
    case OptionCase::LongRun: return "run-of-4-or-more";
    case OptionCase::ThreeRun: return "three-consecutive";
    case OptionCase::Cyclic: return "cyclic";
    case OptionCase::PairedRuns: return "runs-of-two";
  }
  return "?";
}

struct Classification {
  OptionCase kind = OptionCase::Single;
  std::vector<std::vector<int>> runs;  // maximal chains of consecutive options, in chain order
  int candidate = -1;                  // option the reduction looks at first
};

/// Two options of one F-edge are consecutive iff their crossed edges share an
/// endpoint (their triangles at u then share an edge). Alive options only.
inline Classification classify_options(const OptionCatalog& cat, int f) {
  Classification c;
  std::vector<int> ids;
  for (int id = cat.option_begin(f); id < cat.option_end(f); ++id)
    if (cat.alive[id]) ids.push_back(id);
  if (ids.size() <= 1) {
    c.kind = OptionCase::Single;
    if (!ids.empty()) c.runs.push_back(ids);
    return c;
  }
  auto ends = [&](int id) { return std::pair{cat.options[id].quad[1], cat.options[id].quad[3]}; };
  auto adjacent = [&](int a, int b) {
    auto [a1, a2] = ends(a);
    auto [b1, b2] = ends(b);
    return a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2;
  };
  const int m = static_cast<int>(ids.size());
  std::vector<std::vector<int>> nb(m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (adjacent(ids[i], ids[j])) {
        nb[i].push_back(j);
        nb[j].push_back(i);
      }
  std::vector<char> seen(m, 0);
  bool cyclic = m >= 3 && std::all_of(nb.begin(), nb.end(), [](const auto& v) { return v.size() == 2; });
  // chains start at degree-0/1 members; a full cycle starts anywhere
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < m; ++i) {
      if (seen[i] || (pass == 0 && nb[i].size() == 2)) continue;
      std::vector<int> run;
      int prev = -1, cur = i;
      while (cur >= 0 && !seen[cur]) {
        seen[cur] = 1;
        run.push_back(ids[cur]);
        int nxt = -1;
        for (int w : nb[cur])
          if (w != prev && !seen[w]) nxt = w;
        prev = cur;
        cur = nxt;
      }
      c.runs.push_back(run);
    }
  }
  if (cyclic && c.runs.size() == 1) {
    c.kind = OptionCase::Cyclic;
    c.candidate = c.runs[0][0];
    return c;
  }
  if (m == 2) {
    c.kind = OptionCase::TwoIsolated;
    return c;
  }
  for (const auto& r : c.runs)
    if (r.size() == 1) {
      c.kind = OptionCase::Isolated;
      c.candidate = r[0];
      return c;
    }
  for (const auto& r : c.runs)
    if (r.size() >= 4) {
      c.kind = OptionCase::LongRun;
      c.candidate = r[1];
      return c;
    }
  for (const auto& r : c.runs)
    if (r.size() == 3) {
      c.kind = OptionCase::ThreeRun;
      c.candidate = r[1];
      return c;
    }
  c.kind = OptionCase::PairedRuns;
  c.candidate = c.runs[0][0];
  return c;
}

// ---------------------------------------------------------------------------
// reduction

enum class Rule { NoOption, SingleOption, SafeCandidate, DominatedCandidate, ExactComponent };

inline std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::NoOption: return "no-option";
    case Rule::SingleOption: return "single-option";
    case Rule::SafeCandidate: return "safe-candidate";
    case Rule::DominatedCandidate: return "dominated-candidate";
    case Rule::ExactComponent: return "exact-component";
  }
  return "?";
}

/// Emitted before each rule application, with the catalog as it was.
struct ReduceEvent {
  Rule rule;
  int f_edge = -1;
  int option = -1;                 // committed or deleted option (-1 for components)
  OptionCase option_case = OptionCase::Single;
  std::vector<int> component;      // F-edges resolved together (ExactComponent)
  const OptionCatalog* catalog = nullptr;
};

struct ReduceStats {
  int iterations = 0;
  int commits = 0;
  int deletions = 0;
  int components = 0;
  int largest_component = 0;
  /// Candidates from the isolated / long-run cases that were neither safe nor
  /// dominated by a neighbouring F-edge.
  int case_violations = 0;
};

struct ReduceResult {
  bool feasible = true;
  int failed_f_edge = -1;
  ReduceStats stats;
};

namespace detail {

class Reducer {
 public:
  Reducer(OptionCatalog& cat, const ClashGraph& cg, std::function<void(const ReduceEvent&)> observer)
      : cat_(cat), cg_(cg), observe_(std::move(observer)) {}

  ReduceResult run() {
    const int nf = cat_.f_count();
    for (int f = 0; f < nf; ++f)
      if (cat_.live(f) && cat_.alive_count[f] <= 1) small_.push_back(f);
    int scan = 0;
    while (true) {
      if (!drain()) return result_;
      while (scan < nf && (!cat_.live(scan) || cat_.alive_count[scan] < 3)) ++scan;
      if (scan == nf) break;
      ++result_.stats.iterations;
      if (!step(scan)) return result_;
    }
    return result_;
  }

 private:
  bool drain() {
    while (!small_.empty()) {
      int f = small_.front();
      small_.pop_front();
      if (!cat_.live(f)) continue;
      if (cat_.alive_count[f] == 0) {
        emit(Rule::NoOption, f, -1, OptionCase::Single);
        result_.feasible = false;
        result_.failed_f_edge = f;
        return false;
      }
      if (cat_.alive_count[f] == 1) {
        ++result_.stats.iterations;
        int o = first_alive(f);
        emit(Rule::SingleOption, f, o, OptionCase::Single);
        commit(o);
      }
    }
    return true;
  }

  bool step(int f) {
    Classification c = classify_options(cat_, f);
    if (c.kind != OptionCase::Cyclic) {
      int s = c.candidate;
      if (!has_alive_clash(s)) {
        emit(Rule::SafeCandidate, f, s, c.kind);
        commit(s);
        return true;
      }
      if (dominated(s)) {
        emit(Rule::DominatedCandidate, f, s, c.kind);
        remove(s);
        return true;
      }
      if (c.kind == OptionCase::Isolated || c.kind == OptionCase::LongRun) ++result_.stats.case_violations;
    }
    return resolve_component(f, c.kind);
  }

  int first_alive(int f) const {
    for (int id = cat_.option_begin(f); id < cat_.option_end(f); ++id)
      if (cat_.alive[id]) return id;
    return -1;
  }

  bool has_alive_clash(int o) const {
    for (int x : cg_.adj[o])
      if (x >= 0 && cat_.alive[x]) return true;
    return false;
  }

  /// Some live F-edge clashing with o has every alive option clashing with o.
  bool dominated(int o) const {
    for (int x : cg_.adj[o]) {
      if (x < 0 || !cat_.alive[x]) continue;
      int g = cat_.options[x].f_edge;
      bool all = true;
      for (int y = cat_.option_begin(g); y < cat_.option_end(g) && all; ++y)
        if (cat_.alive[y] && !cg_.clash(o, y)) all = false;
      if (all) return true;
    }
    return false;
  }

  void remove(int o) {
    if (!cat_.alive[o]) return;
    cat_.alive[o] = 0;
    --cat_.alive_total;
    int f = cat_.options[o].f_edge;
    if (--cat_.alive_count[f] <= 1 && cat_.live(f)) small_.push_back(f);
    ++result_.stats.deletions;
  }

  void commit(int o) {
    int f = cat_.options[o].f_edge;
    for (int x : cg_.adj[o])
      if (x >= 0) remove(x);
    for (int y = cat_.option_begin(f); y < cat_.option_end(f); ++y)
      if (cat_.alive[y]) {
        cat_.alive[y] = 0;
        --cat_.alive_total;
      }
    cat_.alive_count[f] = 0;
    cat_.committed[f] = o;
    ++result_.stats.commits;
  }

  /// Exact search over the clash-connected set of live F-edges around f. The
  /// set is closed under alive clashes, so its solutions combine freely with
  /// any solution of the rest.
  bool resolve_component(int f, OptionCase kind) {
    std::vector<int> comp{f};
    std::vector<char> in(cat_.f_count(), 0);
    in[f] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      int g = comp[i];
      for (int y = cat_.option_begin(g); y < cat_.option_end(g); ++y) {
        if (!cat_.alive[y]) continue;
        for (int x : cg_.adj[y]) {
          if (x < 0 || !cat_.alive[x]) continue;
          int h = cat_.options[x].f_edge;
          if (!in[h]) {
            in[h] = 1;
            comp.push_back(h);
          }
        }
      }
    }
    ++result_.stats.components;
    result_.stats.largest_component = std::max<int>(result_.stats.largest_component, comp.size());
    ReduceEvent ev{Rule::ExactComponent, f, -1, kind, comp, &cat_};
    if (observe_) observe_(ev);

    std::vector<int> choice(comp.size(), -1);
    std::vector<int> pos(cat_.f_count(), -1);
    for (std::size_t i = 0; i < comp.size(); ++i) pos[comp[i]] = static_cast<int>(i);
    if (!search(comp, pos, choice, 0)) {
      result_.feasible = false;
      result_.failed_f_edge = f;
      return false;
    }
    for (int o : choice) commit(o);
    return true;
  }

  bool search(const std::vector<int>& comp, const std::vector<int>& pos, std::vector<int>& choice,
              std::size_t i) {
    if (i == comp.size()) return true;
    int g = comp[i];
    for (int y = cat_.option_begin(g); y < cat_.option_end(g); ++y) {
      if (!cat_.alive[y]) continue;
      bool ok = true;
      for (int x : cg_.adj[y]) {
        if (x < 0) continue;
        int p = pos[cat_.options[x].f_edge];
        if (p >= 0 && choice[p] == x) ok = false;
      }
      if (!ok) continue;
      choice[i] = y;
      if (search(comp, pos, choice, i + 1)) return true;
      choice[i] = -1;
    }
    return false;
  }

  void emit(Rule r, int f, int o, OptionCase c) {
    if (observe_) observe_(ReduceEvent{r, f, o, c, {}, &cat_});
  }

  OptionCatalog& cat_;
  const ClashGraph& cg_;
  std::function<void(const ReduceEvent&)> observe_;
  std::deque<int> small_;
  ReduceResult result_;
};

}  // namespace detail

/// Shrinks every live F-edge to exactly two alive options (or reports
/// infeasibility), committing safe options and deleting unusable ones.
inline ReduceResult reduce_instance(OptionCatalog& cat, const ClashGraph& cg,
                                    std::function<void(const ReduceEvent&)> observer = {}) {
  return detail::Reducer(cat, cg, std::move(observer)).run();
}

struct SolveResult {
  bool feasible = false;
  Solution solution;
  ReduceStats stats;
  std::vector<int> chosen;  // per F-edge: option id
};

inline Solution solution_from_choice(const Instance& inst, const OptionCatalog& cat, const std::vector<int>& chosen) {
  Solution sol;
  for (int i = 0; i < static_cast<int>(chosen.size()); ++i) {
    auto [x, w] = inst.graph.endpoints(cat.options[chosen[i]].crossed);
    sol.routes.push_back({i, {CrossingEvent::graph_edge(x, w)}});
  }
  return sol;
}

/// Linear-time decision and construction for k = 1 on triangulations.
inline SolveResult solve(const Instance& inst, std::function<void(const ReduceEvent&)> observer = {}) {
  OptionCatalog cat = enumerate_options(inst);
  ClashGraph cg = compute_clashes(cat);
  ReduceResult red = reduce_instance(cat, cg, std::move(observer));
  SolveResult out;
  out.stats = red.stats;
  if (!red.feasible) return out;

  const int nf = cat.f_count();
  // one variable per alive option
  std::vector<int> var(cat.options.size(), -1);
  int vars = 0;
  for (int id = 0; id < static_cast<int>(cat.options.size()); ++id)
    if (cat.alive[id]) var[id] = vars++;
  twosat::Formula formula(vars);
  for (int f = 0; f < nf; ++f) {
    if (!cat.live(f)) continue;
    int a = -1, b = -1;
    for (int id = cat.option_begin(f); id < cat.option_end(f); ++id)
      if (cat.alive[id]) (a < 0 ? a : b) = id;
    formula.add(twosat::pos(var[a]), twosat::pos(var[b]));
    formula.add(twosat::neg(var[a]), twosat::neg(var[b]));
  }
  for (int id = 0; id < static_cast<int>(cat.options.size()); ++id) {
    if (!cat.alive[id]) continue;
    for (int x : cg.adj[id])
      if (x > id && cat.alive[x]) formula.add(twosat::neg(var[id]), twosat::neg(var[x]));
  }
  auto model = twosat::solve(formula);
  if (!model) return out;
  out.chosen.assign(nf, -1);
  for (int f = 0; f < nf; ++f) {
    if (!cat.live(f)) {
      out.chosen[f] = cat.committed[f];
      continue;
    }
    for (int id = cat.option_begin(f); id < cat.option_end(f); ++id)
      if (cat.alive[id] && (*model)[var[id]]) out.chosen[f] = id;
  }
  out.feasible = true;
  out.solution = solution_from_choice(inst, cat, out.chosen);
  return out;
}

}  // namespace kpip::tri
