#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "kpip/instance_io.hpp"
#include "kpip/planarization.hpp"
#include "kpip/rng.hpp"

namespace kpip {

/// Depth-first search over insertion of F-edges in index order, each edge over
/// all realizations in the evolving planarization. Routes may be pinned to an
/// event list (certificate checking) or free with at most k crossings
/// (exact solving). Failures carry conflict sets of earlier F-edges so the
/// search can jump back over routes that cannot have caused them.
class RouteSearch {
 public:
  struct BudgetExceeded {};

  struct Config {
    long long node_budget = -1;                    // negative: unlimited
    std::optional<std::uint64_t> seed;             // shuffle candidate order
    int fixed_prefix = 0;                          // routes [0, p) keep their first realization
    std::vector<char> forbidden;                   // per logical edge: may not be crossed
    std::vector<char> required;                    // per logical edge: must end up crossed
    std::function<bool(const Solution&)> visitor;  // enumerate: called per solution, return false to stop
    /// After the fixed prefix, route next the F-edge with the fewest
    /// realizations in the current drawing (failing at once when one has none);
    /// ties go to edges that failed most often, then to the lower index.
    bool dynamic_order = false;
  };

  RouteSearch(const Instance& inst, Config cfg)
      : inst_(inst), pd_(inst), cfg_(std::move(cfg)), n_(static_cast<int>(inst.F.size())), E_(pd_.graph_edge_count()) {
    if (cfg_.seed) rng_.emplace(*cfg_.seed);
    cfg_.forbidden.resize(pd_.logical_count(), 0);
    cfg_.required.resize(pd_.logical_count(), 0);
    routes_.resize(n_);
    words_ = (n_ + 63) / 64;
    budget_blocked_.assign(n_, -1);
    base_.assign(n_, 0);
    depth_of_.assign(n_, -1);
    order_.assign(n_, -1);
    failures_.assign(n_, 0);
  }

  /// Pins route j to an event list; routes without pins are free.
  void pin(int j, std::vector<CrossingEvent> events) {
    if (pins_.empty()) pins_.resize(n_);
    pins_[j] = std::move(events);
  }

  Planarization& drawing() { return pd_; }

  /// Runs the search. True when a solution was found (first-solution mode) or
  /// the visitor asked to stop; false when the space is exhausted.
  bool run() {
    Bits conflict;
    return route(0, conflict) == Outcome::Success;
  }

  const Solution& solution() const { return found_; }
  long long nodes() const { return nodes_; }
  /// Largest route index whose search failed at least once, or -1.
  int deepest_failure() const { return deepest_; }
  /// For route j: a logical edge whose budget blocked some crossing, or -1.
  int budget_blocked(int j) const { return budget_blocked_[j]; }

 private:
  enum class Outcome { Success, Fail, Jump };
  enum class Phase { ChordOnly, CrossingOnly, Any };
  using Bits = std::vector<std::uint64_t>;  // over search depths

  void add(Bits& b, int depth) const {
    if (depth < cfg_.fixed_prefix) return;
    if (b.empty()) b.assign(words_, 0);
    b[depth >> 6] |= std::uint64_t{1} << (depth & 63);
  }
  // F-edge i, when it was routed before the current depth
  void add_edge(Bits& b, int i, int depth) const {
    const int d = depth_of_[i];
    if (d >= 0 && d < depth) add(b, d);
  }
  static bool has(const Bits& b, int i) { return !b.empty() && ((b[i >> 6] >> (i & 63)) & 1); }
  void merge_without(Bits& into, const Bits& from, int skip) const {
    if (from.empty()) return;
    if (into.empty()) into.assign(words_, 0);
    for (int w = 0; w < words_; ++w) into[w] |= from[w];
    into[skip >> 6] &= ~(std::uint64_t{1} << (skip & 63));
  }
  void all_before(Bits& b, int depth) const {
    for (int i = 0; i < depth; ++i) add(b, i);
  }

  void tick() {
    ++nodes_;
    if (cfg_.node_budget >= 0 && nodes_ > cfg_.node_budget) throw BudgetExceeded{};
  }

  bool pinned(int j) const { return !pins_.empty() && pins_[j].has_value(); }

  int pinned_logical(int j, int step) const {
    const auto& ev = (*pins_[j])[step];
    if (ev.kind == CrossingEvent::Kind::Inserted) return E_ + ev.index;
    auto e = inst_.graph.find_edge(ev.u, ev.v);
    return e ? *e : -1;
  }

  CrossingEvent event_for(int logical) const {
    if (logical >= E_) return CrossingEvent::inserted(logical - E_);
    auto [u, v] = inst_.graph.endpoints(logical);
    return CrossingEvent::graph_edge(u, v);
  }

  void note_face(int start, Bits& mine, int depth) const {
    int x = start;
    do {
      int l = pd_.owner(x);
      if (l >= E_) add_edge(mine, l - E_, depth);
      x = pd_.face_succ(x);
    } while (x != start);
  }

  template <typename T>
  void maybe_shuffle(std::vector<T>& v) {
    if (rng_) rng_->shuffle(std::span<T>(v));
  }

  Outcome leaf(Bits& out) {
    for (int l = 0; l < pd_.logical_count(); ++l) {
      if (cfg_.required[l] && pd_.crossings(l) == 0) {
        all_before(out, n_);
        return Outcome::Fail;
      }
    }
    found_.routes.clear();
    if (cfg_.dynamic_order) {
      read_back();
    } else {
      for (int i = 0; i < n_; ++i) found_.routes.push_back({i, routes_[i]});
    }
    if (cfg_.visitor && cfg_.visitor(found_)) {
      all_before(out, n_);
      return Outcome::Fail;
    }
    return Outcome::Success;
  }

  // Routes traced through the final planarization; a crossing of two F-edges
  // goes to the one with the larger index.
  void read_back() {
    found_.routes.assign(n_, {});
    for (int j = 0; j < n_; ++j) {
      Route& r = found_.routes[j];
      r.f_edge = j;
      int d = pd_.first_dart(inst_.F[j].u);
      while (pd_.owner(d) != E_ + j) d = pd_.next(d);
      while (pd_.is_dummy(pd_.head(d))) {
        const int side = pd_.next(d ^ 1);
        const int l = pd_.owner(side);
        if (l < E_ || l - E_ < j) r.events.push_back(event_for(l));
        d = pd_.next(side);
      }
    }
  }

  void start_darts(int j, std::vector<int>& starts) {
    int a0 = pd_.first_dart(inst_.F[j].u);
    if (a0 < 0) return;
    int a = a0;
    do {
      starts.push_back(a);
      a = pd_.next(a);
    } while (a != a0);
  }

  // Next F-edge for this depth, or -1 when some edge has no realization left
  // (its conflict set goes to `out`).
  int choose(int depth, Bits& out) {
    if (!cfg_.dynamic_order || depth < cfg_.fixed_prefix) return depth;
    int best = -1, best_count = 3;
    for (int j = 0; j < n_; ++j) {
      if (depth_of_[j] >= 0) continue;
      Bits mine, unused;
      counting_ = 0;
      count_cap_ = best_count <= 2 ? best_count + 1 : 2;
      depth_of_[j] = depth;
      base_[j] = pd_.segment_count();
      std::vector<int> starts;
      start_darts(j, starts);
      for (int a : starts)
        if (walk(j, a, mine, unused, Phase::Any) == Outcome::Success) break;
      depth_of_[j] = -1;
      const int count = counting_;
      counting_ = -1;
      if (count == 0) {
        ++failures_[j];
        out = std::move(mine);
        return -1;
      }
      if (count < best_count || (count == best_count && failures_[j] > failures_[best])) {
        best = j;
        best_count = count;
      }
    }
    return best;
  }

  Outcome route(int depth, Bits& out) {
    if (depth == n_) return leaf(out);
    const int j = choose(depth, out);
    if (j < 0) {
      deepest_ = std::max(deepest_, depth);
      return Outcome::Fail;
    }
    order_[depth] = j;
    depth_of_[j] = depth;
    const Outcome o = route_edge(depth, j, out);
    depth_of_[j] = -1;
    return o;
  }

  Outcome route_edge(int depth, int j, Bits& out) {
    base_[j] = pd_.segment_count();
    Bits mine, jump;
    std::vector<int> starts;
    start_darts(j, starts);
    maybe_shuffle(starts);
    // chords through a shared face first, then crossing walks
    for (Phase ph : {Phase::ChordOnly, Phase::CrossingOnly}) {
      for (int a : starts) {
        Outcome o = walk(j, a, mine, jump, ph);
        if (o == Outcome::Success) return o;
        if (o == Outcome::Jump) {
          out = std::move(jump);
          deepest_ = std::max(deepest_, depth);
          return Outcome::Fail;
        }
      }
    }
    deepest_ = std::max(deepest_, depth);
    ++failures_[j];
    out = std::move(mine);
    return Outcome::Fail;
  }

  Outcome finish(int j, int tip, int end, Bits& mine, Bits& jump) {
    if (counting_ >= 0) return ++counting_ >= count_cap_ ? Outcome::Success : Outcome::Fail;
    tick();
    const int depth = depth_of_[j];
    auto m = pd_.mark();
    pd_.connect(tip, end, E_ + j);
    Bits child;
    std::vector<int> origins, inserted;
    std::swap(origins, used_origins_);
    std::swap(inserted, used_inserted_);
    Outcome o = route(depth + 1, child);
    std::swap(origins, used_origins_);
    std::swap(inserted, used_inserted_);
    pd_.rollback(m);
    if (o == Outcome::Success) return o;
    if (!has(child, depth)) {
      jump = std::move(child);
      return Outcome::Jump;
    }
    merge_without(mine, child, depth);
    return Outcome::Fail;
  }

  Outcome walk(int j, int tip, Bits& mine, Bits& jump, Phase ph = Phase::Any) {
    const int depth = depth_of_[j];
    const int q = inst_.F[j].v;
    const int step = static_cast<int>(routes_[j].size());
    const bool pin = pinned(j);
    const int want = pin && step < static_cast<int>(pins_[j]->size()) ? pinned_logical(j, step) : -2;
    const bool may_end = ph != Phase::CrossingOnly && (pin ? step == static_cast<int>(pins_[j]->size()) : true);
    const bool may_cross = ph != Phase::ChordOnly && (pin ? want != -2 : step < pd_.k());

    std::vector<int> ends, crosses;
    const int start = pd_.next(tip);
    note_face(start, mine, depth);
    int x = start;
    do {
      if (may_end && pd_.head(x) == q) ends.push_back(x ^ 1);
      if (may_cross && (!pin || pd_.owner(x) == want) && !cfg_.forbidden[pd_.owner(x)]) {
        auto v = pd_.can_cross(j, x, base_[j], used_origins_, used_inserted_);
        if (v == Planarization::Verdict::Ok) {
          crosses.push_back(x);
        } else if (v == Planarization::Verdict::Budget) {
          int l = pd_.owner(x);
          budget_blocked_[j] = l;
          for (int c : pd_.crossers(l))
            if (c >= E_) add_edge(mine, c - E_, depth);
        }
      }
      x = pd_.face_succ(x);
    } while (x != start);
    maybe_shuffle(ends);
    maybe_shuffle(crosses);

    for (int e : ends) {
      Outcome o = finish(j, tip, e, mine, jump);
      if (o != Outcome::Fail) return o;
    }
    for (int s : crosses) {
      if (counting_ < 0) tick();
      auto m = pd_.mark();
      const int l = pd_.owner(s);
      used_origins_.push_back(pd_.root_segment(s, base_[j]));
      if (l >= E_) used_inserted_.push_back(l);
      routes_[j].push_back(event_for(l));
      int t = pd_.subdivide(s, E_ + j);
      pd_.connect(tip, s ^ 1, E_ + j);
      Outcome o = walk(j, t, mine, jump);
      pd_.rollback(m);
      routes_[j].pop_back();
      used_origins_.pop_back();
      if (l >= E_) used_inserted_.pop_back();
      if (o != Outcome::Fail) return o;
    }
    return Outcome::Fail;
  }

  const Instance& inst_;
  Planarization pd_;
  Config cfg_;
  int n_;
  int E_;
  int words_ = 0;
  std::optional<Rng> rng_;
  std::vector<std::optional<std::vector<CrossingEvent>>> pins_;
  std::vector<std::vector<CrossingEvent>> routes_;
  std::vector<int> used_origins_, used_inserted_;
  std::vector<int> budget_blocked_;
  std::vector<int> base_;      // segment count when route j began
  std::vector<int> depth_of_;  // search depth of F-edge j while routed, else -1
  std::vector<int> order_;     // F-edge routed at each depth
  int counting_ = -1;          // realizations seen by a dry run, -1 outside one
  int count_cap_ = 2;
  std::vector<long long> failures_;  // per F-edge, for tie-breaking
  Solution found_;
  long long nodes_ = 0;
  int deepest_ = -1;
};

}  // namespace kpip
