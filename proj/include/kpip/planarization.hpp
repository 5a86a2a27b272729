#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "kpip/errors.hpp"
#include "kpip/instance_io.hpp"

namespace kpip {

/// Where a route starts, what it crosses and where it ends, in terms of darts
/// of the planarization at the moment each step is applied. A corner "after a"
/// is the angle between outgoing dart a and its counterclockwise successor.
struct Realization {
  int start = -1;              // outgoing dart at the F-edge's first endpoint
  std::vector<int> crossed;    // one dart per crossing, on the face of the current corner
  int end = -1;                // outgoing dart at the second endpoint
};

/// Mutable planarization of Γ plus inserted edges. Darts come in pairs 2i,
/// 2i+1 (segment i); dummy vertices replace crossings. Every mutation is
/// logged so search can roll back to a mark.
///
/// Logical edges: 0..E-1 are the edges of G (in graph order), E+i is F-edge i.
class Planarization {
 public:
  struct Mark {
    std::size_t log;
    int darts;
    int vertices;
  };

  explicit Planarization(const Instance& inst) : F_(inst.F), k_(inst.k) {
    const PlaneGraph& g = inst.graph;
    edges_ = g.edge_count();
    vertex_count_ = g.vertex_count();
    const int darts = 2 * edges_;
    tail_.resize(darts);
    next_.resize(darts);
    prev_.resize(darts);
    owner_.resize(edges_);
    origin_.resize(edges_);
    first_.assign(vertex_count_, -1);
    dummy_.assign(vertex_count_, 0);
    endpoints_.resize(edges_ + F_.size());
    crossings_.assign(edges_ + F_.size(), 0);
    crossers_.resize(edges_ + F_.size());
    auto id = [&](int d) { return 2 * g.edge_of(d) + (g.tail(d) < g.head(d) ? 0 : 1); };
    for (int d = 0; d < g.dart_count(); ++d) {
      int me = id(d);
      tail_[me] = g.tail(d);
      next_[me] = id(g.next(d));
      prev_[me] = id(g.prev(d));
      if (first_[g.tail(d)] < 0) first_[g.tail(d)] = me;
    }
    for (int e = 0; e < edges_; ++e) {
      owner_[e] = e;
      origin_[e] = -1;
      endpoints_[e] = g.endpoints(e);
    }
    for (std::size_t i = 0; i < F_.size(); ++i) endpoints_[edges_ + i] = F_[i];
  }

  int k() const { return k_; }
  int graph_edge_count() const { return edges_; }
  int f_count() const { return static_cast<int>(F_.size()); }
  const std::vector<VertexPair>& F() const { return F_; }
  int logical_count() const { return static_cast<int>(crossings_.size()); }
  int vertex_count() const { return vertex_count_; }
  int dart_count() const { return static_cast<int>(tail_.size()); }
  int segment_count() const { return dart_count() / 2; }

  int tail(int d) const { return tail_[d]; }
  int head(int d) const { return tail_[d ^ 1]; }
  int next(int d) const { return next_[d]; }
  int prev(int d) const { return prev_[d]; }
  int face_succ(int d) const { return next_[d ^ 1]; }
  int owner(int d) const { return owner_[d >> 1]; }
  /// The segment that d's segment was split from, following splits made at or
  /// after segment id `base` (the segment count when the current route began).
  int root_segment(int d, int base) const {
    int seg = d >> 1;
    while (seg >= base && origin_[seg] >= 0) seg = origin_[seg];
    return seg;
  }
  int first_dart(int v) const { return first_[v]; }
  bool is_dummy(int v) const { return dummy_[v] != 0; }
  int crossings(int logical) const { return crossings_[logical]; }
  const std::vector<int>& crossers(int logical) const { return crossers_[logical]; }
  VertexPair logical_endpoints(int logical) const { return endpoints_[logical]; }
  bool is_inserted(int logical) const { return logical >= edges_; }

  int degree(int v) const {
    int d = first_[v], n = 0;
    if (d < 0) return 0;
    int x = d;
    do {
      ++n;
      x = next_[x];
    } while (x != d);
    return n;
  }

  /// Darts of the face lying right of d, starting with d.
  std::vector<int> face_darts(int d) const {
    std::vector<int> out;
    int x = d;
    do {
      out.push_back(x);
      x = face_succ(x);
    } while (x != d);
    return out;
  }

  int face_count() const {
    std::vector<char> seen(dart_count(), 0);
    int faces = 0;
    for (int d = 0; d < dart_count(); ++d) {
      if (seen[d]) continue;
      ++faces;
      int x = d;
      do {
        seen[x] = 1;
        x = face_succ(x);
      } while (x != d);
    }
    return vertex_count_ == 1 && dart_count() == 0 ? 1 : faces;
  }

  int euler_characteristic() const { return vertex_count_ - segment_count() + face_count(); }

  Mark mark() const { return {log_.size(), dart_count(), vertex_count_}; }

  void rollback(const Mark& m) {
    while (log_.size() > m.log) {
      const Entry& e = log_.back();
      switch (e.field) {
        case Field::Next: next_[e.index] = e.old; break;
        case Field::Prev: prev_[e.index] = e.old; break;
        case Field::Tail: tail_[e.index] = e.old; break;
        case Field::First: first_[e.index] = e.old; break;
        case Field::Crossings: crossings_[e.index] = e.old; break;
        case Field::Crosser: crossers_[e.index].pop_back(); break;
      }
      log_.pop_back();
    }
    tail_.resize(m.darts);
    next_.resize(m.darts);
    prev_.resize(m.darts);
    owner_.resize(m.darts / 2);
    origin_.resize(m.darts / 2);
    first_.resize(m.vertices);
    dummy_.resize(m.vertices);
    vertex_count_ = m.vertices;
  }

  /// Splits the segment of dart s = x->y at a new dummy vertex m, charging one
  /// crossing to its logical edge and one to `crosser`. Afterwards s is x->m,
  /// and the returned dart t is m->y; twin(s) now leaves m.
  int subdivide(int s, int crosser) {
    const int y = head(s);
    const int rs = s ^ 1;
    const int m = vertex_count_++;
    first_.push_back(rs);
    dummy_.push_back(1);
    const int t = dart_count();
    const int rt = t + 1;
    tail_.push_back(m);
    tail_.push_back(y);
    next_.resize(t + 2);
    prev_.resize(t + 2);
    owner_.push_back(owner_[s >> 1]);
    origin_.push_back(s >> 1);
    // rt takes the place of rs in y's rotation
    if (next_[rs] == rs) {
      next_[rt] = prev_[rt] = rt;
    } else {
      int a = prev_[rs], b = next_[rs];
      next_[rt] = b;
      prev_[rt] = a;
      set(Field::Next, a, rt);
      set(Field::Prev, b, rt);
    }
    if (first_[y] == rs) set(Field::First, y, rt);
    set(Field::Tail, rs, m);
    set(Field::Next, rs, t);
    set(Field::Prev, rs, t);
    next_[t] = prev_[t] = rs;
    const int crossed = owner_[s >> 1];
    set(Field::Crossings, crossed, crossings_[crossed] + 1);
    set(Field::Crossings, crosser, crossings_[crosser] + 1);
    push_crosser(crossed, crosser);
    push_crosser(crosser, crossed);
    return t;
  }

  /// Adds segment p->q with n1 placed after ap at p and twin after aq at q.
  int connect(int ap, int aq, int logical) {
    const int n1 = dart_count();
    const int n2 = n1 + 1;
    tail_.push_back(tail_[ap]);
    tail_.push_back(tail_[aq]);
    next_.resize(n1 + 2);
    prev_.resize(n1 + 2);
    owner_.push_back(logical);
    origin_.push_back(-1);
    splice_after(ap, n1);
    splice_after(aq, n2);
    return n1;
  }

  /// Applies a complete realization for F-edge j after checking it against the
  /// drawing rules; on any violation the drawing is left unchanged.
  void insert(int j, const Realization& r) {
    const Mark m = mark();
    try {
      apply(j, r);
    } catch (...) {
      rollback(m);
      throw;
    }
  }

  /// Whether F-edge j may cross the segment of dart d, given the crossings the
  /// current route already made (origins and inserted logical edges).
  enum class Verdict { Ok, Self, Adjacent, Reused, Twice, Budget, Forbidden };
  Verdict can_cross(int j, int d, int base, const std::vector<int>& used_origins,
                    const std::vector<int>& used_inserted) const {
    const int l = owner(d);
    if (l == edges_ + j) return Verdict::Self;
    if (endpoints_[l].shares_endpoint(F_[j])) return Verdict::Adjacent;
    if (std::find(used_origins.begin(), used_origins.end(), root_segment(d, base)) != used_origins.end())
      return Verdict::Reused;
    if (l >= edges_ && std::find(used_inserted.begin(), used_inserted.end(), l) != used_inserted.end())
      return Verdict::Twice;
    if (crossings_[l] >= k_) return Verdict::Budget;
    return Verdict::Ok;
  }

 private:
  enum class Field : std::uint8_t { Next, Prev, Tail, First, Crossings, Crosser };
  struct Entry {
    Field field;
    int index;
    int old;
  };

  void set(Field f, int i, int value) {
    int* slot = nullptr;
    switch (f) {
      case Field::Next: slot = &next_[i]; break;
      case Field::Prev: slot = &prev_[i]; break;
      case Field::Tail: slot = &tail_[i]; break;
      case Field::First: slot = &first_[i]; break;
      case Field::Crossings: slot = &crossings_[i]; break;
      case Field::Crosser: return;
    }
    log_.push_back({f, i, *slot});
    *slot = value;
  }

  void push_crosser(int logical, int other) {
    crossers_[logical].push_back(other);
    log_.push_back({Field::Crosser, logical, 0});
  }

  void splice_after(int a, int d) {
    const int v = tail_[a];
    (void)v;
    const int b = next_[a];
    next_[d] = b;
    prev_[d] = a;
    set(Field::Next, a, d);
    set(Field::Prev, b, d);
  }

  bool corner_in_face(int corner, int face_dart) const {
    int start = next_[corner];
    int x = start;
    do {
      if (x == face_dart) return true;
      x = face_succ(x);
    } while (x != start);
    return false;
  }

  void apply(int j, const Realization& r) {
    auto bad = [&](const std::string& why) {
      fail(ErrorCode::InvalidRealization, "F-edge " + std::to_string(j) + ": " + why);
    };
    if (j < 0 || j >= f_count()) bad("index out of range");
    const auto [p, q] = F_[j];
    auto valid_dart = [&](int d) { return d >= 0 && d < dart_count(); };
    if (!valid_dart(r.start) || tail_[r.start] != p) bad("start corner is not at the first endpoint");
    if (!valid_dart(r.end) || tail_[r.end] != q) bad("end corner is not at the second endpoint");
    if (static_cast<int>(r.crossed.size()) > k_) bad("route crosses more than k edges");
    std::vector<int> origins, inserted;
    const int base = segment_count();
    int tip = r.start;
    for (int s : r.crossed) {
      if (!valid_dart(s)) bad("crossed dart out of range");
      if (!corner_in_face(tip, s)) bad("crossed segment is not on the current face");
      switch (can_cross(j, s, base, origins, inserted)) {
        case Verdict::Ok: break;
        case Verdict::Reused: bad("segment reused within the route");
        case Verdict::Budget: bad("crossing budget exceeded");
        case Verdict::Twice: bad("two inserted edges cross twice");
        default: bad("segment may not be crossed");
      }
      origins.push_back(root_segment(s, base));
      if (owner(s) >= edges_) inserted.push_back(owner(s));
      int t = subdivide(s, edges_ + j);
      connect(tip, s ^ 1, edges_ + j);
      tip = t;
    }
    // end corner: after r.end at q, must be on the face of tip
    if (!corner_in_face(tip, next_[r.end])) bad("end corner is not on the final face");
    connect(tip, r.end, edges_ + j);
  }

  std::vector<VertexPair> F_;
  int k_ = 1;
  int edges_ = 0;
  int vertex_count_ = 0;
  std::vector<int> tail_, next_, prev_;
  std::vector<int> owner_, origin_;  // per segment; origin_ is the split parent or -1
  std::vector<int> first_;
  std::vector<char> dummy_;
  std::vector<VertexPair> endpoints_;
  std::vector<int> crossings_;
  std::vector<std::vector<int>> crossers_;
  std::vector<Entry> log_;
};

}  // namespace kpip
