#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "kpip/errors.hpp"
#include "kpip/rng.hpp"

namespace kpip {

/// Unordered vertex pair; `normalized()` puts the smaller index first.
struct VertexPair {
  int u = 0;
  int v = 0;

  VertexPair normalized() const { return u < v ? VertexPair{u, v} : VertexPair{v, u}; }
  std::uint64_t key() const {
    auto n = normalized();
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n.u)) << 32) |
           static_cast<std::uint32_t>(n.v);
  }
  bool shares_endpoint(const VertexPair& o) const { return u == o.u || u == o.v || v == o.u || v == o.v; }
  friend bool operator==(const VertexPair&, const VertexPair&) = default;
};

struct Dart {
  int head = -1;
  int twin = -1;
  int next = -1;  // next dart counterclockwise around the tail
  int edge = -1;
};

struct FaceRecord {
  int id = -1;
  std::span<const int> boundary;  // darts in traversal order
  int degree() const { return static_cast<int>(boundary.size()); }
};

/// Immutable combinatorial embedding of a connected simple plane graph.
///
/// Darts of vertex v occupy a contiguous block in the order of v's rotation, so
/// `next` is the counterclockwise successor within that block. Faces are the
/// orbits of d -> next(twin(d)); a face lies to the right of each of its darts.
class PlaneGraph {
 public:
  PlaneGraph() = default;

  static PlaneGraph from_rotation(int vertex_count, const std::vector<std::vector<int>>& rotation,
                                  int outer_face = 0);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edge_dart_.size()); }
  int dart_count() const { return static_cast<int>(darts_.size()); }
  int face_count() const { return static_cast<int>(face_offset_.size()) - 1; }
  int outer_face() const { return outer_face_; }

  const Dart& dart(int d) const { return darts_[d]; }
  int tail(int d) const { return tail_[d]; }
  int head(int d) const { return darts_[d].head; }
  int twin(int d) const { return darts_[d].twin; }
  int next(int d) const { return darts_[d].next; }
  int prev(int d) const {
    int v = tail_[d];
    return d == offset_[v] ? offset_[v + 1] - 1 : d - 1;
  }
  int face_succ(int d) const { return next(twin(d)); }
  int face_of(int d) const { return face_of_[d]; }
  int edge_of(int d) const { return darts_[d].edge; }

  int degree(int v) const { return offset_[v + 1] - offset_[v]; }
  /// Outgoing darts of v in counterclockwise order.
  std::span<const int> out_darts(int v) const {
    return {dart_ids_.data() + offset_[v], static_cast<std::size_t>(degree(v))};
  }
  /// Neighbors of v in counterclockwise order.
  std::vector<int> neighbors(int v) const {
    std::vector<int> out;
    out.reserve(degree(v));
    for (int d : out_darts(v)) out.push_back(head(d));
    return out;
  }

  /// The dart u->v of edge e with u < v.
  int edge_dart(int e) const { return edge_dart_[e]; }
  VertexPair endpoints(int e) const {
    int d = edge_dart_[e];
    return {tail_[d], head(d)};
  }

  /// Dart u->v, if the edge exists. O(log deg(u)).
  std::optional<int> find_dart(int u, int v) const {
    if (u < 0 || v < 0 || u >= vertex_count_ || v >= vertex_count_) return std::nullopt;
    auto first = sorted_heads_.begin() + offset_[u];
    auto last = sorted_heads_.begin() + offset_[u + 1];
    auto it = std::lower_bound(first, last, v);
    if (it == last || *it != v) return std::nullopt;
    return sorted_darts_[it - sorted_heads_.begin()];
  }
  std::optional<int> find_edge(int u, int v) const {
    auto d = find_dart(u, v);
    if (!d) return std::nullopt;
    return darts_[*d].edge;
  }
  bool adjacent(int u, int v) const { return find_dart(u, v).has_value(); }

  FaceRecord face(int f) const {
    return {f, std::span<const int>(face_darts_.data() + face_offset_[f],
                                    static_cast<std::size_t>(face_offset_[f + 1] - face_offset_[f]))};
  }

  /// Per-vertex counterclockwise neighbor lists (the serialized form).
  std::vector<std::vector<int>> rotation() const {
    std::vector<std::vector<int>> rot(vertex_count_);
    for (int v = 0; v < vertex_count_; ++v) rot[v] = neighbors(v);
    return rot;
  }

 private:
  int vertex_count_ = 0;
  int outer_face_ = 0;
  std::vector<int> offset_;        // vertex -> first dart
  std::vector<int> dart_ids_;      // identity, so out_darts can hand out spans
  std::vector<int> tail_;
  std::vector<Dart> darts_;
  std::vector<int> sorted_heads_;  // per-vertex heads sorted, parallel to sorted_darts_
  std::vector<int> sorted_darts_;
  std::vector<int> edge_dart_;
  std::vector<int> face_of_;
  std::vector<int> face_offset_;
  std::vector<int> face_darts_;
};

inline PlaneGraph PlaneGraph::from_rotation(int vertex_count, const std::vector<std::vector<int>>& rotation,
                                            int outer_face) {
  require(vertex_count >= 1, ErrorCode::InvalidRotation, "graph needs at least one vertex");
  require(static_cast<int>(rotation.size()) == vertex_count, ErrorCode::InvalidRotation,
          "rotation has " + std::to_string(rotation.size()) + " lists for " + std::to_string(vertex_count) +
              " vertices");
  PlaneGraph g;
  g.vertex_count_ = vertex_count;
  g.offset_.assign(vertex_count + 1, 0);
  for (int v = 0; v < vertex_count; ++v) g.offset_[v + 1] = g.offset_[v] + static_cast<int>(rotation[v].size());
  const int darts = g.offset_[vertex_count];
  g.dart_ids_.resize(darts);
  std::iota(g.dart_ids_.begin(), g.dart_ids_.end(), 0);
  g.tail_.resize(darts);
  g.darts_.resize(darts);
  g.sorted_heads_.resize(darts);
  g.sorted_darts_.resize(darts);

  std::vector<std::pair<int, int>> scratch;
  for (int v = 0; v < vertex_count; ++v) {
    const auto& nb = rotation[v];
    const int base = g.offset_[v];
    const int deg = static_cast<int>(nb.size());
    scratch.clear();
    for (int i = 0; i < deg; ++i) {
      int w = nb[i];
      require(w >= 0 && w < vertex_count, ErrorCode::InvalidRotation,
              "vertex " + std::to_string(v) + " lists out-of-range neighbor " + std::to_string(w));
      require(w != v, ErrorCode::InvalidRotation, "loop at vertex " + std::to_string(v));
      g.tail_[base + i] = v;
      g.darts_[base + i].head = w;
      g.darts_[base + i].next = base + (i + 1) % deg;
      scratch.emplace_back(w, base + i);
    }
    std::sort(scratch.begin(), scratch.end());
    for (int i = 0; i < deg; ++i) {
      if (i > 0)
        require(scratch[i].first != scratch[i - 1].first, ErrorCode::InvalidRotation,
                "duplicate neighbor " + std::to_string(scratch[i].first) + " at vertex " + std::to_string(v));
      g.sorted_heads_[base + i] = scratch[i].first;
      g.sorted_darts_[base + i] = scratch[i].second;
    }
  }

  for (int d = 0; d < darts; ++d) {
    int u = g.tail_[d];
    int w = g.darts_[d].head;
    auto back = g.find_dart(w, u);
    require(back.has_value(), ErrorCode::AsymmetricAdjacency,
            std::to_string(u) + " lists " + std::to_string(w) + " but not vice versa");
    g.darts_[d].twin = *back;
    if (u < w) {
      g.darts_[d].edge = static_cast<int>(g.edge_dart_.size());
      g.edge_dart_.push_back(d);
    }
  }
  for (int d = 0; d < darts; ++d)
    if (g.darts_[d].edge < 0) g.darts_[d].edge = g.darts_[g.darts_[d].twin].edge;

  // connectivity
  {
    std::vector<char> seen(vertex_count, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int d = g.offset_[v]; d < g.offset_[v + 1]; ++d) {
        int w = g.darts_[d].head;
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    require(reached == vertex_count, ErrorCode::Disconnected,
            "only " + std::to_string(reached) + " of " + std::to_string(vertex_count) + " vertices reachable");
  }

  g.face_of_.assign(darts, -1);
  g.face_offset_.push_back(0);
  g.face_darts_.reserve(darts);
  for (int d = 0; d < darts; ++d) {
    if (g.face_of_[d] >= 0) continue;
    const int f = static_cast<int>(g.face_offset_.size()) - 1;
    int x = d;
    do {
      g.face_of_[x] = f;
      g.face_darts_.push_back(x);
      x = g.face_succ(x);
    } while (x != d);
    g.face_offset_.push_back(static_cast<int>(g.face_darts_.size()));
  }
  // a single vertex has one (empty) face
  if (darts == 0) g.face_offset_.push_back(0);

  const int euler = vertex_count - g.edge_count() + g.face_count();
  require(euler == 2, ErrorCode::NotPlanarEmbedding,
          "V - E + F = " + std::to_string(euler) + " (rotation is not a sphere embedding)");
  require(outer_face >= 0 && outer_face < g.face_count(), ErrorCode::InvalidArgument, "outer face out of range");
  g.outer_face_ = outer_face;
  return g;
}

// ---------------------------------------------------------------------------
// predicates

/// Maximal planar: at least four vertices and every face (outer included) a triangle.
inline bool is_triangulation(const PlaneGraph& g) {
  if (g.vertex_count() < 4) return false;
  for (int f = 0; f < g.face_count(); ++f)
    if (g.face(f).degree() != 3) return false;
  return true;
}

/// The vertex of triangular face `face` that is not an endpoint of `edge`.
inline int apex(const PlaneGraph& g, int edge, int face) {
  require(edge >= 0 && edge < g.edge_count(), ErrorCode::InvalidArgument, "edge out of range");
  require(face >= 0 && face < g.face_count(), ErrorCode::InvalidArgument, "face out of range");
  int d = g.edge_dart(edge);
  int inside = g.face_of(d) == face ? d : (g.face_of(g.twin(d)) == face ? g.twin(d) : -1);
  require(inside >= 0, ErrorCode::NotIncident,
          "edge " + std::to_string(edge) + " does not bound face " + std::to_string(face));
  require(g.face(face).degree() == 3, ErrorCode::NotTriangle, "face " + std::to_string(face) + " is not a triangle");
  return g.head(g.face_succ(inside));
}

/// The two apexes of an edge in a triangulation: first the one right of the
/// canonical dart (tail < head), then the one on its left.
inline std::pair<int, int> apexes(const PlaneGraph& g, int edge) {
  int d = g.edge_dart(edge);
  return {g.head(g.face_succ(d)), g.head(g.face_succ(g.twin(d)))};
}

/// No vertex whose removal disconnects the graph (iterative Hopcroft-Tarjan).
inline bool is_biconnected(const PlaneGraph& g) {
  const int n = g.vertex_count();
  if (n <= 2) return n == 2 || n == 1;
  std::vector<int> disc(n, -1), low(n, 0), parent(n, -1), cursor(n, 0);
  int timer = 0;
  int root_children = 0;
  std::vector<int> stack{0};
  disc[0] = low[0] = timer++;
  while (!stack.empty()) {
    int v = stack.back();
    auto out = g.out_darts(v);
    if (cursor[v] < static_cast<int>(out.size())) {
      int w = g.head(out[cursor[v]++]);
      if (disc[w] < 0) {
        parent[w] = v;
        disc[w] = low[w] = timer++;
        if (v == 0) ++root_children;
        stack.push_back(w);
      } else if (w != parent[v]) {
        low[v] = std::min(low[v], disc[w]);
      }
    } else {
      stack.pop_back();
      int p = parent[v];
      if (p >= 0) {
        low[p] = std::min(low[p], low[v]);
        if (p != 0 && low[v] >= disc[p]) return false;
      }
    }
  }
  return root_children <= 1;
}

// ---------------------------------------------------------------------------
// named graphs used throughout tests and examples

namespace named {

/// K4 drawn as triangle 0,1,2 with 3 inside; the outer face is (0,1,2).
inline PlaneGraph k4() {
  return PlaneGraph::from_rotation(4, {{1, 3, 2}, {2, 3, 0}, {0, 3, 1}, {2, 0, 1}});
}

inline PlaneGraph triangle() { return PlaneGraph::from_rotation(3, {{1, 2}, {2, 0}, {0, 1}}); }

/// Octahedron with poles 0 (inside) and 5 (outside) and equator 1,2,3,4
/// (counterclockwise). Antipodal pairs: (0,5), (1,3), (2,4).
inline PlaneGraph octahedron() {
  return PlaneGraph::from_rotation(6, {{1, 2, 3, 4},
                                       {2, 0, 4, 5},
                                       {3, 0, 1, 5},
                                       {4, 0, 2, 5},
                                       {1, 0, 3, 5},
                                       {1, 4, 3, 2}});
}

/// Triangular bipyramid (K5 minus edge (0,4)): poles 0 (inside) and 4 (outside),
/// middle triangle 1,2,3.
inline PlaneGraph bipyramid() {
  return PlaneGraph::from_rotation(5, {{1, 2, 3}, {2, 0, 3, 4}, {3, 0, 1, 4}, {1, 0, 2, 4}, {1, 3, 2}});
}

/// Cube graph Q3: outer square 0,1,2,3 and inner square 4,5,6,7.
inline PlaneGraph cube() {
  return PlaneGraph::from_rotation(8, {{1, 4, 3},
                                       {2, 5, 0},
                                       {3, 6, 1},
                                       {0, 7, 2},
                                       {0, 5, 7},
                                       {1, 6, 4},
                                       {2, 7, 5},
                                       {3, 4, 6}});
}

}  // namespace named

// ---------------------------------------------------------------------------
// generators

/// Random stacked (Apollonian) triangulation: K4 from `named::k4()`, then
/// repeatedly a uniformly chosen inner face gets a new degree-3 vertex.
inline PlaneGraph generate_stacked_triangulation(int n, std::uint64_t seed) {
  require(n >= 4, ErrorCode::InvalidArgument, "stacked triangulation needs n >= 4");
  // Mutable rotation as doubly linked dart lists; darts 2i/2i+1 are twins.
  std::vector<int> tail, nxt, prv;
  auto add_pair = [&](int u, int v) {
    int d = static_cast<int>(tail.size());
    tail.push_back(u);
    tail.push_back(v);
    nxt.resize(d + 2, -1);
    prv.resize(d + 2, -1);
    return d;
  };
  auto head = [&](int d) { return tail[d ^ 1]; };
  auto insert_after = [&](int anchor, int d) {
    int after = nxt[anchor];
    nxt[anchor] = d;
    prv[d] = anchor;
    nxt[d] = after;
    prv[after] = d;
  };
  auto succ = [&](int d) { return nxt[d ^ 1]; };

  std::vector<int> first_out(n, -1);
  const auto base = named::k4();
  std::vector<std::vector<int>> dart_at(4, std::vector<int>(4, -1));
  for (int e = 0; e < base.edge_count(); ++e) {
    auto [u, v] = base.endpoints(e);
    int d = add_pair(u, v);
    dart_at[u][v] = d;
    dart_at[v][u] = d + 1;
  }
  for (int v = 0; v < 4; ++v) {
    auto nb = base.neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      int d = dart_at[v][nb[i]];
      int dn = dart_at[v][nb[(i + 1) % nb.size()]];
      nxt[d] = dn;
      prv[dn] = d;
    }
    first_out[v] = dart_at[v][nb[0]];
  }

  // Inner faces, each represented by one of its darts. The outer face of K4 is (0,1,2).
  std::vector<int> inner;
  {
    std::vector<char> seen(tail.size(), 0);
    for (int d = 0; d < static_cast<int>(tail.size()); ++d) {
      if (seen[d]) continue;
      bool outer = true;
      for (int x = d, i = 0; i < 3; ++i, x = succ(x)) {
        seen[x] = 1;
        if (tail[x] == 3) outer = false;
      }
      if (!outer) inner.push_back(d);
    }
  }

  Rng rng(seed);
  for (int x = 4; x < n; ++x) {
    std::size_t pick = rng.below(inner.size());
    int d0 = inner[pick];
    int d1 = succ(d0);
    int d2 = succ(d1);
    const int face[3] = {d0, d1, d2};
    int spokes[3];
    for (int i = 0; i < 3; ++i) {
      int d = face[i];
      int prev_face = face[(i + 2) % 3];
      int s = add_pair(tail[d], x);
      // corner at tail(d) lies between twin(prev_face) and d
      insert_after(prev_face ^ 1, s);
      spokes[i] = s;
    }
    // around x: next(x->head(d_i)) = x->tail(d_i)
    int out0 = spokes[0] ^ 1, out1 = spokes[1] ^ 1, out2 = spokes[2] ^ 1;
    nxt[out1] = out0; prv[out0] = out1;
    nxt[out2] = out1; prv[out1] = out2;
    nxt[out0] = out2; prv[out2] = out0;
    first_out[x] = out0;
    inner[pick] = d0;            // (a,b,x)
    inner.push_back(d1);         // (b,c,x)
    inner.push_back(d2);         // (c,a,x)
  }

  std::vector<std::vector<int>> rotation(n);
  for (int v = 0; v < n; ++v) {
    int d = first_out[v];
    do {
      rotation[v].push_back(head(d));
      d = nxt[d];
    } while (d != first_out[v]);
  }
  return PlaneGraph::from_rotation(n, rotation);
}

enum class FStructure { None, Matching, Path };

inline std::string_view to_string(FStructure s) {
  switch (s) {
    case FStructure::None: return "none";
    case FStructure::Matching: return "matching";
    case FStructure::Path: return "path";
  }
  return "none";
}

namespace detail {

inline std::vector<VertexPair> complement_pairs(const PlaneGraph& g) {
  std::vector<VertexPair> out;
  for (int u = 0; u < g.vertex_count(); ++u)
    for (int v = u + 1; v < g.vertex_count(); ++v)
      if (!g.adjacent(u, v)) out.push_back({u, v});
  return out;
}

}  // namespace detail

/// m distinct non-edges of g, shaped as requested. Small graphs sample from the
/// enumerated complement; large ones by rejection. Paths are grown by a
/// randomized depth-first search with a bounded number of steps.
inline std::vector<VertexPair> sample_complement_edges(const PlaneGraph& g, int m, std::uint64_t seed,
                                                       FStructure structure) {
  require(m >= 0, ErrorCode::InvalidArgument, "negative sample size");
  if (m == 0) return {};
  const int n = g.vertex_count();
  Rng rng(seed);
  auto insufficient = [&] {
    fail(ErrorCode::InsufficientComplementPairs,
         "cannot sample " + std::to_string(m) + " complement pairs (" + std::string(to_string(structure)) + ")");
  };
  const bool small = n <= 1500;

  if (structure == FStructure::Path) {
    if (m + 1 > n) insufficient();
    std::vector<int> path;
    std::vector<char> used(n, 0);
    long long budget = 200000;
    // candidates(v): non-neighbors of v not yet on the path, in random order
    auto candidates = [&](int v) {
      std::vector<int> c;
      if (small) {
        for (int w = 0; w < n; ++w)
          if (w != v && !used[w] && !g.adjacent(v, w)) c.push_back(w);
        rng.shuffle(std::span<int>(c));
      } else {
        for (int tries = 0; tries < 64 && c.size() < 8; ++tries) {
          int w = static_cast<int>(rng.below(n));
          if (w != v && !used[w] && !g.adjacent(v, w) && std::find(c.begin(), c.end(), w) == c.end()) c.push_back(w);
        }
      }
      return c;
    };
    std::vector<int> starts(n);
    std::iota(starts.begin(), starts.end(), 0);
    rng.shuffle(std::span<int>(starts));
    for (int start : starts) {
      std::vector<std::vector<int>> options;
      path = {start};
      used[start] = 1;
      options.push_back(candidates(start));
      while (!path.empty() && static_cast<int>(path.size()) < m + 1 && budget-- > 0) {
        auto& opts = options.back();
        if (opts.empty()) {
          used[path.back()] = 0;
          path.pop_back();
          options.pop_back();
          continue;
        }
        int w = opts.back();
        opts.pop_back();
        if (used[w]) continue;
        path.push_back(w);
        used[w] = 1;
        options.push_back(candidates(w));
      }
      if (static_cast<int>(path.size()) == m + 1) {
        std::vector<VertexPair> out;
        for (int i = 0; i < m; ++i) out.push_back({path[i], path[i + 1]});
        return out;
      }
      for (int v : path) used[v] = 0;
      if (budget <= 0 || !small) break;
    }
    insufficient();
  }

  std::vector<VertexPair> out;
  std::unordered_set<std::uint64_t> taken;
  std::vector<char> touched(n, 0);
  auto acceptable = [&](VertexPair p) {
    if (taken.count(p.key())) return false;
    if (structure == FStructure::Matching && (touched[p.u] || touched[p.v])) return false;
    return true;
  };
  auto take = [&](VertexPair p) {
    out.push_back(p);
    taken.insert(p.key());
    touched[p.u] = touched[p.v] = 1;
  };
  if (small) {
    auto pool = detail::complement_pairs(g);
    rng.shuffle(std::span<VertexPair>(pool));
    for (const auto& p : pool) {
      if (static_cast<int>(out.size()) == m) break;
      if (acceptable(p)) take(p);
    }
  } else {
    long long tries = 64LL * m + 1000;
    while (static_cast<int>(out.size()) < m && tries-- > 0) {
      int u = static_cast<int>(rng.below(n));
      int v = static_cast<int>(rng.below(n));
      if (u == v || g.adjacent(u, v)) continue;
      VertexPair p{std::min(u, v), std::max(u, v)};
      if (acceptable(p)) take(p);
    }
  }
  if (static_cast<int>(out.size()) < m) insufficient();
  return out;
}

/// Up to m distinct non-edges of a triangulation drawn from apex pairs of
/// random edges, so every sampled pair has at least one single-crossing
/// insertion. Used for benchmarks and randomized solver tests, where uniformly
/// random non-edges would almost always be trivially infeasible.
inline std::vector<VertexPair> sample_apex_pairs(const PlaneGraph& g, int m, std::uint64_t seed) {
  std::vector<VertexPair> out;
  std::unordered_set<std::uint64_t> taken;
  Rng rng(seed);
  long long tries = 8LL * m + 100;
  while (static_cast<int>(out.size()) < m && tries-- > 0) {
    int e = static_cast<int>(rng.below(g.edge_count()));
    auto [a, b] = apexes(g, e);
    if (a == b || g.adjacent(a, b)) continue;
    VertexPair p{a, b};
    if (rng.below(2)) std::swap(p.u, p.v);
    if (!taken.insert(p.key()).second) continue;
    out.push_back(p);
  }
  return out;
}

/// Like sample_apex_pairs, but the chosen crossing quadrilaterals (crossed
/// edge plus its four boundary edges) are pairwise edge-disjoint, so the
/// instance is feasible with k = 1.
inline std::vector<VertexPair> sample_disjoint_apex_pairs(const PlaneGraph& g, int m, std::uint64_t seed) {
  std::vector<VertexPair> out;
  std::unordered_set<std::uint64_t> taken;
  std::vector<char> used(g.edge_count(), 0);
  Rng rng(seed);
  long long tries = 8LL * m + 100;
  while (static_cast<int>(out.size()) < m && tries-- > 0) {
    const int e = static_cast<int>(rng.below(g.edge_count()));
    auto [a, b] = apexes(g, e);
    if (a == b || g.adjacent(a, b)) continue;
    const int d = g.edge_dart(e), t = g.twin(d);
    const std::array<int, 5> quad{e, g.edge_of(g.face_succ(d)), g.edge_of(g.face_succ(g.face_succ(d))),
                                  g.edge_of(g.face_succ(t)), g.edge_of(g.face_succ(g.face_succ(t)))};
    if (std::any_of(quad.begin(), quad.end(), [&](int q) { return used[q]; })) continue;
    VertexPair p{a, b};
    if (rng.below(2)) std::swap(p.u, p.v);
    if (!taken.insert(p.key()).second) continue;
    for (int q : quad) used[q] = 1;
    out.push_back(p);
  }
  return out;
}

}  // namespace kpip
