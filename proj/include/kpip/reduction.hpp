#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kpip/formula.hpp"
#include "kpip/instance_io.hpp"
#include "kpip/plane_graph.hpp"

namespace kpip::reduction {

enum class Variant { Path, Matching };

struct IPoint {
  long long x = 0;
  long long y = 0;
};

/// Straight-line graph on integer coordinates; the embedding follows from the layout.
struct Subgraph {
  int vertex_count = 0;
  std::vector<VertexPair> edges;
  std::vector<IPoint> coords;

  int add_vertex(long long x, long long y) {
    coords.push_back({x, y});
    return vertex_count++;
  }
  void add_edge(int u, int v) { edges.push_back({u, v}); }
};

namespace detail {

inline int half_plane(long long dx, long long dy) { return (dy > 0 || (dy == 0 && dx > 0)) ? 0 : 1; }

/// Counterclockwise rotation of every vertex, read off the coordinates.
inline std::vector<std::vector<int>> rotation_from_layout(const Subgraph& s) {
  std::vector<std::vector<int>> rot(s.vertex_count);
  for (auto [u, v] : s.edges) {
    rot[u].push_back(v);
    rot[v].push_back(u);
  }
  for (int v = 0; v < s.vertex_count; ++v) {
    const IPoint o = s.coords[v];
    std::sort(rot[v].begin(), rot[v].end(), [&](int a, int b) {
      long long ax = s.coords[a].x - o.x, ay = s.coords[a].y - o.y;
      long long bx = s.coords[b].x - o.x, by = s.coords[b].y - o.y;
      int ha = half_plane(ax, ay), hb = half_plane(bx, by);
      if (ha != hb) return ha < hb;
      return ax * by - ay * bx > 0;
    });
  }
  return rot;
}

}  // namespace detail

inline PlaneGraph embed(const Subgraph& s) { return PlaneGraph::from_rotation(s.vertex_count, detail::rotation_from_layout(s)); }

inline std::vector<Point> rational_coords(const Subgraph& s) {
  std::vector<Point> out;
  out.reserve(s.coords.size());
  for (const auto& p : s.coords) out.push_back({{p.x, 1}, {p.y, 1}});
  return out;
}

/// (k+1)x(k+1) grid with pole u (vertex 0) joined to the left column and pole v
/// (vertex 1) joined to the right column. Grid vertex (i, j) is 2 + j*(k+1) + i.
inline Subgraph build_hplus(int k) {
  require(k >= 1, ErrorCode::InvalidArgument, "k must be at least 1");
  Subgraph s;
  const long long gap = 2 * k + 2;
  s.add_vertex(0, 0);
  s.add_vertex(2 * gap + 4LL * k, 0);
  for (int j = 0; j <= k; ++j)
    for (int i = 0; i <= k; ++i) s.add_vertex(gap + 4LL * i, 4LL * j - 2LL * k);
  auto g = [&](int i, int j) { return 2 + j * (k + 1) + i; };
  for (int j = 0; j <= k; ++j)
    for (int i = 0; i <= k; ++i) {
      if (i < k) s.add_edge(g(i, j), g(i + 1, j));
      if (j < k) s.add_edge(g(i, j), g(i, j + 1));
    }
  for (int j = 0; j <= k; ++j) {
    s.add_edge(0, g(0, j));
    s.add_edge(1, g(k, j));
  }
  return s;
}

/// (k-1)x(k-1) grid; empty for k = 1.
inline Subgraph build_hminus(int k) {
  require(k >= 1, ErrorCode::InvalidArgument, "k must be at least 1");
  Subgraph s;
  const int m = k - 1;
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) s.add_vertex(4LL * c, 4LL * r);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      if (c + 1 < m) s.add_edge(r * m + c, r * m + c + 1);
      if (r + 1 < m) s.add_edge(r * m + c, (r + 1) * m + c);
    }
  return s;
}

// ---------------------------------------------------------------------------
// atlas

enum class PartKind { Joints, HPlus, HMinus, Stub, Variable, Clause, Band, Layer };

inline std::string_view to_string(PartKind k) {
  switch (k) {
    case PartKind::Joints: return "joints";
    case PartKind::HPlus: return "hplus";
    case PartKind::HMinus: return "hminus";
    case PartKind::Stub: return "stub";
    case PartKind::Variable: return "variable";
    case PartKind::Clause: return "clause";
    case PartKind::Band: return "band";
    case PartKind::Layer: return "layer";
  }
  return "?";
}

/// Vertex range [begin, end). Leaf kinds (joints, hplus, hminus, stub) partition the vertex set;
/// the others group leaves.
struct Part {
  PartKind kind = PartKind::Joints;
  int begin = 0;
  int end = 0;
  int layer = 0;
  int owner = -1;  // variable / clause id, band's lower layer
  int size() const { return end - begin; }
  bool leaf() const {
    return kind == PartKind::Joints || kind == PartKind::HPlus || kind == PartKind::HMinus || kind == PartKind::Stub;
  }
};

enum class FRole { Connector, Blocking, Forcing, Propagation, ClauseEdge, Pass, Turn, Joint };

inline std::string_view to_string(FRole r) {
  switch (r) {
    case FRole::Connector: return "connector";
    case FRole::Blocking: return "blocking";
    case FRole::Forcing: return "forcing";
    case FRole::Propagation: return "propagation";
    case FRole::ClauseEdge: return "clause";
    case FRole::Pass: return "pass";
    case FRole::Turn: return "turn";
    case FRole::Joint: return "joint";
  }
  return "?";
}

struct FEdgeInfo {
  FRole role = FRole::Connector;
  int layer = 0;
  int owner = -1;  // variable for blocking/forcing/propagation, clause for clause edges
  int slot = -1;   // endpoint index for blocking; e1..e5 as 0..4; leg for propagation
  int column = -1;
};

struct LiteralEdge {
  int u = -1;      // endpoint on the layer nearer the variable row
  int v = -1;
  int layer = 0;   // layer of u
  int side = 1;    // v lies on layer + side
  int column = 0;
  int leg = -1;    // -1 for unused variable endpoints
};

/// One leg of a clause: the vertical column carrying a literal from its variable to the clause.
struct Leg {
  int clause = -1;
  int slot = 0;      // 0..2 in left-to-right order
  int variable = -1;
  int endpoint = 0;  // index i of u_{4i+3} inside the variable gadget
  int column = 0;
  int side = +1;     // +1 positive (above), -1 negative (below)
};

struct VariableRecord {
  int variable = -1;
  int first_column = 0;
  int a = 1;
  int part = -1;
  std::vector<int> chain;      // u_1 .. u_{4a+2}
  std::vector<int> copies;     // H+ parts, 4a+1 of them
  std::vector<int> endpoints;  // u_{4i+3}
  std::vector<int> hminus;     // H- parts above and below copies 4i+2
};

struct ClauseRecord {
  int clause = -1;
  int layer = 0;
  int part = -1;
  std::array<int, 7> w{};        // joint vertices w0..w6
  std::array<int, 5> e{-1, -1, -1, -1, -1};  // F indices of e1..e5 (absent ones -1)
  std::array<int, 3> legs{-1, -1, -1};
  std::array<int, 3> literals{-1, -1, -1};   // literal edges into w1, w3, w5
  std::vector<int> hminus;
};

struct GadgetAtlas {
  int k = 1;
  int lowest_layer = 0;
  int highest_layer = 0;
  std::vector<Part> parts;
  std::vector<LiteralEdge> literals;
  std::vector<FEdgeInfo> f_roles;  // parallel to Instance::F
  std::vector<Leg> legs;
  std::vector<VariableRecord> variables;
  std::vector<ClauseRecord> clauses;

  int count(PartKind kind) const {
    return static_cast<int>(std::count_if(parts.begin(), parts.end(), [&](const Part& p) { return p.kind == kind; }));
  }
  /// Literal edge leaving `layer` towards `side` at `column`, or -1.
  int literal_at(int layer, int side, int column) const {
    for (std::size_t i = 0; i < literals.size(); ++i)
      if (literals[i].layer == layer && literals[i].side == side && literals[i].column == column)
        return static_cast<int>(i);
    return -1;
  }
};

struct Compiled {
  Instance instance;
  GadgetAtlas atlas;
};

// ---------------------------------------------------------------------------
// layered construction

struct PlanVariable {
  int variable = -1;
  int first = 0;  // column of u_1
  int a = 1;
};

struct PlanClause {
  int clause = -1;
  int layer = 0;
  std::array<int, 3> column{};  // X1 < X2 < X3
  std::array<int, 3> legs{-1, -1, -1};
};

struct PlanHop {
  int layer = 0;
  int column = 0;
  int variable = -1;
  int leg = -1;
};

struct PlanLiteral {
  int layer = 0;  // endpoint nearer the variable row
  int side = 1;   // the other endpoint is on layer + side
  int column = 0;
  int leg = -1;
};

/// Everything the builder needs: which layers exist, where gadgets sit, and how F is assembled.
struct Plan {
  int k = 1;
  int width = 0;  // columns 0 .. width-1
  int lo = 0;
  int hi = 0;
  std::set<int> f_layers;
  std::vector<PlanVariable> variables;  // all on layer 0
  std::vector<PlanClause> clauses;
  std::vector<PlanHop> hops;
  std::vector<PlanLiteral> literals;
  std::vector<Leg> legs;
  bool frames = true;
  bool stubs = false;
  Variant variant = Variant::Path;
  /// When set, F is every generated edge accepted by the predicate, in layer order.
  std::function<bool(const FEdgeInfo&)> keep;
};

namespace detail {

struct Wall {
  long long x = 0;
  std::vector<int> far;    // row farthest from the attachment, by x
  std::vector<int> left;   // column with smallest x, nearest row first
  std::vector<int> right;
};

struct Seq {
  std::vector<int> v;
  std::vector<FEdgeInfo> role;  // role[i] labels (v[i], v[i+1])

  void push(int x, FEdgeInfo r) {
    if (!v.empty()) role.push_back(r);
    v.push_back(x);
  }
  void reverse() {
    std::reverse(v.begin(), v.end());
    std::reverse(role.begin(), role.end());
  }
};

class Builder {
 public:
  explicit Builder(const Plan& plan) : p_(plan), k_(plan.k) {
    require(k_ >= 1, ErrorCode::InvalidArgument, "k must be at least 1");
    gap_ = 2LL * k_ + 2;
    cw_ = 2 * gap_ + 4LL * k_;
    lh_ = 16LL * k_ + 16;
    atlas_.k = k_;
    atlas_.lowest_layer = p_.lo;
    atlas_.highest_layer = p_.hi;
    atlas_.legs = p_.legs;
  }

  Compiled run() {
    for (const auto& c : p_.clauses) clause_on_[c.layer].push_back(&c);
    for (const auto& h : p_.hops) hop_.insert({h.layer, h.column});
    for (const auto& v : p_.variables) var_at_[v.first] = &v;

    for (const auto& v : p_.variables) build_variable(v);
    for (const auto& c : p_.clauses) build_clause(c);
    for (int layer = p_.lo; layer <= p_.hi; ++layer) build_layer(layer);
    for (const auto& l : p_.literals) {
      int u = joint(l.layer, l.column), v = joint(l.layer + l.side, l.column);
      g_.add_edge(u, v);
      atlas_.literals.push_back({u, v, l.layer, l.side, l.column, l.leg});
    }
    if (p_.frames)
      for (int a = p_.lo; a < p_.hi; ++a) build_band(a);
    if (p_.stubs) build_stubs();
    assemble_f();
    finish_records();

    PlaneGraph graph = embed(g_);
    FStructure structure = FStructure::None;
    if (!p_.keep) structure = p_.variant == Variant::Path ? FStructure::Path : FStructure::Matching;
    Compiled out{make_instance(std::move(graph), std::move(f_), k_, structure, rational_coords(g_)), std::move(atlas_)};
    return out;
  }

 private:
  long long X(int col) const { return col * cw_; }
  long long Y(int layer) const { return layer * lh_; }
  static int away(int layer) { return layer < 0 ? -1 : 1; }

  int open(PartKind kind, int layer, int owner) {
    atlas_.parts.push_back({kind, g_.vertex_count, g_.vertex_count, layer, owner});
    stack_.push_back(static_cast<int>(atlas_.parts.size()) - 1);
    return stack_.back();
  }
  void close() {
    atlas_.parts[stack_.back()].end = g_.vertex_count;
    stack_.pop_back();
  }

  int joint(int layer, int col) const {
    auto it = joint_.find({layer, col});
    require(it != joint_.end(), ErrorCode::LayoutInfeasible,
            "no chain vertex at layer " + std::to_string(layer) + ", column " + std::to_string(col));
    return it->second;
  }
  bool has_joint(int layer, int col) const { return joint_.count({layer, col}) > 0; }

  const PlanClause* clause_with(int layer, int col) const {
    auto it = clause_on_.find(layer);
    if (it == clause_on_.end()) return nullptr;
    for (const PlanClause* c : it->second)
      if (col >= c->column[0] - 1 && col <= c->column[2] + 1) return c;
    return nullptr;
  }

  /// Columns carrying a chain vertex: everything except the stretches bridged by clause doors.
  bool joint_column(int layer, int col) const {
    const PlanClause* c = clause_with(layer, col);
    if (!c) return true;
    return col <= c->column[0] + 1 || col == c->column[1] || col >= c->column[2] - 1;
  }

  void make_joint(int layer, int col) {
    if (has_joint(layer, col)) return;
    joint_[{layer, col}] = g_.add_vertex(X(col), Y(layer));
  }

  // horizontal H+ copy between columns col and col+1
  int hcopy(int layer, int col) {
    const int A = joint(layer, col), B = joint(layer, col + 1);
    int part = open(PartKind::HPlus, layer, col);
    std::vector<int> grid((k_ + 1) * (k_ + 1));
    for (int j = 0; j <= k_; ++j)
      for (int i = 0; i <= k_; ++i) grid[j * (k_ + 1) + i] = g_.add_vertex(X(col) + gap_ + 4LL * i, Y(layer) + 4LL * j - 2LL * k_);
    close();
    grid_edges(grid);
    for (int j = 0; j <= k_; ++j) {
      g_.add_edge(A, grid[j * (k_ + 1)]);
      g_.add_edge(B, grid[j * (k_ + 1) + k_]);
    }
    hgrid_[{layer, col}] = std::move(grid);
    return part;
  }

  void grid_edges(const std::vector<int>& grid) {
    for (int j = 0; j <= k_; ++j)
      for (int i = 0; i <= k_; ++i) {
        if (i < k_) g_.add_edge(grid[j * (k_ + 1) + i], grid[j * (k_ + 1) + i + 1]);
        if (j < k_) g_.add_edge(grid[j * (k_ + 1) + i], grid[(j + 1) * (k_ + 1) + i]);
      }
  }

  // vertical H+ copy joining the end columns of layers a and a+1
  void vcopy(int a, int side) {
    const int col = side == 0 ? 0 : p_.width - 1;
    const int A = joint(a, col), B = joint(a + 1, col);
    const long long dir = side == 0 ? -1 : 1;
    open(PartKind::HPlus, a, -1 - side);
    std::vector<int> grid((k_ + 1) * (k_ + 1));
    for (int i = 0; i <= k_; ++i)
      for (int j = 0; j <= k_; ++j)
        grid[i * (k_ + 1) + j] = g_.add_vertex(X(col) + dir * (4 + 4LL * j), Y(a) + lh_ / 2 - 2LL * k_ + 4LL * i);
    close();
    grid_edges(grid);
    for (int j = 0; j <= k_; ++j) {
      g_.add_edge(A, grid[j]);
      g_.add_edge(B, grid[k_ * (k_ + 1) + j]);
    }
    std::vector<int> inner;
    for (int i = 0; i <= k_; ++i) inner.push_back(grid[i * (k_ + 1)]);
    frame_inner_[{a, side}] = std::move(inner);
  }

  // H- hanging from the side s of the copy at (layer, col)
  Wall hminus_on_copy(int layer, int col, int s, int owner) {
    const auto& grid = hgrid_.at({layer, col});
    const int jrow = s > 0 ? k_ : 0;
    const int m = k_ - 1;
    open(PartKind::HMinus, layer, owner);
    std::vector<int> h(m * m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c)
        h[r * m + c] = g_.add_vertex(X(col) + gap_ + 4LL * (c + 1), Y(layer) + s * (2LL * k_ + 4 + 4LL * r));
    close();
    hminus_edges(h);
    for (int c = 0; c < m; ++c) g_.add_edge(grid[jrow * (k_ + 1) + c + 1], h[c]);
    if (k_ == 2) g_.add_edge(h[0], grid[jrow * (k_ + 1)]);
    return wall_of(h, X(col) + gap_);
  }

  // H- hanging from joint w, fanned to it and braced to `brace` from its first or last column
  Wall hminus_on_joint(int w, int layer, int col, int s, int brace, bool brace_from_last, int owner) {
    const int m = k_ - 1;
    open(PartKind::HMinus, layer, owner);
    std::vector<int> h(m * m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c)
        h[r * m + c] = g_.add_vertex(X(col) + 2LL * c - (k_ - 2), Y(layer) + s * (2LL * k_ + 4 + 4LL * r));
    close();
    hminus_edges(h);
    for (int c = 0; c < m; ++c) g_.add_edge(w, h[c]);
    g_.add_edge(h[brace_from_last ? m - 1 : 0], brace);
    return wall_of(h, X(col));
  }

  void hminus_edges(const std::vector<int>& h) {
    const int m = k_ - 1;
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        if (c + 1 < m) g_.add_edge(h[r * m + c], h[r * m + c + 1]);
        if (r + 1 < m) g_.add_edge(h[r * m + c], h[(r + 1) * m + c]);
      }
  }

  Wall wall_of(const std::vector<int>& h, long long x) const {
    const int m = k_ - 1;
    Wall w;
    w.x = x;
    for (int c = 0; c < m; ++c) w.far.push_back(h[(m - 1) * m + c]);
    for (int r = 0; r < m; ++r) {
      w.left.push_back(h[r * m]);
      w.right.push_back(h[r * m + m - 1]);
    }
    return w;
  }

  static int band_of(int layer, int s) { return s > 0 ? layer : layer - 1; }

  void build_variable(const PlanVariable& v) {
    VariableRecord rec;
    rec.variable = v.variable;
    rec.first_column = v.first;
    rec.a = v.a;
    rec.part = open(PartKind::Variable, 0, v.variable);
    open(PartKind::Joints, 0, v.variable);
    for (int j = 0; j < 4 * v.a + 2; ++j) {
      make_joint(0, v.first + j);
      rec.chain.push_back(joint(0, v.first + j));
    }
    close();
    for (int j = 0; j < 4 * v.a + 1; ++j) rec.copies.push_back(hcopy(0, v.first + j));
    for (int i = 0; i < v.a; ++i) rec.endpoints.push_back(rec.chain[4 * i + 2]);
    if (k_ >= 2)
      for (int i = 0; i < v.a; ++i)
        for (int s : {+1, -1}) {
          Wall w = hminus_on_copy(0, v.first + 4 * i + 1, s, v.variable);
          rec.hminus.push_back(static_cast<int>(atlas_.parts.size()) - 1);
          walls_[band_of(0, s)].push_back(std::move(w));
        }
    close();
    atlas_.variables.push_back(std::move(rec));
  }

  void build_clause(const PlanClause& c) {
    ClauseRecord rec;
    rec.clause = c.clause;
    rec.layer = c.layer;
    rec.legs = c.legs;
    const int s = away(c.layer);
    const std::array<int, 7> col{c.column[0] - 1, c.column[0], c.column[0] + 1, c.column[1],
                                 c.column[2] - 1, c.column[2], c.column[2] + 1};
    require(col[2] < col[3] && col[3] < col[4] && col[0] >= 0 && col[6] < p_.width, ErrorCode::LayoutInfeasible,
            "clause " + std::to_string(c.clause) + " legs are too close together");
    rec.part = open(PartKind::Clause, c.layer, c.clause);
    open(PartKind::Joints, c.layer, c.clause);
    for (int i = 0; i < 7; ++i) {
      make_joint(c.layer, col[i]);
      rec.w[i] = joint(c.layer, col[i]);
    }
    close();
    for (int i : {0, 1, 4, 5}) hcopy(c.layer, col[i]);
    g_.add_edge(rec.w[2], rec.w[3]);
    g_.add_edge(rec.w[3], rec.w[4]);
    if (k_ >= 2) {
      auto corner = [&](int copy_col, int i, int side) {
        return hgrid_.at({c.layer, copy_col})[(side > 0 ? k_ : 0) * (k_ + 1) + i];
      };
      for (int side : {s, -s}) {
        Wall w0 = hminus_on_joint(rec.w[0], c.layer, col[0], side, corner(col[0], 0, side), true, c.clause);
        rec.hminus.push_back(static_cast<int>(atlas_.parts.size()) - 1);
        std::optional<Wall> w3;
        if (side == s) {
          w3 = hminus_on_joint(rec.w[3], c.layer, col[3], side, rec.w[2], false, c.clause);
          rec.hminus.push_back(static_cast<int>(atlas_.parts.size()) - 1);
        }
        Wall w6 = hminus_on_joint(rec.w[6], c.layer, col[6], side, corner(col[5], k_, side), false, c.clause);
        rec.hminus.push_back(static_cast<int>(atlas_.parts.size()) - 1);
        if (side == s) {
          int band = band_of(c.layer, s);
          walls_[band].push_back(std::move(w0));
          walls_[band].push_back(std::move(*w3));
          walls_[band].push_back(std::move(w6));
        } else {
          underside_[c.clause] = {std::move(w0), std::move(w6)};
        }
      }
    }
    close();
    atlas_.clauses.push_back(rec);
  }

  void build_layer(int layer) {
    open(PartKind::Layer, layer, -1);
    open(PartKind::Joints, layer, -1);
    for (int col = 0; col < p_.width; ++col)
      if (joint_column(layer, col)) make_joint(layer, col);
    close();
    for (int col = 0; col + 1 < p_.width; ++col) {
      if (hgrid_.count({layer, col})) continue;
      if (!has_joint(layer, col) || !has_joint(layer, col + 1)) continue;
      const PlanClause* c = clause_with(layer, col);
      if (c && col >= c->column[0] + 1 && col < c->column[2] - 1) continue;  // doors
      hcopy(layer, col);
    }
    close();
  }

  /// Copies on the base layer that may carry a separating H- without disturbing a gadget.
  bool free_copy(int base, int col) const {
    if (!hgrid_.count({base, col})) return false;
    if (base == 0)
      for (const auto& v : p_.variables)
        if (col >= v.first && col <= v.first + 4 * v.a) return false;
    if (clause_with(base, col) || clause_with(base, col + 1)) return false;
    if (hop_.count({base, col}) || hop_.count({base, col + 1})) return false;
    return true;
  }

  void build_band(int a) {
    open(PartKind::Band, a, a);
    vcopy(a, 0);
    vcopy(a, 1);
    const bool active = p_.f_layers.count(a) || p_.f_layers.count(a + 1);
    if (k_ >= 2 && active) place_walls(a);
    close();
  }

  void place_walls(int a) {
    const int base = a >= 0 ? a : a + 1;
    const int s = a >= 0 ? +1 : -1;
    auto& walls = walls_[a];
    std::vector<int> lit;
    for (const auto& l : p_.literals)
      if (std::min(l.layer, l.layer + l.side) == a) lit.push_back(l.column);
    std::sort(lit.begin(), lit.end());
    if (lit.empty() && walls.empty()) return;

    std::vector<std::pair<int, int>> gaps;  // copy ranges [first, last]
    int from = 0;
    for (int x : lit) {
      gaps.push_back({from, x - 1});
      from = x;
    }
    gaps.push_back({from, p_.width - 2});
    std::set<int> used;
    auto candidates = [&](std::pair<int, int> g) {
      std::vector<int> out;
      for (int c = g.first; c <= g.second; ++c)
        if (free_copy(base, c) && !used.count(c)) out.push_back(c);
      if (s < 0) std::reverse(out.begin(), out.end());
      return out;
    };
    auto covered = [&](std::pair<int, int> g) {
      for (const auto& w : walls)
        if (w.x > X(g.first) && w.x < X(g.second + 1)) return true;
      return false;
    };
    std::vector<int> chosen;
    for (auto g : gaps) {
      if (lit.empty() || covered(g)) continue;
      auto cand = candidates(g);
      require(!cand.empty(), ErrorCode::LayoutInfeasible, "no room for a separator between literal edges in band " + std::to_string(a));
      chosen.push_back(cand.front());
      used.insert(cand.front());
    }
    if (k_ % 2 == 0 && (walls.size() + chosen.size()) % 2 == 1) {
      bool done = false;
      for (auto it = gaps.rbegin(); it != gaps.rend() && !done; ++it) {
        auto cand = candidates(*it);
        if (!cand.empty()) {
          chosen.push_back(cand.front());
          used.insert(cand.front());
          done = true;
        }
      }
      require(done, ErrorCode::LayoutInfeasible, "no room for an extra separator in band " + std::to_string(a));
    }
    for (int c : chosen) walls.push_back(hminus_on_copy(base, c, s, -1));
    std::sort(walls.begin(), walls.end(), [](const Wall& x, const Wall& y) { return x.x < y.x; });
  }

  void build_stubs() {
    for (auto& rec : atlas_.clauses) {
      const int s = away(rec.layer);
      open(PartKind::Stub, rec.layer, rec.clause);
      std::array<int, 3> stub{};
      for (int i = 0; i < 3; ++i) {
        const IPoint p = g_.coords[rec.w[2 * i + 1]];
        stub[i] = g_.add_vertex(p.x, p.y - s * lh_ / 2);
      }
      close();
      for (int i = 0; i < 3; ++i) {
        g_.add_edge(stub[i], rec.w[2 * i + 1]);
        rec.literals[i] = static_cast<int>(atlas_.literals.size());
        const IPoint p = g_.coords[rec.w[2 * i + 1]];
        atlas_.literals.push_back({stub[i], rec.w[2 * i + 1], rec.layer - s, s, static_cast<int>(p.x / cw_), rec.legs[i]});
      }
    }
  }

  // --- F --------------------------------------------------------------------

  Seq layer_sequence(int layer) const {
    Seq q;
    FEdgeInfo pending{FRole::Connector, layer, -1, -1};
    int col = 0;
    while (col < p_.width) {
      if (layer == 0 && var_at_.count(col)) {
        const PlanVariable& v = *var_at_.at(col);
        auto u = [&](int j) { return joint(0, v.first + j - 1); };
        q.push(u(1), pending);
        for (int i = 0; i < v.a; ++i) {
          q.push(u(4 * i + 4), {FRole::Blocking, 0, v.variable, i});
          q.push(u(4 * i + 3), {FRole::Connector, 0, v.variable, i});
          q.push(u(4 * i + 6), {FRole::Forcing, 0, v.variable, i});
          if (i + 1 < v.a) q.push(u(4 * i + 5), {FRole::Connector, 0, v.variable, i});
        }
        col = v.first + 4 * v.a + 2;
        pending = {FRole::Connector, layer, -1, -1};
        continue;
      }
      if (const PlanClause* c = clause_with(layer, col); c && col == c->column[0] - 1) {
        const int w[7] = {col, col + 1, col + 2, c->column[1], c->column[2] - 1, c->column[2], c->column[2] + 1};
        q.push(joint(layer, w[0]), pending);
        const int order[5] = {2, 1, 5, 4, 6};
        for (int e = 0; e < 5; ++e) q.push(joint(layer, w[order[e]]), {FRole::ClauseEdge, layer, c->clause, e});
        col = w[6] + 1;
        pending = {FRole::Connector, layer, -1, -1};
        continue;
      }
      if (hop_.count({layer, col})) {
        pending = {FRole::Propagation, layer, -1, -1, col};
        for (const auto& h : p_.hops)
          if (h.layer == layer && h.column == col) pending = {FRole::Propagation, layer, h.variable, h.leg, col};
        ++col;
        continue;
      }
      q.push(joint(layer, col), pending);
      pending = {FRole::Connector, layer, -1, -1};
      ++col;
    }
    return q;
  }

  /// Snake through the walls of band a, starting at the base-layer corner on side `sb`.
  Seq band_sequence(int a, int sb) const {
    Seq q;
    auto it = walls_.find(a);
    if (it == walls_.end() || it->second.empty()) return q;
    std::vector<const Wall*> ws;
    for (const auto& w : it->second) ws.push_back(&w);
    if (sb == 1) std::reverse(ws.begin(), ws.end());
    const int m = static_cast<int>(ws.size());
    const bool up = a >= 0;
    auto far = [&](int w, int idx) {
      const auto& f = ws[w]->far;
      return sb == 0 ? f[idx] : f[f.size() - 1 - idx];
    };
    auto frame_row = [&](int side, int r) {
      const auto& inner = frame_inner_.at({a, side});
      return up ? inner[r] : inner[k_ - r];
    };
    for (int t = 0; t <= k_ - 2; ++t) {
      if (t > 0) {
        const int side = (t - 1) % 2 == 0 ? 1 - sb : sb;
        q.push(frame_row(side, t), {FRole::Turn, a, -1, t - 1});
      }
      for (int step = 0; step < m; ++step) {
        const int w = t % 2 == 0 ? step : m - 1 - step;
        const int idx = w % 2 == 0 ? t : k_ - 2 - t;
        q.push(far(w, idx), step == 0 ? FEdgeInfo{FRole::Turn, a, -1, t} : FEdgeInfo{FRole::Pass, a, -1, t});
      }
    }
    return q;
  }

  // standalone gadgets: k-1 F-edges between consecutive H- copies on each side
  void bare_passes() {
    auto link = [&](const Wall& x, const Wall& y, int band) {
      for (int r = 0; r < k_ - 1; ++r) emit(x.far[r], y.far[r], {FRole::Pass, band, -1, r});
    };
    for (const auto& [a, ws] : walls_)
      for (std::size_t w = 0; w + 1 < ws.size(); ++w) link(ws[w], ws[w + 1], a);
    for (const auto& [c, pair] : underside_) link(pair.first, pair.second, -1);
  }

  int far_side(int sb) const { return k_ % 2 == 1 ? sb : 1 - sb; }

  void emit(int u, int v, FEdgeInfo r) {
    f_.push_back({u, v});
    atlas_.f_roles.push_back(r);
  }

  void append(Seq& path, const Seq& q, int band) {
    if (q.v.empty()) return;
    if (!path.v.empty()) path.push(q.v.front(), {FRole::Joint, band, -1, -1});
    else path.v.push_back(q.v.front());
    for (std::size_t i = 1; i < q.v.size(); ++i) path.push(q.v[i], q.role[i - 1]);
  }

  void assemble_f() {
    const std::vector<int> layers(p_.f_layers.begin(), p_.f_layers.end());
    if (p_.keep) {
      for (int layer : layers) {
        Seq q = layer_sequence(layer);
        for (std::size_t i = 0; i < q.role.size(); ++i)
          if (p_.keep(q.role[i])) emit(q.v[i], q.v[i + 1], q.role[i]);
      }
      if (!p_.frames) bare_passes();
      return;
    }
    if (p_.variant == Variant::Matching) {
      require(k_ != 2, ErrorCode::InvalidArgument, "the matching variant needs k = 1 or k >= 3");
      for (int layer : layers) {
        Seq q = layer_sequence(layer);
        for (std::size_t i = 0; i < q.role.size(); ++i) {
          const FEdgeInfo& r = q.role[i];
          bool take = r.role == FRole::Blocking || r.role == FRole::Forcing || r.role == FRole::Propagation ||
                      (r.role == FRole::ClauseEdge && r.slot % 2 == 0);
          if (take) emit(q.v[i], q.v[i + 1], r);
        }
      }
      for (const auto& [a, ws] : walls_)
        for (std::size_t w = 0; w + 1 < ws.size(); ++w)
          for (int r = 0; r < k_ - 1; ++r) emit(ws[w].right[r], ws[w + 1].left[r], {FRole::Pass, a, -1, r});
      return;
    }
    require(!layers.empty(), ErrorCode::InvalidArgument, "plan has no F layers");
    Seq path;
    int side = 0;
    const int bottom = layers.front() - 1;
    if (layers.front() <= 0 && k_ >= 2) {
      Seq q = band_sequence(bottom, 0);
      q.reverse();
      append(path, q, bottom);
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const int layer = layers[i];
      require(i == 0 || layers[i - 1] + 1 == layer, ErrorCode::InvalidArgument, "F layers must be consecutive");
      Seq q = layer_sequence(layer);
      if (side == 1) q.reverse();
      append(path, q, layer);
      side = 1 - side;
      if (k_ == 1) continue;
      const bool last = i + 1 == layers.size();
      if (last && layer < 0) break;
      if (layer >= 0) {
        Seq b = band_sequence(layer, side);
        if (!b.v.empty()) side = far_side(side);
        append(path, b, layer);
      } else {
        const int sb = k_ % 2 == 1 ? side : 1 - side;
        Seq b = band_sequence(layer, sb);
        if (!b.v.empty()) {
          b.reverse();
          side = sb;
        }
        append(path, b, layer);
      }
    }
    for (std::size_t i = 0; i < path.role.size(); ++i) emit(path.v[i], path.v[i + 1], path.role[i]);
  }

  void finish_records() {
    for (std::size_t i = 0; i < atlas_.f_roles.size(); ++i) {
      const FEdgeInfo& r = atlas_.f_roles[i];
      if (r.role != FRole::ClauseEdge) continue;
      for (auto& c : atlas_.clauses)
        if (c.clause == r.owner) c.e[r.slot] = static_cast<int>(i);
    }
    if (p_.stubs) return;
    for (auto& c : atlas_.clauses) {
      const int s = away(c.layer);
      for (int i = 0; i < 3; ++i) {
        const int col = static_cast<int>(g_.coords[c.w[2 * i + 1]].x / cw_);
        c.literals[i] = atlas_.literal_at(c.layer - s, s, col);
      }
    }
  }

  const Plan& p_;
  int k_;
  long long gap_ = 0, cw_ = 0, lh_ = 0;
  Subgraph g_;
  GadgetAtlas atlas_;
  std::vector<VertexPair> f_;
  std::vector<int> stack_;
  std::map<std::pair<int, int>, int> joint_;
  std::map<std::pair<int, int>, std::vector<int>> hgrid_;
  std::map<std::pair<int, int>, std::vector<int>> frame_inner_;
  std::map<int, std::vector<Wall>> walls_;  // by band (lower layer)
  std::map<int, std::pair<Wall, Wall>> underside_;  // clause H- on the literal side
  std::map<int, std::vector<const PlanClause*>> clause_on_;
  std::map<int, const PlanVariable*> var_at_;
  std::set<std::pair<int, int>> hop_;
};

}  // namespace detail

inline Compiled build(const Plan& plan) { return detail::Builder(plan).run(); }

// ---------------------------------------------------------------------------
// formulas

namespace detail {

inline Plan plan_formula(const MonotoneFormula& f, int k, Variant variant) {
  validate_formula(f);
  require(k >= 1, ErrorCode::InvalidArgument, "k must be at least 1");
  const int nv = f.variables;
  std::vector<int> rank(nv);
  for (int i = 0; i < nv; ++i) rank[f.order[i]] = i;

  Plan plan;
  plan.k = k;
  plan.variant = variant;

  // legs per clause, padded to three
  struct Pending {
    int clause, position, variable, side, layer, group;
  };
  std::vector<Pending> pending;
  for (int c = 0; c < static_cast<int>(f.clauses.size()); ++c) {
    const Clause& cl = f.clauses[c];
    std::vector<int> lits = cl.literals;
    while (lits.size() < 3) lits.push_back(lits.back());
    const int side = cl.polarity == Polarity::Positive ? 1 : -1;
    int lo = nv, hi = -1;
    for (int v : lits) {
      lo = std::min(lo, rank[v]);
      hi = std::max(hi, rank[v]);
    }
    for (int i = 0; i < 3; ++i) {
      const int r = rank[lits[i]];
      const int group = lo == hi ? 1 : r == hi ? 0 : r == lo ? 2 : 1;
      pending.push_back({c, i, lits[i], side, cl.layer, group});
    }
  }
  // order at each variable: clauses reaching left (by layer up), middle, clauses reaching right (by layer down)
  std::sort(pending.begin(), pending.end(), [](const Pending& x, const Pending& y) {
    auto key = [](const Pending& p) {
      const int layer = p.group == 2 ? -p.layer : p.layer;
      return std::array<int, 6>{p.variable, p.side, p.group, layer, p.clause, p.position};
    };
    return key(x) < key(y);
  });

  std::vector<int> pos_count(nv, 0), neg_count(nv, 0);
  std::vector<Leg> legs;
  for (const auto& p : pending) {
    int& n = p.side > 0 ? pos_count[p.variable] : neg_count[p.variable];
    legs.push_back({p.clause, p.position, p.variable, n++, 0, p.side});
  }
  std::vector<int> a(nv), first(nv);
  int col = 3;
  for (int i = 0; i < nv; ++i) {
    const int v = f.order[i];
    a[v] = std::max({1, pos_count[v], neg_count[v]});
    first[v] = col;
    col += 4 * a[v] + 2;
    plan.variables.push_back({v, first[v], a[v]});
  }
  plan.width = col + 4;
  for (auto& l : legs) l.column = first[l.variable] + 4 * l.endpoint + 2;

  // clauses: legs sorted by column give slots
  std::vector<PlanClause> clauses(f.clauses.size());
  std::vector<std::vector<int>> of_clause(f.clauses.size());
  for (int i = 0; i < static_cast<int>(legs.size()); ++i) of_clause[legs[i].clause].push_back(i);
  for (int c = 0; c < static_cast<int>(f.clauses.size()); ++c) {
    auto& ids = of_clause[c];
    std::sort(ids.begin(), ids.end(), [&](int x, int y) { return legs[x].column < legs[y].column; });
    const int side = f.clauses[c].polarity == Polarity::Positive ? 1 : -1;
    clauses[c].clause = c;
    clauses[c].layer = side * f.clauses[c].layer;
    for (int i = 0; i < 3; ++i) {
      legs[ids[i]].slot = i;
      clauses[c].column[i] = legs[ids[i]].column;
      clauses[c].legs[i] = ids[i];
    }
  }
  // rectilinear nesting
  for (std::size_t c = 0; c < clauses.size(); ++c)
    for (std::size_t d = 0; d < clauses.size(); ++d) {
      if (c == d) continue;
      const PlanClause& x = clauses[c];
      const PlanClause& y = clauses[d];
      if ((x.layer > 0) != (y.layer > 0)) continue;
      const int lx = std::abs(x.layer), ly = std::abs(y.layer);
      const auto inside = [&](int column) { return column >= x.column[0] && column <= x.column[2]; };
      if (ly > lx) {
        for (int column : y.column)
          require(!inside(column), ErrorCode::LayoutInfeasible,
                  "a leg of clause " + std::to_string(d) + " passes through clause " + std::to_string(c));
      } else if (ly == lx && c < d) {
        require(y.column[2] < x.column[0] || y.column[0] > x.column[2], ErrorCode::LayoutInfeasible,
                "clauses " + std::to_string(c) + " and " + std::to_string(d) + " overlap on layer " +
                    std::to_string(x.layer));
      }
    }
  plan.clauses = clauses;

  int top = 1, bottom = 1;
  for (const auto& c : clauses) (c.layer > 0 ? top : bottom) = std::max(c.layer > 0 ? top : bottom, std::abs(c.layer));
  plan.lo = -bottom - 1;
  plan.hi = top + 1;
  for (int j = -bottom; j <= top; ++j) plan.f_layers.insert(j);

  for (int i = 0; i < static_cast<int>(legs.size()); ++i) {
    const Leg& l = legs[i];
    const int L = f.clauses[l.clause].layer;
    for (int j = 0; j < L; ++j) plan.literals.push_back({l.side * j, l.side, l.column, i});
    for (int j = 1; j < L; ++j) plan.hops.push_back({l.side * j, l.column, l.variable, i});
  }
  for (int v = 0; v < nv; ++v)
    for (int side : {1, -1}) {
      const int used = side > 0 ? pos_count[v] : neg_count[v];
      for (int i = used; i < a[v]; ++i) {
        const int column = first[v] + 4 * i + 2;
        plan.literals.push_back({0, side, column, -1});
        plan.hops.push_back({side, column, v, -1});
      }
    }
  plan.legs = std::move(legs);
  return plan;
}

}  // namespace detail

/// Instance of kPIP that is feasible exactly when the formula is satisfiable.
inline Compiled compile(const MonotoneFormula& f, int k, Variant variant) {
  return build(detail::plan_formula(f, k, variant));
}

// ---------------------------------------------------------------------------
// standalone gadgets

/// Chain of 4a+1 H+ copies with the variable's F-edges (and H- copies for k >= 2).
inline Compiled build_variable_gadget(int a, int k) {
  require(a >= 1, ErrorCode::InvalidArgument, "a must be at least 1");
  Plan p;
  p.k = k;
  p.width = 4 * a + 2;
  p.frames = false;
  p.f_layers = {0};
  p.variables = {{0, 0, a}};
  p.keep = [](const FEdgeInfo& r) { return r.owner >= 0; };
  return build(p);
}

/// Clause gadget with literal stubs hanging from its three endpoints.
inline Compiled build_clause_gadget(int k) {
  Plan p;
  p.k = k;
  p.width = 7;
  p.frames = false;
  p.stubs = true;
  p.f_layers = {0};
  p.clauses = {{0, 0, {1, 3, 5}, {-1, -1, -1}}};
  p.keep = [](const FEdgeInfo& r) { return r.role == FRole::ClauseEdge; };
  return build(p);
}

/// Variable gadget between two F-free layers; F is the gadget's own path.
inline Compiled variable_fixture(int a, int k = 1) {
  Plan p;
  p.k = k;
  p.width = 4 * a + 4;
  p.lo = -1;
  p.hi = 1;
  p.f_layers = {0};
  p.variables = {{0, 1, a}};
  for (int i = 0; i < a; ++i)
    for (int side : {1, -1}) p.literals.push_back({0, side, 1 + 4 * i + 2, -1});
  p.keep = [](const FEdgeInfo& r) { return r.owner == 0 && r.role != FRole::Propagation; };
  return build(p);
}

/// Clause gadget on layer 1 whose literal edges come up from an F-free layer 0.
inline Compiled clause_fixture(int k = 1) {
  Plan p;
  p.k = k;
  p.width = 9;
  p.lo = 0;
  p.hi = 2;
  p.f_layers = {1};
  p.clauses = {{0, 1, {2, 4, 6}, {-1, -1, -1}}};
  for (int x : {2, 4, 6}) p.literals.push_back({0, 1, x, -1});
  p.keep = [](const FEdgeInfo& r) { return r.role == FRole::ClauseEdge; };
  return build(p);
}

/// Two stacked propagation hops on one column; F[0] is the lower hop.
inline Compiled propagation_fixture(int k = 1) {
  Plan p;
  p.k = k;
  p.width = 5;
  p.lo = -1;
  p.hi = 2;
  p.f_layers = {0, 1};
  p.hops = {{0, 2, -1, -1}, {1, 2, -1, -1}};
  p.literals = {{0, 1, 2, -1}, {1, 1, 2, -1}};
  p.keep = [](const FEdgeInfo& r) { return r.role == FRole::Propagation; };
  return build(p);
}

// ---------------------------------------------------------------------------
// certificates

/// Routes realizing the drawing that encodes `assignment`.
inline Solution build_certificate(const MonotoneFormula& f, const std::vector<bool>& assignment,
                                  const Instance& inst, const GadgetAtlas& atlas) {
  validate_formula(f);
  if (static_cast<int>(assignment.size()) != f.variables || !satisfies(f, assignment))
    fail(ErrorCode::AssignmentDoesNotSatisfy, "assignment does not satisfy the formula");
  require(inst.k == 1, ErrorCode::InvalidArgument, "certificates are built for k = 1");
  require(atlas.f_roles.size() == inst.F.size(), ErrorCode::InvalidArgument, "atlas does not match the instance");

  const int nf = static_cast<int>(inst.F.size());
  Solution sol;
  sol.routes.resize(nf);
  for (int i = 0; i < nf; ++i) sol.routes[i].f_edge = i;
  auto cross_literal = [&](int i, int lit) {
    const LiteralEdge& l = atlas.literals.at(lit);
    sol.routes[i].events.push_back(CrossingEvent::graph_edge(l.u, l.v));
  };
  // a literal is crossed from the variable side exactly when it is false
  auto truth = [&](int variable, int side) { return side > 0 ? bool(assignment[variable]) : !assignment[variable]; };

  for (int i = 0; i < nf; ++i) {
    const FEdgeInfo& r = atlas.f_roles[i];
    if (r.role == FRole::Blocking) {
      const VariableRecord* var = nullptr;
      for (const auto& v : atlas.variables)
        if (v.variable == r.owner) var = &v;
      const int column = var->first_column + 4 * r.slot + 2;
      cross_literal(i, atlas.literal_at(0, assignment[r.owner] ? -1 : 1, column));
    } else if (r.role == FRole::Propagation) {
      const int s = r.layer < 0 ? -1 : 1;
      const int below = atlas.literal_at(r.layer - s, s, r.column);
      const int above = atlas.literal_at(r.layer, s, r.column);
      if (!truth(r.owner, s)) {
        if (above >= 0) cross_literal(i, above);
      } else {
        cross_literal(i, below);
      }
    }
  }
  for (const ClauseRecord& c : atlas.clauses) {
    int pick = -1;
    for (int slot = 0; slot < 3; ++slot) {
      const Leg& leg = atlas.legs.at(c.legs[slot]);
      if (!truth(leg.variable, leg.side)) continue;
      if (pick < 0 || leg.variable < atlas.legs[c.legs[pick]].variable) pick = slot;
    }
    require(pick >= 0, ErrorCode::AssignmentDoesNotSatisfy, "clause " + std::to_string(c.clause) + " has no true literal");
    const auto& e = c.e;
    switch (pick) {
      case 0: {
        cross_literal(e[0], c.literals[0]);
        const int later = std::max(e[2], e[4]), earlier = std::min(e[2], e[4]);
        sol.routes[later].events.push_back(CrossingEvent::inserted(earlier));
        break;
      }
      case 1:
        cross_literal(e[2], c.literals[1]);
        break;
      default:
        sol.routes[e[2]].events.push_back(CrossingEvent::graph_edge(c.w[2], c.w[3]));
        cross_literal(e[4], c.literals[2]);
        break;
    }
  }
  return sol;
}

}  // namespace kpip::reduction
