#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "kpip/errors.hpp"
#include "kpip/plane_graph.hpp"

namespace kpip {

using Json = nlohmann::ordered_json;

/// Exact rational number num/den with den > 0.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct Point {
  Rational x;
  Rational y;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Instance {
  PlaneGraph graph;
  std::optional<std::vector<Point>> coords;
  std::vector<VertexPair> F;
  int k = 1;
  FStructure f_structure = FStructure::None;
};

struct CrossingEvent {
  enum class Kind { GraphEdge, Inserted };
  Kind kind = Kind::GraphEdge;
  int u = -1;      // graph_edge endpoints, as written
  int v = -1;
  int index = -1;  // inserted F-edge index

  static CrossingEvent graph_edge(int u, int v) { return {Kind::GraphEdge, u, v, -1}; }
  static CrossingEvent inserted(int i) { return {Kind::Inserted, -1, -1, i}; }
  friend bool operator==(const CrossingEvent&, const CrossingEvent&) = default;
};

struct Route {
  int f_edge = 0;
  std::vector<CrossingEvent> events;
  friend bool operator==(const Route&, const Route&) = default;
};

struct Solution {
  std::vector<Route> routes;
  friend bool operator==(const Solution&, const Solution&) = default;
};

namespace detail {

[[noreturn]] inline void schema(const std::string& what) { fail(ErrorCode::SchemaError, what); }

inline const Json& field(const Json& obj, const char* name) {
  if (!obj.is_object()) schema("expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) schema(std::string("missing field \"") + name + "\"");
  return *it;
}

inline int as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) schema(std::string(what) + " must be an integer");
  auto v = j.get<std::int64_t>();
  if (v < INT32_MIN || v > INT32_MAX) schema(std::string(what) + " out of range");
  return static_cast<int>(v);
}

inline Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    schema(std::string("malformed JSON: ") + e.what());
  }
}

inline FStructure parse_structure(const std::string& s) {
  if (s == "none") return FStructure::None;
  if (s == "matching") return FStructure::Matching;
  if (s == "path") return FStructure::Path;
  schema("unknown f_structure \"" + s + "\"");
}

inline int orientation(const Point& a, const Point& b, const Point& c) {
  using boost::multiprecision::cpp_int;
  // sign of (b - a) x (c - a), scaled by the positive product of all denominators
  cpp_int bx = cpp_int(b.x.num) * a.x.den - cpp_int(a.x.num) * b.x.den, bxd = cpp_int(b.x.den) * a.x.den;
  cpp_int by = cpp_int(b.y.num) * a.y.den - cpp_int(a.y.num) * b.y.den, byd = cpp_int(b.y.den) * a.y.den;
  cpp_int cx = cpp_int(c.x.num) * a.x.den - cpp_int(a.x.num) * c.x.den, cxd = cpp_int(c.x.den) * a.x.den;
  cpp_int cy = cpp_int(c.y.num) * a.y.den - cpp_int(a.y.num) * c.y.den, cyd = cpp_int(c.y.den) * a.y.den;
  cpp_int lhs = bx * cy * byd * cxd;
  cpp_int rhs = by * cx * bxd * cyd;
  return lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
}

inline bool less_xy(const Point& a, const Point& b) {
  using I = __int128;
  I ax = I(a.x.num) * b.x.den, bx = I(b.x.num) * a.x.den;
  if (ax != bx) return ax < bx;
  return I(a.y.num) * b.y.den < I(b.y.num) * a.y.den;
}

inline bool on_segment(const Point& a, const Point& b, const Point& p) {
  // p collinear with a,b; inside the closed box?
  auto between = [](const Point& lo, const Point& hi, const Point& q) { return !less_xy(q, lo) && !less_xy(hi, q); };
  return less_xy(a, b) ? between(a, b, p) : between(b, a, p);
}

/// Segments ab and cd meet anywhere other than at a shared endpoint.
inline bool segments_conflict(const Point& a, const Point& b, const Point& c, const Point& d, bool shared) {
  int o1 = orientation(a, b, c), o2 = orientation(a, b, d);
  int o3 = orientation(c, d, a), o4 = orientation(c, d, b);
  if (shared) {
    // only overlapping collinear segments conflict
    return o1 == 0 && o2 == 0 && o3 == 0 && o4 == 0 &&
           ((on_segment(a, b, c) && !(c == a || c == b)) || (on_segment(a, b, d) && !(d == a || d == b)) ||
            (on_segment(c, d, a) && !(a == c || a == d)) || (on_segment(c, d, b) && !(b == c || b == d)));
  }
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

// Conservative floating-point box test; exact predicates decide the rest.
inline bool boxes_touch(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double eps = 1e-9;
  auto lo = [](double p, double q) { return std::min(p, q); };
  auto hi = [](double p, double q) { return std::max(p, q); };
  double ax = a.x.value(), bx = b.x.value(), cx = c.x.value(), dx = d.x.value();
  double ay = a.y.value(), by = b.y.value(), cy = c.y.value(), dy = d.y.value();
  auto scale = [&](double p, double q) { return eps * (1 + std::abs(p) + std::abs(q)); };
  return lo(ax, bx) <= hi(cx, dx) + scale(ax, dx) && lo(cx, dx) <= hi(ax, bx) + scale(cx, bx) &&
         lo(ay, by) <= hi(cy, dy) + scale(ay, dy) && lo(cy, dy) <= hi(ay, by) + scale(cy, by);
}

inline bool points_equal(const Point& a, const Point& b) {
  using I = __int128;
  return I(a.x.num) * b.x.den == I(b.x.num) * a.x.den && I(a.y.num) * b.y.den == I(b.y.num) * a.y.den;
}

}  // namespace detail

/// Checks the F invariants against the graph and the declared structure.
inline void validate_f(const PlaneGraph& g, const std::vector<VertexPair>& F, FStructure structure) {
  std::unordered_set<std::uint64_t> seen;
  for (std::size_t i = 0; i < F.size(); ++i) {
    auto [u, v] = F[i];
    if (u < 0 || v < 0 || u >= g.vertex_count() || v >= g.vertex_count())
      detail::schema("F-edge " + std::to_string(i) + " has an out-of-range endpoint");
    if (u == v) detail::schema("F-edge " + std::to_string(i) + " is a loop");
    require(!g.adjacent(u, v), ErrorCode::FNotInComplement,
            "F-edge (" + std::to_string(u) + "," + std::to_string(v) + ") is an edge of G");
    if (!seen.insert(F[i].key()).second) detail::schema("duplicate F-edge " + std::to_string(i));
  }
  if (structure == FStructure::Matching) {
    std::unordered_set<int> ends;
    for (auto p : F)
      require(ends.insert(p.u).second && ends.insert(p.v).second, ErrorCode::StructureMismatch,
              "F is declared a matching but endpoints repeat");
  } else if (structure == FStructure::Path && !F.empty()) {
    std::map<int, std::vector<int>> adj;
    for (auto p : F) {
      adj[p.u].push_back(p.v);
      adj[p.v].push_back(p.u);
    }
    int ends = 0;
    for (auto& [v, nb] : adj) {
      require(nb.size() <= 2, ErrorCode::StructureMismatch, "F is declared a path but has a vertex of degree > 2");
      if (nb.size() == 1) ++ends;
    }
    require(ends == 2 && adj.size() == F.size() + 1, ErrorCode::StructureMismatch,
            "F is declared a path but is not a single simple path");
    // connected
    std::unordered_set<int> reached{F[0].u};
    std::vector<int> stack{F[0].u};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (reached.insert(w).second) stack.push_back(w);
    }
    require(reached.size() == adj.size(), ErrorCode::StructureMismatch, "F is declared a path but is disconnected");
  }
}

/// Straight-line edges must not cross or overlap. Candidates come from a sweep
/// over x with a tolerance no tighter than the box test's.
inline void validate_coords(const PlaneGraph& g, const std::vector<Point>& pts) {
  require(static_cast<int>(pts.size()) == g.vertex_count(), ErrorCode::SchemaError,
          "coords has " + std::to_string(pts.size()) + " entries");
  const int n = g.vertex_count();
  std::vector<double> x(n), y(n);
  double extent = 0;
  for (int v = 0; v < n; ++v) {
    x[v] = pts[v].x.value();
    y[v] = pts[v].y.value();
    extent = std::max({extent, std::abs(x[v]), std::abs(y[v])});
  }
  const double tol = 1e-9 * (1 + 2 * extent);

  std::vector<int> by_x(n);
  for (int v = 0; v < n; ++v) by_x[v] = v;
  std::sort(by_x.begin(), by_x.end(), [&](int p, int q) { return x[p] < x[q]; });
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n && x[by_x[j]] <= x[by_x[i]] + tol; ++j) {
      const int v = by_x[i], w = by_x[j];
      require(!detail::points_equal(pts[v], pts[w]), ErrorCode::CrossingCoordinates,
              "vertices " + std::to_string(std::min(v, w)) + " and " + std::to_string(std::max(v, w)) + " coincide");
    }

  const int m = g.edge_count();
  std::vector<int> edges(m);
  std::vector<double> lo(m), hi(m);
  for (int e = 0; e < m; ++e) {
    auto [a, b] = g.endpoints(e);
    edges[e] = e;
    lo[e] = std::min(x[a], x[b]);
    hi[e] = std::max(x[a], x[b]);
  }
  std::sort(edges.begin(), edges.end(), [&](int p, int q) { return lo[p] < lo[q]; });
  for (int i = 0; i < m; ++i) {
    const int e = edges[i];
    auto [a, b] = g.endpoints(e);
    for (int j = i + 1; j < m && lo[edges[j]] <= hi[e] + tol; ++j) {
      const int f = edges[j];
      auto [c, d] = g.endpoints(f);
      bool shared = a == c || a == d || b == c || b == d;
      if (!detail::boxes_touch(pts[a], pts[b], pts[c], pts[d])) continue;
      require(!detail::segments_conflict(pts[a], pts[b], pts[c], pts[d], shared), ErrorCode::CrossingCoordinates,
              "edges (" + std::to_string(a) + "," + std::to_string(b) + ") and (" + std::to_string(c) + "," +
                  std::to_string(d) + ") cross");
    }
  }
}

/// Exact coordinates for a stacked triangulation built in index order (each
/// vertex after the first four joined to exactly three earlier ones): the
/// outer triangle is fixed and every other vertex sits at the barycenter of its
/// earlier neighbours. nullopt when the graph is not of that form or the
/// powers of three in the denominators would overflow.
inline std::optional<std::vector<Point>> stacked_coordinates(const PlaneGraph& g) {
  using I = __int128;
  const int n = g.vertex_count();
  if (n < 4 || g.face_count() == 0) return std::nullopt;
  const FaceRecord outer = g.face(g.outer_face());
  if (outer.degree() != 3) return std::nullopt;
  struct Scaled {
    I x = 0, y = 0;
    int e = -1;  // value is (x, y) / 3^e
  };
  std::vector<Scaled> at(n);
  const I corner[3][2] = {{0, 0}, {2, 0}, {1, 2}};
  for (int i = 0; i < 3; ++i) {
    const int v = g.tail(outer.boundary[i]);
    if (v >= 4) return std::nullopt;
    at[v] = {corner[i][0], corner[i][1], 0};
  }
  I pow3[40];
  pow3[0] = 1;
  for (int i = 1; i < 40; ++i) pow3[i] = pow3[i - 1] * 3;
  for (int v = 0; v < n; ++v) {
    if (at[v].e >= 0) continue;
    std::vector<int> earlier;
    for (int d : g.out_darts(v))
      if (g.head(d) < v || (v < 4 && g.head(d) < 4)) earlier.push_back(g.head(d));
    if (earlier.size() != 3) return std::nullopt;
    int top = 0;
    for (int w : earlier) {
      if (at[w].e < 0) return std::nullopt;
      top = std::max(top, at[w].e);
    }
    if (top + 1 >= 38) return std::nullopt;
    Scaled s{0, 0, top + 1};
    for (int w : earlier) {
      s.x += at[w].x * pow3[top - at[w].e];
      s.y += at[w].y * pow3[top - at[w].e];
    }
    at[v] = s;
  }
  std::vector<Point> pts(n);
  for (int v = 0; v < n; ++v) {
    const I den = pow3[at[v].e];
    if (at[v].x > INT64_MAX || at[v].y > INT64_MAX || den > INT64_MAX) return std::nullopt;
    pts[v] = {{static_cast<std::int64_t>(at[v].x), static_cast<std::int64_t>(den)},
              {static_cast<std::int64_t>(at[v].y), static_cast<std::int64_t>(den)}};
  }
  return pts;
}

inline Instance make_instance(PlaneGraph g, std::vector<VertexPair> F, int k = 1,
                              FStructure structure = FStructure::None,
                              std::optional<std::vector<Point>> coords = std::nullopt) {
  require(k >= 1, ErrorCode::SchemaError, "k must be positive");
  validate_f(g, F, structure);
  if (coords) validate_coords(g, *coords);
  return Instance{std::move(g), std::move(coords), std::move(F), k, structure};
}

inline Instance parse_instance(const std::string& text) {
  using detail::as_int;
  using detail::field;
  using detail::schema;
  Json j = detail::parse_text(text);
  int k = as_int(field(j, "k"), "k");
  if (k < 1) schema("k must be positive");
  int n = as_int(field(j, "n"), "n");
  if (n < 1) schema("n must be positive");
  const Json& rot = field(j, "rotation");
  if (!rot.is_array()) schema("rotation must be an array");
  std::vector<std::vector<int>> rotation;
  for (const auto& list : rot) {
    if (!list.is_array()) schema("rotation entries must be arrays");
    auto& r = rotation.emplace_back();
    for (const auto& w : list) r.push_back(as_int(w, "neighbor"));
  }
  std::optional<std::vector<Point>> coords;
  if (j.contains("coords") && !j["coords"].is_null()) {
    const Json& cs = j["coords"];
    if (!cs.is_array()) schema("coords must be an array or null");
    coords.emplace();
    for (const auto& c : cs) {
      if (!c.is_array() || c.size() != 4) schema("each coordinate is [x_num,x_den,y_num,y_den]");
      Point p;
      for (int i = 0; i < 4; ++i)
        if (!c[i].is_number_integer()) schema("coordinates must be integers");
      p.x = {c[0].get<std::int64_t>(), c[1].get<std::int64_t>()};
      p.y = {c[2].get<std::int64_t>(), c[3].get<std::int64_t>()};
      if (p.x.den <= 0 || p.y.den <= 0) schema("coordinate denominators must be positive");
      coords->push_back(p);
    }
  }
  std::vector<VertexPair> F;
  const Json& fj = field(j, "F");
  if (!fj.is_array()) schema("F must be an array");
  for (const auto& p : fj) {
    if (!p.is_array() || p.size() != 2) schema("F entries are [u,v] pairs");
    F.push_back({as_int(p[0], "F endpoint"), as_int(p[1], "F endpoint")});
  }
  FStructure structure = FStructure::None;
  if (j.contains("f_structure")) {
    if (!j["f_structure"].is_string()) schema("f_structure must be a string");
    structure = detail::parse_structure(j["f_structure"].get<std::string>());
  }
  if (static_cast<int>(rotation.size()) != n) schema("rotation length differs from n");
  auto g = PlaneGraph::from_rotation(n, rotation);
  return make_instance(std::move(g), std::move(F), k, structure, std::move(coords));
}

inline Json instance_to_json(const Instance& inst) {
  Json j;
  j["k"] = inst.k;
  j["n"] = inst.graph.vertex_count();
  j["rotation"] = inst.graph.rotation();
  if (inst.coords) {
    Json cs = Json::array();
    for (const auto& p : *inst.coords) cs.push_back({p.x.num, p.x.den, p.y.num, p.y.den});
    j["coords"] = cs;
  } else {
    j["coords"] = nullptr;
  }
  Json f = Json::array();
  for (auto p : inst.F) f.push_back({p.u, p.v});
  j["F"] = f;
  j["f_structure"] = std::string(to_string(inst.f_structure));
  return j;
}

inline std::string write_instance(const Instance& inst) { return instance_to_json(inst).dump(); }

inline Solution parse_solution(const std::string& text) {
  using detail::as_int;
  using detail::field;
  using detail::schema;
  Json j = detail::parse_text(text);
  const Json& routes = field(j, "routes");
  if (!routes.is_array()) schema("routes must be an array");
  Solution sol;
  for (const auto& r : routes) {
    Route route;
    route.f_edge = as_int(field(r, "f_edge"), "f_edge");
    if (route.f_edge != static_cast<int>(sol.routes.size()))
      schema("route " + std::to_string(sol.routes.size()) + " names f_edge " + std::to_string(route.f_edge));
    const Json& events = field(r, "events");
    if (!events.is_array()) schema("events must be an array");
    for (const auto& ev : events) {
      const Json& kind = field(ev, "kind");
      if (!kind.is_string()) schema("event kind must be a string");
      if (kind == "graph_edge") {
        route.events.push_back(
            CrossingEvent::graph_edge(as_int(field(ev, "u"), "u"), as_int(field(ev, "v"), "v")));
      } else if (kind == "inserted") {
        int idx = as_int(field(ev, "index"), "index");
        if (idx < 0 || idx >= route.f_edge)
          schema("route " + std::to_string(route.f_edge) + " references F-edge " + std::to_string(idx) +
                 ", which is not earlier");
        route.events.push_back(CrossingEvent::inserted(idx));
      } else {
        schema("unknown event kind " + kind.dump());
      }
    }
    sol.routes.push_back(std::move(route));
  }
  return sol;
}

inline Json solution_to_json(const Solution& sol) {
  Json routes = Json::array();
  for (const auto& r : sol.routes) {
    Json events = Json::array();
    for (const auto& e : r.events) {
      Json ev;
      if (e.kind == CrossingEvent::Kind::GraphEdge) {
        ev["kind"] = "graph_edge";
        ev["u"] = e.u;
        ev["v"] = e.v;
      } else {
        ev["kind"] = "inserted";
        ev["index"] = e.index;
      }
      events.push_back(ev);
    }
    Json route;
    route["f_edge"] = r.f_edge;
    route["events"] = events;
    routes.push_back(route);
  }
  Json j;
  j["routes"] = routes;
  return j;
}

inline std::string write_solution(const Solution& sol) { return solution_to_json(sol).dump(); }

}  // namespace kpip
