#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kpip/instance_io.hpp"
#include "kpip/verifier.hpp"

namespace kpip {

struct SvgOptions {
  double size = 800;   // width and height of the canvas
  double margin = 20;
};

namespace detail {

struct XY {
  double x = 0, y = 0;
};

inline XY midpoint_of(const std::vector<XY>& poly) {
  if (poly.size() % 2) return poly[poly.size() / 2];
  const XY& a = poly[poly.size() / 2 - 1];
  const XY& b = poly[poly.size() / 2];
  return {(a.x + b.x) / 2, (a.y + b.y) / 2};
}

}  // namespace detail

/// Straight-line drawing of G; each route becomes a red polyline through the
/// midpoints of the edges it crosses. Crossed G-edges are drawn in orange.
inline std::string render_svg(const Instance& inst, const std::optional<Solution>& sol = std::nullopt,
                              SvgOptions opt = {}) {
  using detail::XY;
  require(inst.coords.has_value(), ErrorCode::MissingCoordinates, "instance has no coordinates");
  if (sol) {
    VerifyResult v = verify(inst, *sol);
    require(v.accepted, ErrorCode::InvalidRoute, v.detail);
  }
  const auto& g = inst.graph;
  const int n = g.vertex_count();

  std::vector<XY> raw(n);
  for (int v = 0; v < n; ++v) raw[v] = {(*inst.coords)[v].x.value(), (*inst.coords)[v].y.value()};
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (n > 0) {
    auto [lx, hx] = std::minmax_element(raw.begin(), raw.end(), [](XY a, XY b) { return a.x < b.x; });
    auto [ly, hy] = std::minmax_element(raw.begin(), raw.end(), [](XY a, XY b) { return a.y < b.y; });
    x0 = lx->x, x1 = hx->x, y0 = ly->y, y1 = hy->y;
  }
  const double span = std::max({x1 - x0, y1 - y0, 1e-9});
  const double scale = (opt.size - 2 * opt.margin) / span;
  std::vector<XY> pt(n);
  for (int v = 0; v < n; ++v)  // y axis points down in SVG
    pt[v] = {opt.margin + (raw[v].x - x0) * scale, opt.margin + (y1 - raw[v].y) * scale};

  std::vector<char> crossed(g.edge_count(), 0);
  std::vector<std::vector<XY>> polys;
  if (sol) {
    for (const auto& r : sol->routes) {
      const auto [p, q] = inst.F[r.f_edge];
      std::vector<XY> poly{pt[p]};
      for (const auto& ev : r.events) {
        if (ev.kind == CrossingEvent::Kind::GraphEdge) {
          const int e = *g.find_edge(ev.u, ev.v);
          crossed[e] = 1;
          poly.push_back({(pt[ev.u].x + pt[ev.v].x) / 2, (pt[ev.u].y + pt[ev.v].y) / 2});
        } else {
          poly.push_back(detail::midpoint_of(polys[ev.index]));
        }
      }
      poly.push_back(pt[q]);
      polys.push_back(std::move(poly));
    }
  }

  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << opt.size << "\" height=\"" << opt.size
      << "\" viewBox=\"0 0 " << opt.size << ' ' << opt.size << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g id=\"graph\" stroke-width=\"1.5\">\n";
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = g.endpoints(e);
    out << "<line x1=\"" << pt[u].x << "\" y1=\"" << pt[u].y << "\" x2=\"" << pt[v].x << "\" y2=\"" << pt[v].y
        << "\" stroke=\"" << (crossed[e] ? "orange" : "black") << "\"/>\n";
  }
  out << "</g>\n<g id=\"routes\" fill=\"none\" stroke=\"red\" stroke-width=\"1.5\">\n";
  for (std::size_t i = 0; i < polys.size(); ++i) {
    out << "<polyline data-f-edge=\"" << i << "\" points=\"";
    for (std::size_t k = 0; k < polys[i].size(); ++k) out << (k ? " " : "") << polys[i][k].x << ',' << polys[i][k].y;
    out << "\"/>\n";
  }
  out << "</g>\n<g id=\"vertices\" fill=\"black\">\n";
  for (int v = 0; v < n; ++v) out << "<circle cx=\"" << pt[v].x << "\" cy=\"" << pt[v].y << "\" r=\"3\"/>\n";
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace kpip
