#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kpip/instance_io.hpp"
#include "kpip/planarization.hpp"
#include "kpip/route_search.hpp"

namespace kpip {

enum class RejectReason { None, NoRealization, CrossingBudgetExceeded, RouteReferencesLaterEdge };

inline std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::None: return "None";
    case RejectReason::NoRealization: return "NoRealization";
    case RejectReason::CrossingBudgetExceeded: return "CrossingBudgetExceeded";
    case RejectReason::RouteReferencesLaterEdge: return "RouteReferencesLaterEdge";
  }
  return "None";
}

struct VerifyResult {
  bool accepted = false;
  RejectReason reason = RejectReason::None;
  int f_edge = -1;                // offending route
  int edge = -1;                  // logical edge over budget (E + i for F-edge i)
  std::vector<int> crossings;     // per logical edge, on acceptance
  std::string detail;

  explicit operator bool() const { return accepted; }
};

struct VerifyOptions {
  std::optional<std::uint64_t> seed;  // permutes the realization search
};

/// Replays the routes in F order by planarization. Segment choices and face
/// walks are searched jointly over all routes, so the verdict does not depend
/// on which realization of an earlier route is tried first.
inline VerifyResult verify(const Instance& inst, const Solution& sol, VerifyOptions opt = {}) {
  require(sol.routes.size() == inst.F.size(), ErrorCode::SchemaError,
          "solution has " + std::to_string(sol.routes.size()) + " routes for " + std::to_string(inst.F.size()) +
              " F-edges");
  const int E = inst.graph.edge_count();
  VerifyResult res;
  auto reject = [&](RejectReason r, int j, int edge, std::string detail) {
    res.reason = r;
    res.f_edge = j;
    res.edge = edge;
    res.detail = std::move(detail);
    return res;
  };
  for (int j = 0; j < static_cast<int>(sol.routes.size()); ++j) {
    const auto& r = sol.routes[j];
    require(r.f_edge == j, ErrorCode::SchemaError, "route " + std::to_string(j) + " is out of order");
    for (const auto& ev : r.events)
      if (ev.kind == CrossingEvent::Kind::Inserted && (ev.index >= j || ev.index < 0))
        return reject(RejectReason::RouteReferencesLaterEdge, j, -1,
                      "route " + std::to_string(j) + " crosses F-edge " + std::to_string(ev.index));
  }
  for (int j = 0; j < static_cast<int>(sol.routes.size()); ++j) {
    const auto& r = sol.routes[j];
    if (static_cast<int>(r.events.size()) > inst.k)
      return reject(RejectReason::CrossingBudgetExceeded, j, E + j,
                    "route " + std::to_string(j) + " has " + std::to_string(r.events.size()) + " crossings");
    for (const auto& ev : r.events)
      if (ev.kind == CrossingEvent::Kind::GraphEdge && !inst.graph.find_edge(ev.u, ev.v))
        return reject(RejectReason::NoRealization, j, -1,
                      "(" + std::to_string(ev.u) + "," + std::to_string(ev.v) + ") is not an edge of G");
  }

  RouteSearch::Config cfg;
  cfg.seed = opt.seed;
  RouteSearch search(inst, cfg);
  for (int j = 0; j < static_cast<int>(sol.routes.size()); ++j) search.pin(j, sol.routes[j].events);
  bool ok = search.run();
  if (ok) {
    res.accepted = true;
    // recompute counts from the certificate itself
    res.crossings.assign(E + inst.F.size(), 0);
    for (int j = 0; j < static_cast<int>(sol.routes.size()); ++j) {
      for (const auto& ev : sol.routes[j].events) {
        int l = ev.kind == CrossingEvent::Kind::Inserted ? E + ev.index : *inst.graph.find_edge(ev.u, ev.v);
        ++res.crossings[l];
        ++res.crossings[E + j];
      }
    }
    return res;
  }
  int j = std::max(search.deepest_failure(), 0);
  int blocked = search.budget_blocked(j);
  if (blocked >= 0)
    return reject(RejectReason::CrossingBudgetExceeded, j, blocked,
                  "route " + std::to_string(j) + " needs a crossing on an edge already crossed k times");
  return reject(RejectReason::NoRealization, j, -1, "route " + std::to_string(j) + " has no realization");
}

}  // namespace kpip
