#include <cstdio>
#include <functional>
#include <string>

#include "checks.hpp"
#include "fixtures.hpp"
#include "kpip/bench.hpp"
#include "kpip/formula.hpp"
#include "kpip/twosat.hpp"

using namespace kpip;
using namespace kpip::reduction;
using oracle::Status;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome oracle_equivalence() {
  int disagree = 0, rejected = 0, feasible = 0;
  const int total = 500;
  for (std::uint64_t seed = 1; seed <= total; ++seed) {
    Instance inst = fixtures::random_tri_instance(seed, 6, 14, 6);
    auto fast = tri::solve(inst);
    auto exact = oracle::exact_solve_triangulation(inst);
    disagree += fast.feasible != (exact.status == Status::Feasible);
    if (fast.feasible) {
      ++feasible;
      rejected += !verify(inst, fast.solution).accepted;
    }
    if (exact.status == Status::Feasible) rejected += !verify(inst, exact.solution).accepted;
  }
  return {disagree == 0 && rejected == 0,
          fmt("%d instances, %d feasible, %d disagreements, %d rejected solutions", total, feasible, disagree, rejected)};
}

Outcome linear_scaling() {
  auto s = bench::solve_scaling({100000, 1000000});
  const double ratio = s[1].millis / s[0].millis;
  return {ratio <= 13.0, fmt("median %.2f ms at 1e5, %.2f ms at 1e6, ratio %.2f (limit 13)", s[0].millis, s[1].millis, ratio)};
}

Outcome catalog_bounds() {
  int bad = 0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) bad += checks::catalog_violations(fixtures::random_tri_instance(seed, 6, 14, 6));
  return {bad == 0, fmt("500 catalogs, %d violations", bad)};
}

Outcome twosat_vs_brute_force() {
  Rng rng(2024);
  int disagree = 0, bad_models = 0, sat = 0;
  const int total = 1500;
  for (int i = 0; i < total; ++i) {
    const int n = 1 + static_cast<int>(rng.below(12));
    twosat::Formula f(n);
    const int m = static_cast<int>(rng.below(3 * n + 1));
    for (int c = 0; c < m; ++c) {
      auto lit = [&] { return twosat::Literal{static_cast<int>(rng.below(n)), rng.below(2) == 0}; };
      f.add(lit(), lit());
    }
    bool brute = false;
    std::vector<bool> a(n);
    for (std::uint32_t mask = 0; mask < (1u << n) && !brute; ++mask) {
      for (int v = 0; v < n; ++v) a[v] = (mask >> v) & 1;
      brute = twosat::satisfies(f, a);
    }
    auto model = twosat::solve(f);
    disagree += model.has_value() != brute;
    if (model) {
      ++sat;
      bad_models += !twosat::satisfies(f, *model);
    }
  }
  return {disagree == 0 && bad_models == 0,
          fmt("%d formulas, %d satisfiable, %d disagreements, %d bad models", total, sat, disagree, bad_models)};
}

Outcome gadget_lemmas() {
  std::string detail;
  bool ok = true;
  auto note = [&](bool good, const std::string& s) {
    ok &= good;
    detail += (detail.empty() ? "" : "; ") + s;
  };

  bool variable_ok = true;
  for (int a : {1, 2}) {
    Compiled c = variable_fixture(a);
    std::set<int> up, down;
    for (std::size_t l = 0; l < c.atlas.literals.size(); ++l)
      (c.atlas.literals[l].side > 0 ? up : down).insert(static_cast<int>(l));
    auto e = checks::enumerate(c);
    bool saw_up = false, saw_down = false, mixed = false;
    for (const auto& s : e.crossed) {
      saw_up |= s == up;
      saw_down |= s == down;
      mixed |= s != up && s != down;
    }
    variable_ok &= e.complete() && e.rejected == 0 && saw_up && saw_down && !mixed;
  }
  note(variable_ok, std::string("variable ") + (variable_ok ? "consistent" : "INCONSISTENT"));

  {
    Compiled c = clause_fixture();
    auto e = checks::enumerate(c);
    std::set<std::set<int>> patterns;
    bool empty = false;
    for (const auto& s : e.crossed) {
      empty |= s.empty();
      patterns.insert(s);
    }
    std::string seen;
    for (const auto& p : patterns) {
      seen += "{";
      for (int l : p) seen += "l" + std::to_string(l + 1);
      seen += "}";
    }
    note(e.complete() && e.rejected == 0 && !empty && patterns.size() == 3,
         fmt("clause %zu states %s%s", patterns.size(), seen.c_str(), e.complete() ? "" : " (budget exceeded)"));
  }

  {
    Compiled c = propagation_fixture();
    const int lower = c.atlas.literal_at(0, 1, 2), upper = c.atlas.literal_at(1, 1, 2);
    const auto& l = c.atlas.literals[lower];
    oracle::GeneralOptions opt;
    opt.fixed = {{CrossingEvent::graph_edge(l.u, l.v)}};
    auto e = checks::enumerate(c, opt);
    bool forced = !e.crossed.empty();
    for (const auto& s : e.crossed) forced &= s.count(upper) > 0;
    note(e.complete() && e.rejected == 0 && forced, std::string("propagation ") + (forced ? "forced" : "NOT forced"));
  }
  return {ok, detail};
}

Outcome end_to_end() {
  int disagree = 0, budget = 0, certs = 0, bad_certs = 0, formulas = 0;
  for (const auto& f : fixtures::tiny_formulas()) {
    ++formulas;
    const bool sat = brute_force_satisfy(f).has_value();
    for (Variant v : {Variant::Path, Variant::Matching}) {
      Compiled c = compile(f, 1, v);
      auto r = oracle::exact_solve_general(c.instance, {.order = oracle::InsertionOrder::Dynamic});
      budget += r.status == Status::BudgetExceeded;
      disagree += r.status != Status::BudgetExceeded && (r.status == Status::Feasible) != sat;
      for (std::uint32_t m = 0; m < (1u << f.variables); ++m) {
        std::vector<bool> a(f.variables);
        for (int i = 0; i < f.variables; ++i) a[i] = (m >> i) & 1;
        if (!satisfies(f, a)) continue;
        ++certs;
        bad_certs += !verify(c.instance, build_certificate(f, a, c.instance, c.atlas)).accepted;
      }
    }
  }
  return {disagree == 0 && budget == 0 && bad_certs == 0,
          fmt("%d formulas x 2 variants, %d disagreements, %d over budget, %d/%d certificates accepted", formulas,
              disagree, budget, certs - bad_certs, certs)};
}

Outcome higher_k_structure() {
  int built = 0, bad = 0;
  std::string first;
  for (const auto& f : fixtures::tiny_formulas()) {
    for (int k : {2, 3}) {
      std::vector<Variant> variants{Variant::Path};
      if (k == 3) variants.push_back(Variant::Matching);
      for (Variant v : variants) {
        ++built;
        auto issues = checks::structure_violations(compile(f, k, v), k);
        if (!issues.empty() && first.empty()) first = issues.front();
        bad += !issues.empty();
      }
    }
  }
  return {bad == 0, fmt("%d compiled instances (path k=2,3; matching k=3), %d with violations%s%s", built, bad,
                        first.empty() ? "" : ", first: ", first.c_str())};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"oracle equivalence", oracle_equivalence},
      {"linear-time scaling", linear_scaling},
      {"catalog structural bounds", catalog_bounds},
      {"2-SAT vs brute force", twosat_vs_brute_force},
      {"gadget lemmas at k=1", gadget_lemmas},
      {"end-to-end reduction at k=1", end_to_end},
      {"k>=2 structure", higher_k_structure},
  };
  int failed = 0, i = 0;
  for (const auto& [name, check] : criteria) {
    ++i;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", i, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
