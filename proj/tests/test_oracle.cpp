#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "kpip/formula.hpp"
#include "kpip/oracle.hpp"
#include "kpip/reduction.hpp"
#include "kpip/verifier.hpp"

using namespace kpip;
using oracle::Status;

namespace {

bool feasible(const oracle::GeneralResult& r) { return r.status == Status::Feasible; }

}  // namespace

TEST(Oracle, GeneralAgreesWithTriangulation) {
  int feasible_count = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Instance inst = fixtures::random_tri_instance(seed, 6, 12, 5);
    auto tri = oracle::exact_solve_triangulation(inst);
    auto gen = oracle::exact_solve_general(inst);
    ASSERT_NE(gen.status, Status::BudgetExceeded) << "seed " << seed;
    ASSERT_EQ(tri.status, gen.status) << "seed " << seed;
    if (feasible(gen)) {
      ++feasible_count;
      EXPECT_TRUE(verify(inst, gen.solution).accepted) << "seed " << seed;
      EXPECT_TRUE(verify(inst, tri.solution).accepted) << "seed " << seed;
    }
  }
  EXPECT_GT(feasible_count, 30);
  EXPECT_LT(feasible_count, 290);
}

TEST(Oracle, DynamicOrderAgreesWithInputOrder) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Instance inst = fixtures::random_tri_instance(seed, 6, 12, 6);
    auto a = oracle::exact_solve_general(inst);
    auto b = oracle::exact_solve_general(inst, {.order = oracle::InsertionOrder::Dynamic});
    ASSERT_EQ(a.status, b.status) << "seed " << seed;
    if (feasible(b)) EXPECT_TRUE(verify(inst, b.solution).accepted) << "seed " << seed;
  }
}

TEST(Oracle, InfeasibleStableUnderSeeds) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 200 && checked < 25; ++seed) {
    Instance inst = fixtures::random_tri_instance(seed, 6, 8, 4);
    if (oracle::exact_solve_general(inst).status != Status::Infeasible) continue;
    ++checked;
    for (std::uint64_t s = 1; s <= 5; ++s)
      EXPECT_EQ(oracle::exact_solve_general(inst, {.seed = s}).status, Status::Infeasible) << seed << "/" << s;
  }
  EXPECT_GT(checked, 5);
}

TEST(Oracle, ChordThroughSharedFace) {
  auto square = PlaneGraph::from_rotation(4, {{1, 3}, {2, 0}, {3, 1}, {0, 2}});
  Instance inst = make_instance(square, {{0, 2}}, 1);
  auto r = oracle::exact_solve_general(inst);
  ASSERT_TRUE(feasible(r));
  EXPECT_TRUE(r.solution.routes[0].events.empty());
}

TEST(Oracle, KnownVerdicts) {
  EXPECT_TRUE(feasible(oracle::exact_solve_general(fixtures::octahedron_antipodal())));
  EXPECT_EQ(oracle::exact_solve_general(fixtures::apollonian7_infeasible()).status, Status::Infeasible);
  EXPECT_EQ(oracle::exact_solve_triangulation(fixtures::apollonian7_infeasible()).status, Status::Infeasible);
}

TEST(Oracle, FixedPrefixIsKept) {
  Instance inst = fixtures::octahedron_antipodal();
  Solution cert = fixtures::octahedron_certificate();
  auto r = oracle::exact_solve_general(inst, {.fixed = {cert.routes[0].events}});
  ASSERT_TRUE(feasible(r));
  EXPECT_EQ(r.solution.routes[0].events, cert.routes[0].events);
  EXPECT_TRUE(verify(inst, r.solution).accepted);

  auto d = oracle::exact_solve_general(inst, {.fixed = {cert.routes[0].events}, .order = oracle::InsertionOrder::Dynamic});
  ASSERT_TRUE(feasible(d));
  EXPECT_EQ(d.solution.routes[0].events, cert.routes[0].events);
}

TEST(Oracle, BudgetExceeded) {
  auto r = oracle::exact_solve_general(fixtures::octahedron_antipodal(), {.node_budget = 0});
  EXPECT_EQ(r.status, Status::BudgetExceeded);
}

TEST(Oracle, VisitorEnumeratesAndStops) {
  Instance inst = fixtures::octahedron_antipodal();
  int all = 0;
  auto r = oracle::exact_solve_general(inst, {.visitor = [&](const Solution& s) {
                                                EXPECT_TRUE(verify(inst, s).accepted);
                                                ++all;
                                                return true;
                                              }});
  EXPECT_EQ(r.status, Status::Infeasible);
  EXPECT_GT(all, 1);

  int seen = 0;
  r = oracle::exact_solve_general(inst, {.visitor = [&](const Solution&) { return ++seen < 1; }});
  EXPECT_EQ(seen, 1);
  EXPECT_EQ(r.status, Status::Feasible);
}

TEST(Oracle, TriangulationCrossValidation) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Instance inst = fixtures::random_tri_instance(seed, 6, 9, 3);
    auto r = oracle::exact_solve_triangulation(inst, {.cross_validate_limit = 5000});
    EXPECT_EQ(r.disagreements, 0) << "seed " << seed;
  }
}

TEST(Oracle, SingleClauseReductionIsFeasible) {
  using namespace kpip::reduction;
  MonotoneFormula f{1, {{Polarity::Positive, 2, {0, 0, 0}}}, {0}};
  auto c = compile(f, 1, Variant::Path);
  auto r = oracle::exact_solve_general(c.instance, {.order = oracle::InsertionOrder::Dynamic});
  ASSERT_EQ(r.status, Status::Feasible);
  EXPECT_TRUE(verify(c.instance, r.solution).accepted);
}
