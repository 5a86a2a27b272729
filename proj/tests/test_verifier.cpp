#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "kpip/verifier.hpp"

using namespace kpip;

namespace {

Instance with_f(PlaneGraph g, std::vector<VertexPair> F, int k = 1) { return make_instance(std::move(g), std::move(F), k); }

}  // namespace

TEST(Verifier, EmptyF) {
  auto inst = with_f(named::octahedron(), {});
  EXPECT_TRUE(verify(inst, Solution{}));
}

TEST(Verifier, OctahedronCertificate) {
  auto inst = fixtures::octahedron_antipodal();
  auto res = verify(inst, fixtures::octahedron_certificate());
  ASSERT_TRUE(res) << res.detail;
  for (int c : res.crossings) EXPECT_LE(c, 1);
}

TEST(Verifier, ClashingCertificateRejected) {
  auto inst = fixtures::octahedron_antipodal();
  // (0,5) across (1,2) forces (1,3) off (0,2)
  Solution bad{{{0, {CrossingEvent::graph_edge(1, 2)}},
                {1, {CrossingEvent::graph_edge(0, 2)}},
                {2, {CrossingEvent::graph_edge(3, 5)}}}};
  auto res = verify(inst, bad);
  EXPECT_FALSE(res);
  EXPECT_EQ(res.f_edge, 1);
}

TEST(Verifier, SameEdgeTwiceExceedsBudget) {
  auto inst = with_f(named::octahedron(), {{0, 5}});
  Solution sol{{{0, {CrossingEvent::graph_edge(1, 2), CrossingEvent::graph_edge(1, 2)}}}};
  auto res = verify(inst, sol);
  EXPECT_FALSE(res);
  EXPECT_EQ(res.reason, RejectReason::CrossingBudgetExceeded);
}

TEST(Verifier, BudgetOfCrossedEdge) {
  // two F-edges through the same G-edge with k=1
  auto inst = with_f(named::cube(), {{0, 6}, {1, 7}});
  Solution sol{{{0, {CrossingEvent::graph_edge(4, 5)}}, {1, {CrossingEvent::graph_edge(4, 5)}}}};
  auto res = verify(inst, sol);
  EXPECT_FALSE(res);
  EXPECT_EQ(res.reason, RejectReason::CrossingBudgetExceeded);
  EXPECT_EQ(res.f_edge, 1);
}

TEST(Verifier, LaterReference) {
  auto inst = with_f(named::octahedron(), {{0, 5}, {1, 3}});
  Solution sol{{{0, {CrossingEvent::inserted(1)}}, {1, {}}}};
  auto res = verify(inst, sol);
  EXPECT_EQ(res.reason, RejectReason::RouteReferencesLaterEdge);
}

TEST(Verifier, ChordAndMissingEdge) {
  auto cube = named::cube();
  auto inst = with_f(cube, {{0, 2}});  // diagonal of the outer square face
  EXPECT_TRUE(verify(inst, Solution{{{0, {}}}}));
  auto res = verify(inst, Solution{{{0, {CrossingEvent::graph_edge(0, 6)}}}});
  EXPECT_EQ(res.reason, RejectReason::NoRealization);
  // 0 and 6 share no face
  auto far = with_f(cube, {{0, 6}});
  EXPECT_EQ(verify(far, Solution{{{0, {}}}}).reason, RejectReason::NoRealization);
  EXPECT_TRUE(verify(far, Solution{{{0, {CrossingEvent::graph_edge(4, 5)}}}}));
}

TEST(Verifier, InsertedCrossingAtK2) {
  // cube, two diagonals of the same square face must cross each other
  auto inst = with_f(named::cube(), {{0, 2}, {1, 3}}, 1);
  EXPECT_TRUE(verify(inst, Solution{{{0, {}}, {1, {CrossingEvent::inserted(0)}}}}));
  // crossing the same inserted edge twice is never allowed
  auto k3 = with_f(named::cube(), {{0, 2}, {1, 3}}, 3);
  EXPECT_FALSE(verify(k3, Solution{{{0, {}}, {1, {CrossingEvent::inserted(0), CrossingEvent::inserted(0),
                                                   CrossingEvent::inserted(0)}}}}));
}

TEST(Verifier, RouteCountMismatchThrows) {
  auto inst = fixtures::octahedron_antipodal();
  EXPECT_THROW(verify(inst, Solution{}), Error);
}

TEST(Planarization, ChordSplitsFace) {
  auto inst = with_f(named::cube(), {{0, 2}});
  Planarization pd(inst);
  int faces = pd.face_count();
  // corner at 0 in the outer square: darts of 0 are to 1, 4, 3
  Realization r;
  for (int a = pd.first_dart(0);;) {
    // choose the corner whose face contains vertex 2
    bool has2 = false;
    for (int d : pd.face_darts(pd.next(a))) has2 |= pd.tail(d) == 2;
    if (has2) {
      r.start = a;
      break;
    }
    a = pd.next(a);
  }
  for (int d : pd.face_darts(pd.next(r.start)))
    if (pd.head(d) == 2) r.end = d ^ 1;
  pd.insert(0, r);
  EXPECT_EQ(pd.face_count(), faces + 1);
  EXPECT_EQ(pd.euler_characteristic(), 2);
}

TEST(Planarization, OneCrossingArithmetic) {
  auto inst = with_f(named::cube(), {{0, 6}});
  Planarization pd(inst);
  const int v = pd.vertex_count(), e = pd.segment_count(), f = pd.face_count();
  // start in a face containing edge (4,5); that face is (0,1,5,4)
  Realization r;
  int a = pd.first_dart(0);
  for (;; a = pd.next(a)) {
    bool ok = false;
    for (int d : pd.face_darts(pd.next(a))) ok |= pd.tail(d) == 4 && pd.head(d) == 5 || pd.tail(d) == 5 && pd.head(d) == 4;
    if (ok) break;
  }
  r.start = a;
  for (int d : pd.face_darts(pd.next(a)))
    if ((pd.tail(d) == 4 && pd.head(d) == 5) || (pd.tail(d) == 5 && pd.head(d) == 4)) r.crossed.push_back(d);
  ASSERT_EQ(r.crossed.size(), 1u);
  // after subdivision the new far segment is the next dart id; probe the final face by replaying
  {
    auto m = pd.mark();
    int t = pd.subdivide(r.crossed[0], pd.graph_edge_count());
    pd.connect(r.start, r.crossed[0] ^ 1, pd.graph_edge_count());
    for (int d : pd.face_darts(pd.next(t)))
      if (pd.head(d) == 6) r.end = d ^ 1;
    pd.rollback(m);
  }
  ASSERT_GE(r.end, 0);
  pd.insert(0, r);
  EXPECT_EQ(pd.vertex_count(), v + 1);
  EXPECT_EQ(pd.segment_count(), e + 3);
  EXPECT_EQ(pd.face_count(), f + 2);
  EXPECT_EQ(pd.euler_characteristic(), 2);
  EXPECT_EQ(pd.degree(v), 4);
}

TEST(Planarization, ReusedSegmentRejected) {
  auto inst = with_f(named::cube(), {{0, 6}}, 2);
  Planarization pd(inst);
  Realization r;
  r.start = pd.first_dart(0);
  int s = -1;
  for (int d : pd.face_darts(pd.next(r.start)))
    if (pd.owner(d) != -1 && pd.tail(d) != 0 && pd.head(d) != 0) s = d;
  ASSERT_GE(s, 0);
  // crossing s and then its far half (same segment before the route)
  int t_expected = pd.dart_count();
  r.crossed = {s, t_expected ^ 1};
  r.end = pd.first_dart(6);
  auto before = pd.mark();
  EXPECT_THROW(pd.insert(0, r), Error);
  EXPECT_EQ(pd.mark().darts, before.darts);
  EXPECT_EQ(pd.euler_characteristic(), 2);
}
