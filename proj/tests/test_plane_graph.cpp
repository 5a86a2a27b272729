#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "kpip/plane_graph.hpp"

using namespace kpip;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

void expect_consistent(const PlaneGraph& g) {
  int total = 0;
  for (int f = 0; f < g.face_count(); ++f) total += g.face(f).degree();
  EXPECT_EQ(total, 2 * g.edge_count());
  EXPECT_EQ(g.vertex_count() - g.edge_count() + g.face_count(), 2);
  for (int d = 0; d < g.dart_count(); ++d) {
    EXPECT_NE(g.twin(d), d);
    EXPECT_EQ(g.twin(g.twin(d)), d);
    EXPECT_EQ(g.edge_of(d), g.edge_of(g.twin(d)));
    EXPECT_EQ(g.tail(g.next(d)), g.tail(d));
    EXPECT_EQ(g.next(g.prev(d)), d);
  }
}

}  // namespace

TEST(PlaneGraph, K4Counts) {
  auto g = named::k4();
  EXPECT_EQ(g.vertex_count(), 4);
  EXPECT_EQ(g.edge_count(), 6);
  EXPECT_EQ(g.face_count(), 4);
  expect_consistent(g);
  EXPECT_TRUE(is_triangulation(g));
}

TEST(PlaneGraph, TriangleHasTwoFaces) {
  auto g = named::triangle();
  EXPECT_EQ(g.face_count(), 2);
  EXPECT_FALSE(is_triangulation(g));
}

TEST(PlaneGraph, K5RotationRejected) {
  // K5 with each rotation sorted by index: not a sphere embedding.
  std::vector<std::vector<int>> rot(5);
  for (int v = 0; v < 5; ++v)
    for (int w = 0; w < 5; ++w)
      if (w != v) rot[v].push_back(w);
  EXPECT_EQ(code_of([&] { PlaneGraph::from_rotation(5, rot); }), ErrorCode::NotPlanarEmbedding);
}

TEST(PlaneGraph, RejectsBadInput) {
  EXPECT_EQ(code_of([] { PlaneGraph::from_rotation(3, {{1, 2}, {0}, {0, 1}}); }), ErrorCode::AsymmetricAdjacency);
  EXPECT_EQ(code_of([] { PlaneGraph::from_rotation(4, {{1}, {0}, {3}, {2}}); }), ErrorCode::Disconnected);
  EXPECT_EQ(code_of([] { PlaneGraph::from_rotation(2, {{1, 1}, {0, 0}}); }), ErrorCode::InvalidRotation);
  EXPECT_EQ(code_of([] { PlaneGraph::from_rotation(2, {{0}, {}}); }), ErrorCode::InvalidRotation);
}

TEST(PlaneGraph, NamedGraphs) {
  auto oct = named::octahedron();
  expect_consistent(oct);
  EXPECT_TRUE(is_triangulation(oct));
  EXPECT_EQ(oct.edge_count(), 12);
  auto bip = named::bipyramid();
  expect_consistent(bip);
  EXPECT_TRUE(is_triangulation(bip));
  auto cube = named::cube();
  expect_consistent(cube);
  EXPECT_FALSE(is_triangulation(cube));
  EXPECT_EQ(cube.face_count(), 6);
}

TEST(PlaneGraph, ApexOfTriangle) {
  auto g = named::triangle();
  int e = *g.find_edge(0, 1);
  int d = g.edge_dart(e);
  EXPECT_EQ(apex(g, e, g.face_of(d)), 2);
  EXPECT_EQ(apex(g, e, g.face_of(g.twin(d))), 2);
}

TEST(PlaneGraph, ApexesK4AndOctahedron) {
  auto g = named::k4();
  auto [a, b] = apexes(g, *g.find_edge(0, 1));
  EXPECT_EQ(std::set<int>({a, b}), std::set<int>({2, 3}));

  auto oct = named::octahedron();
  auto [p, q] = apexes(oct, *oct.find_edge(1, 2));
  EXPECT_EQ(std::set<int>({p, q}), std::set<int>({0, 5}));
}

TEST(PlaneGraph, ApexErrors) {
  auto cube = named::cube();
  int e = *cube.find_edge(0, 1);
  EXPECT_EQ(code_of([&] { apex(cube, e, cube.face_of(cube.edge_dart(e))); }), ErrorCode::NotTriangle);
  auto g = named::k4();
  int e01 = *g.find_edge(0, 1);
  int f_other = -1;
  for (int f = 0; f < g.face_count(); ++f)
    if (f != g.face_of(g.edge_dart(e01)) && f != g.face_of(g.twin(g.edge_dart(e01)))) f_other = f;
  EXPECT_EQ(code_of([&] { apex(g, e01, f_other); }), ErrorCode::NotIncident);
}

TEST(PlaneGraph, RotationRoundTrip) {
  auto g = generate_stacked_triangulation(30, 7);
  auto h = PlaneGraph::from_rotation(g.vertex_count(), g.rotation());
  EXPECT_EQ(g.rotation(), h.rotation());
}

TEST(PlaneGraph, Biconnectivity) {
  EXPECT_TRUE(is_biconnected(named::cube()));
  EXPECT_TRUE(is_biconnected(named::octahedron()));
  // two triangles sharing vertex 0
  auto bowtie = PlaneGraph::from_rotation(5, {{1, 2, 3, 4}, {2, 0}, {0, 1}, {4, 0}, {0, 3}});
  EXPECT_FALSE(is_biconnected(bowtie));
  auto path = PlaneGraph::from_rotation(3, {{1}, {0, 2}, {1}});
  EXPECT_FALSE(is_biconnected(path));
}

TEST(Generator, K4RegardlessOfSeed) {
  for (std::uint64_t s : {0ULL, 1ULL, 99ULL})
    EXPECT_EQ(generate_stacked_triangulation(4, s).rotation(), named::k4().rotation());
}

TEST(Generator, DeterministicTriangulation) {
  auto g = generate_stacked_triangulation(10, 42);
  EXPECT_TRUE(is_triangulation(g));
  EXPECT_EQ(g.edge_count(), 24);
  EXPECT_EQ(g.rotation(), generate_stacked_triangulation(10, 42).rotation());
  EXPECT_THROW(generate_stacked_triangulation(3, 1), Error);
}

TEST(Generator, TriangulationFormulationsAgree) {
  auto all_faces_triangles = [](const PlaneGraph& g) {
    for (int f = 0; f < g.face_count(); ++f)
      if (g.face(f).degree() != 3) return false;
    return g.vertex_count() >= 4;
  };
  for (int s = 0; s < 100; ++s) {
    auto g = generate_stacked_triangulation(4 + s % 40, s);
    expect_consistent(g);
    EXPECT_TRUE(is_triangulation(g));
    EXPECT_EQ(g.edge_count(), 3 * g.vertex_count() - 6);
    EXPECT_TRUE(all_faces_triangles(g));
  }
  // Non-triangulations: drop one edge from a stacked triangulation.
  for (int s = 0; s < 20; ++s) {
    auto g = generate_stacked_triangulation(6 + s, 1000 + s);
    auto rot = g.rotation();
    Rng rng(s);
    int e = static_cast<int>(rng.below(g.edge_count()));
    auto [u, v] = g.endpoints(e);
    std::erase(rot[u], v);
    std::erase(rot[v], u);
    auto h = PlaneGraph::from_rotation(g.vertex_count(), rot);
    expect_consistent(h);
    EXPECT_FALSE(is_triangulation(h));
    EXPECT_NE(h.edge_count(), 3 * h.vertex_count() - 6);
    EXPECT_FALSE(all_faces_triangles(h));
  }
}

TEST(Sampling, EmptyAndComplete) {
  EXPECT_TRUE(sample_complement_edges(named::k4(), 0, 1, FStructure::None).empty());
  EXPECT_EQ(code_of([] { sample_complement_edges(named::k4(), 1, 1, FStructure::None); }),
            ErrorCode::InsufficientComplementPairs);
}

TEST(Sampling, OctahedronMatchingIsAntipodal) {
  auto oct = named::octahedron();
  auto f = sample_complement_edges(oct, 3, 5, FStructure::Matching);
  std::set<std::uint64_t> keys;
  for (auto p : f) keys.insert(p.key());
  std::set<std::uint64_t> expected{VertexPair{0, 5}.key(), VertexPair{1, 3}.key(), VertexPair{2, 4}.key()};
  EXPECT_EQ(keys, expected);
}

TEST(Sampling, ShapesHold) {
  for (int s = 0; s < 30; ++s) {
    auto g = generate_stacked_triangulation(20, s);
    for (auto st : {FStructure::None, FStructure::Matching, FStructure::Path}) {
      auto f = sample_complement_edges(g, 5, s, st);
      ASSERT_EQ(f.size(), 5u);
      std::set<std::uint64_t> keys;
      for (auto p : f) {
        EXPECT_FALSE(g.adjacent(p.u, p.v));
        EXPECT_NE(p.u, p.v);
        keys.insert(p.key());
      }
      EXPECT_EQ(keys.size(), 5u);
      if (st == FStructure::Matching) {
        std::set<int> ends;
        for (auto p : f) ends.insert({p.u, p.v});
        EXPECT_EQ(ends.size(), 10u);
      }
      if (st == FStructure::Path) {
        std::set<int> verts{f[0].u};
        for (std::size_t i = 0; i < f.size(); ++i) {
          if (i > 0) EXPECT_EQ(f[i].u, f[i - 1].v);
          verts.insert(f[i].v);
        }
        EXPECT_EQ(verts.size(), 6u);
      }
      EXPECT_EQ(f, sample_complement_edges(g, 5, s, st));
    }
  }
}

TEST(Sampling, LargeGraphRejection) {
  auto g = generate_stacked_triangulation(5000, 3);
  auto f = sample_complement_edges(g, 500, 3, FStructure::Matching);
  EXPECT_EQ(f.size(), 500u);
  auto p = sample_complement_edges(g, 50, 3, FStructure::Path);
  EXPECT_EQ(p.size(), 50u);
  auto a = sample_apex_pairs(g, 500, 3);
  for (auto q : a) EXPECT_FALSE(g.adjacent(q.u, q.v));
}

TEST(Generators, DisjointApexPairs) {
  auto g = generate_stacked_triangulation(2000, 4);
  auto F = sample_disjoint_apex_pairs(g, 200, 5);
  EXPECT_EQ(F.size(), 200u);
  std::set<std::uint64_t> keys;
  for (auto p : F) {
    EXPECT_FALSE(g.adjacent(p.u, p.v));
    keys.insert(p.key());
  }
  EXPECT_EQ(keys.size(), F.size());
  EXPECT_EQ(sample_disjoint_apex_pairs(g, 200, 5).size(), F.size());
}
