#include <gtest/gtest.h>

#include <cmath>

#include "congest/errors.hpp"
#include "congest/graph.hpp"
#include "congest/random.hpp"

using namespace congest;

TEST(Generate, PathEdges) {
  Graph g = generate(GraphKind::Path, 3, 1);
  ASSERT_EQ(g.m(), 2u);
  EXPECT_EQ(g.edge(0), (Edge{0, 1, 1}));
  EXPECT_EQ(g.edge(1), (Edge{1, 2, 1}));
}

TEST(Generate, CliqueEdgeCount) { EXPECT_EQ(generate(GraphKind::Clique, 4, 1).m(), 6u); }

TEST(Generate, GnpEdgeCountWindow) {
  // Binomial(2016, 0.5): the +-6 sigma window sits inside the frozen one.
  const double pairs = 64.0 * 63.0 / 2.0;
  const double mean = pairs * 0.5, sd = std::sqrt(pairs * 0.25);
  EXPECT_DOUBLE_EQ(mean, 1008.0);
  EXPECT_GE(mean - 6 * sd, 800.0);
  EXPECT_LE(mean + 6 * sd, 1216.0);
  Graph g = generate(GraphKind::Gnp, 64, 7, 0.5);
  EXPECT_GE(static_cast<double>(g.m()), mean - 6 * sd);
  EXPECT_LE(static_cast<double>(g.m()), mean + 6 * sd);
  EXPECT_GE(g.m(), 800u);
  EXPECT_LE(g.m(), 1216u);
}

TEST(Generate, RejectsBadArguments) {
  EXPECT_THROW(generate(GraphKind::Gnp, 0, 1, 0.5), InvalidArgument);
  EXPECT_THROW(generate(GraphKind::Gnp, 10, 1, 1.5), InvalidArgument);
  EXPECT_THROW(generate(GraphKind::Gnp, 10, 1, -0.1), InvalidArgument);
}

TEST(Generate, DeterministicPerSeed) {
  for (auto k : {GraphKind::Path, GraphKind::Grid, GraphKind::Clique, GraphKind::Gnp, GraphKind::BipartiteGnp})
    for (std::uint64_t s = 0; s < 5; ++s) EXPECT_EQ(generate(k, 40, s, 0.2), generate(k, 40, s, 0.2));
}

TEST(Generate, ComponentCountReported) {
  Graph g = generate(GraphKind::Gnp, 30, 3, 0.0);
  EXPECT_EQ(g.component_count(), 30u);
  EXPECT_FALSE(g.connected());
  EXPECT_TRUE(generate(GraphKind::Path, 30, 3).connected());
}

TEST(Generate, BipartiteIsBipartite) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    GenSpec spec{GraphKind::BipartiteGnp, 40, 0.2, 15};
    Graph g = generate(spec, s);
    auto side = bipartition(g);
    ASSERT_TRUE(side.has_value());
    for (const auto& e : g.edges()) EXPECT_NE(e.u < 15, e.v < 15);
  }
}

TEST(Generate, WeightsInRange) {
  GenSpec spec{GraphKind::Gnp, 30, 0.3, 0, true, 0};
  Graph g = generate(spec, 5);
  EXPECT_TRUE(g.weighted());
  for (const auto& e : g.edges()) {
    EXPECT_GE(e.w, 1);
    EXPECT_LE(e.w, 900);
  }
}

TEST(Graph, AdjacencySymmetric) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Graph g = generate(GraphKind::Gnp, 50, s, 0.15);
    for (NodeId u = 0; u < g.n(); ++u)
      for (NodeId v : g.neighbors(u)) {
        auto back = g.neighbors(v);
        EXPECT_TRUE(std::find(back.begin(), back.end(), u) != back.end());
      }
  }
}

TEST(Graph, RejectsSelfLoopsAndDuplicates) {
  EXPECT_THROW(Graph(3, {{1, 1, 1}}), InvalidArgument);
  EXPECT_THROW(Graph(3, {{0, 1, 1}, {1, 0, 1}}), InvalidArgument);
  EXPECT_THROW(Graph(3, {{0, 5, 1}}), InvalidArgument);
}

TEST(Graph, CanonicalOrientation) {
  Graph g(3, {{2, 1, 1}, {1, 0, 1}});
  EXPECT_EQ(g.edge(0), (Edge{0, 1, 1}));
  EXPECT_EQ(g.edge(1), (Edge{1, 2, 1}));
  EXPECT_EQ(g.dir_edge(0, 1), 0u);
  EXPECT_EQ(g.dir_edge(1, 0), 1u);
  EXPECT_THROW(g.dir_edge(0, 2), PreconditionError);
}

TEST(EdgeList, LoadPath) {
  Graph g = load_edge_list("3 2 0 0\n0 1\n1 2");
  EXPECT_EQ(g, generate(GraphKind::Path, 3, 0));
}

TEST(EdgeList, LoadWeighted) {
  Graph g = load_edge_list("2 1 0 1\n0 1 5");
  ASSERT_EQ(g.m(), 1u);
  EXPECT_TRUE(g.weighted());
  EXPECT_EQ(g.edge(0).w, 5);
}

TEST(EdgeList, CanonicalizesOrientation) {
  Graph g = load_edge_list("3 2 0 0\n2 1\n1 0\n");
  EXPECT_EQ(save_edge_list(g), "3 2 0 0\n0 1\n1 2\n");
}

TEST(EdgeList, ErrorsCarryLineNumbers) {
  auto line_of = [](const char* text) -> std::size_t {
    try {
      load_edge_list(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("3 2 0 0\n0 1\n1 x\n"), 3u);
  EXPECT_EQ(line_of("3 2 0 0\n0 1\n1 7\n"), 3u);
  EXPECT_EQ(line_of("3 2 0 0\n0 1\n1 0\n"), 3u);
  EXPECT_EQ(line_of("3 2 0\n"), 1u);
  EXPECT_EQ(line_of("3 2 0 1\n0 1\n"), 2u);
  EXPECT_EQ(line_of("3 2 0 0\n0 1\n"), 3u);
}

TEST(EdgeList, RoundTripProperty) {
  RandomStream rs(99);
  for (int i = 0; i < 100; ++i) {
    GenSpec spec;
    spec.kind = static_cast<GraphKind>(rs.uniform_int(0, 6));
    spec.n = rs.uniform_int(1, 60);
    spec.p = rs.uniform01() * 0.5;
    spec.weighted = rs.bernoulli(0.5);
    Graph g = generate(spec, rs.next_u64());
    EXPECT_EQ(load_edge_list(save_edge_list(g)), g) << "instance " << i;
  }
}

TEST(Random, SamePathSameStream) {
  RandomStream a = RandomStream(5).child("x", 3), b = RandomStream(5).child("x", 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  RandomStream c = RandomStream(5).child("x", 4);
  RandomStream d = RandomStream(5).child("x", 3);
  EXPECT_NE(c.next_u64(), d.next_u64());
}

TEST(Random, UniformIntInRangeAndUnbiased) {
  RandomStream r(1);
  std::vector<int> hist(6, 0);
  for (int i = 0; i < 60000; ++i) {
    auto x = r.uniform_int(10, 15);
    ASSERT_GE(x, 10u);
    ASSERT_LE(x, 15u);
    ++hist[x - 10];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

TEST(Random, GeometricTail) {
  RandomStream r(2);
  const double q = std::exp(-0.5);
  int ge2 = 0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i)
    if (r.geometric_level(q, 100) >= 2) ++ge2;
  EXPECT_NEAR(ge2 / double(trials), q * q, 0.01);
}

TEST(Helpers, CeilPowAndLog) {
  EXPECT_EQ(ceil_pow(256, 0.5), 16u);
  EXPECT_EQ(ceil_pow(64, 0.5), 8u);
  EXPECT_EQ(ceil_pow(100, 0.5), 10u);
  EXPECT_EQ(ceil_pow(101, 0.5), 11u);
  EXPECT_EQ(ceil_log2(1), 1u);
  EXPECT_EQ(ceil_log2(256), 8u);
  EXPECT_EQ(ceil_log2(257), 9u);
}
