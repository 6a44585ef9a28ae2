#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include <json.hpp>

#include "congest/errors.hpp"
#include "congest/forest.hpp"
#include "congest/hierarchy.hpp"
#include "congest/ldc.hpp"

using namespace congest;

namespace {

// Sum over packets of hop counts to the root, computed from depths.
std::uint64_t hop_sum(const ClusterForest& f, const std::vector<std::size_t>& words) {
  std::uint64_t s = 0;
  for (NodeId v = 0; v < f.n(); ++v) {
    std::uint64_t d = 0;
    for (NodeId x = v; f.parent[x] >= 0; x = static_cast<NodeId>(f.parent[x])) ++d;
    s += d * words[v];
  }
  return s;
}

}  // namespace

TEST(Forest, FromParents) {
  auto f = ClusterForest::from_parents({-1, 0, 1, 2, -1});
  EXPECT_EQ(f.center, (std::vector<std::int64_t>{0, 0, 0, 0, 4}));
  EXPECT_EQ(f.depth, (std::vector<std::uint32_t>{0, 1, 2, 3, 0}));
  EXPECT_EQ(f.max_depth(), 3u);
  EXPECT_THROW(ClusterForest::from_parents({1, 0}), PreconditionError);
}

TEST(Upcast, RootedPath) {
  Graph g = generate(GraphKind::Path, 4, 0);
  auto f = ClusterForest::from_parents({-1, 0, 1, 2});
  std::vector<std::vector<Message>> in(4, {Message::make(1, {5})});
  auto r = upcast(g, f, in);
  EXPECT_EQ(r.metrics.messages, 6u);
  EXPECT_EQ(r.metrics.rounds, 3u);
  ASSERT_EQ(r.collected.at(0).size(), 4u);
}

TEST(Upcast, Star) {
  Graph g = generate(GraphKind::Star, 6, 0);
  auto f = ClusterForest::from_parents({-1, 0, 0, 0, 0, 0});
  std::vector<std::vector<Message>> in(6, {Message::make(1, {1})});
  in[0].clear();
  auto r = upcast(g, f, in);
  EXPECT_EQ(r.metrics.rounds, 1u);
  EXPECT_EQ(r.metrics.messages, 5u);
}

TEST(Upcast, EmptyInputs) {
  Graph g = generate(GraphKind::Path, 4, 0);
  auto f = ClusterForest::from_parents({-1, 0, 1, 2});
  auto r = upcast(g, f, std::vector<std::vector<Message>>(4));
  EXPECT_EQ(r.metrics.messages, 0u);
  EXPECT_EQ(r.metrics.rounds, 0u);
}

TEST(Upcast, HopSumOracleAndRoundBound) {
  RandomStream rs(3);
  for (int t = 0; t < 30; ++t) {
    Graph g = generate_connected({GraphKind::Gnp, 40, 0.15}, rs.next_u64());
    auto ld = ldc_decompose(g, 0.5, rs.next_u64());
    std::vector<std::vector<Message>> in(g.n());
    std::vector<std::size_t> words(g.n());
    std::size_t total = 0;
    for (NodeId v = 0; v < g.n(); ++v) {
      words[v] = rs.uniform_int(0, 4);
      in[v].assign(words[v], Message::make(1, {static_cast<std::int64_t>(v)}));
      total += words[v];
    }
    auto r = upcast(g, ld.forest, in);
    EXPECT_EQ(r.metrics.messages, hop_sum(ld.forest, words));
    EXPECT_LE(r.metrics.rounds, total + ld.forest.max_depth());
    std::size_t got = 0;
    for (auto& [c, items] : r.collected) {
      for (auto& [origin, w] : items) EXPECT_EQ(ld.forest.center[origin], c);
      got += items.size();
    }
    EXPECT_EQ(got, total);
  }
}

TEST(Downcast, StarTwoLeaves) {
  Graph g = generate(GraphKind::Star, 6, 0);
  auto f = ClusterForest::from_parents({-1, 0, 0, 0, 0, 0});
  std::map<NodeId, std::vector<std::pair<NodeId, Message>>> m{
      {0, {{1, Message::make(1, {1})}, {2, Message::make(1, {2})}}}};
  auto r = downcast(g, f, m);
  EXPECT_EQ(r.metrics.messages, 2u);
  EXPECT_LE(r.metrics.rounds, 3u);
  EXPECT_EQ(r.delivered[2].size(), 1u);
}

TEST(Downcast, DeepestOnPath) {
  Graph g = generate(GraphKind::Path, 4, 0);
  auto f = ClusterForest::from_parents({-1, 0, 1, 2});
  auto r = downcast(g, f, {{0, {{3, Message::make(1, {1})}}}});
  EXPECT_EQ(r.metrics.messages, 3u);
  EXPECT_EQ(r.delivered[3].size(), 1u);
}

TEST(Downcast, EmptyAndForeignDestination) {
  Graph g = generate(GraphKind::Path, 4, 0);
  auto f = ClusterForest::from_parents({-1, 0, -1, 2});
  auto r = downcast(g, f, {});
  EXPECT_EQ(r.metrics.messages, 0u);
  EXPECT_EQ(r.metrics.rounds, 0u);
  EXPECT_THROW(downcast(g, f, {{0, {{3, Message::make(1, {1})}}}}), PreconditionError);
}

TEST(Router, OnePacketPerEdgePerRound) {
  Graph g = generate(GraphKind::Path, 3, 0);
  Router r(g);
  r.add_edge(0, 1, 3);
  r.add_edge(1, 0, 2);
  SimMetrics m(g.m());
  EXPECT_EQ(r.run(m), 3u);
  EXPECT_EQ(m.messages, 5u);
  EXPECT_EQ(m.edge_congestion[0], 5u);
}

TEST(Ldc, EdgelessGraph) {
  Graph g(5, {});
  auto d = ldc_decompose(g, 0.5, 1);
  EXPECT_EQ(d.cluster_count, 5u);
  for (NodeId v = 0; v < 5; ++v) EXPECT_TRUE(d.f_out[v].empty());
}

TEST(Ldc, CliqueFDegreeMatchesNeighborClusters) {
  Graph g = generate(GraphKind::Clique, 8, 0);
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto d = ldc_decompose(g, 0.5, s);
    for (NodeId v = 0; v < 8; ++v) {
      std::set<std::int64_t> others;
      for (NodeId u : g.neighbors(v))
        if (d.forest.center[u] != d.forest.center[v]) others.insert(d.forest.center[u]);
      EXPECT_EQ(d.f_out[v].size(), others.size());
      EXPECT_LE(others.size(), d.cluster_count - 1);
    }
  }
}

TEST(Ldc, PropertiesOnRandomGraphs) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Graph g = generate_connected({GraphKind::Gnp, 128, 0.1}, s);
    auto d = ldc_decompose(g, 0.5, s);
    auto rep = check_ldc(g, d);
    EXPECT_TRUE(rep.ok(d.r_bound, d.d_bound));
    EXPECT_EQ(d.r_bound, 16u * 7u);
    EXPECT_GT(d.metrics.messages, 0u);
  }
}

TEST(Ldc, ValidationFailureNamesBound) {
  Graph g = generate(GraphKind::Path, 64, 0);
  Constants deg;
  deg.ldc_degree_c = 0;
  Constants dia;
  dia.ldc_diameter_c = 0;
  int degree_hits = 0, diameter_hits = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    try {
      ldc_decompose(g, 0.9, s, deg);
    } catch (const WhpFailure& e) {
      EXPECT_EQ(e.bound(), "ldc degree");
      ++degree_hits;
    }
    try {
      ldc_decompose(g, 0.9, s, dia);
    } catch (const WhpFailure& e) {
      EXPECT_EQ(e.bound(), "ldc diameter");
      ++diameter_hits;
    }
  }
  EXPECT_EQ(degree_hits, 10);
  EXPECT_EQ(diameter_hits, 10);
}

TEST(Hierarchy, EpsilonOneIsDegenerate) {
  Graph g = generate_connected({GraphKind::Gnp, 16, 0.3}, 2);
  auto h = build_pruned_hierarchy(g, 1.0, 4);
  ASSERT_EQ(h.kappa, 1u);
  std::size_t f = 0;
  for (NodeId v = 0; v < g.n(); ++v) {
    EXPECT_TRUE(h.levels[1].low[v]);
    EXPECT_EQ(h.levels[1].f[v].size(), g.degree(v));
    f += h.levels[1].f[v].size();
  }
  EXPECT_EQ(f, 2 * g.m());
  for (auto c : h.cluster_edge) EXPECT_EQ(c, 0);
}

TEST(Hierarchy, HalfGivesStarsAndIsUnchangedByPruning) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Graph g = generate_connected({GraphKind::Gnp, 128, 0.1}, s);
    auto h = build_bs_hierarchy(g, 0.5, s);
    ASSERT_EQ(h.kappa, 2u);
    EXPECT_LE(h.levels[1].clusters.max_depth(), 1u);
    auto p = prune_hierarchy(g, h);
    EXPECT_EQ(p.levels[1].clusters.center, h.levels[1].clusters.center);
    auto rep = check_hierarchy(g, p);
    EXPECT_TRUE(rep.structure && rep.radius && rep.coverage && rep.f_distinct && rep.subtree_bound)
        << (rep.problems.empty() ? "" : rep.problems[0]);
  }
}

TEST(Hierarchy, PropertiesAtSmallEpsilon) {
  for (double eps : {0.25, 1.0 / 3.0}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      Graph g = generate_connected({GraphKind::Gnp, 64, 0.1}, s);
      auto h = build_pruned_hierarchy(g, eps, s);
      auto rep = check_hierarchy(g, h);
      EXPECT_TRUE(rep.structure && rep.radius && rep.coverage && rep.f_distinct && rep.subtree_bound)
          << (rep.problems.empty() ? "" : rep.problems[0]);
      EXPECT_LE(static_cast<double>(rep.max_f_degree), bs_degree_bound(g.n(), eps, Constants{}));
    }
  }
}

TEST(Hierarchy, BroomIsSplitAtHandle) {
  // Level-1 tree: root 0 with leaf 1 and handle 2 carrying 3,4,5,6 below it.
  // n = 16 and eps = 1/2 give threshold 4: node 2's subtree (5 nodes) splits.
  std::vector<Edge> es{{0, 1}, {0, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 6}};
  for (NodeId v = 7; v < 16; ++v) es.push_back({v - 1, v});
  Graph g(16, es);
  BsHierarchy h;
  h.epsilon = 0.25;
  h.kappa = 4;
  h.levels.resize(5);
  for (auto& l : h.levels) {
    l.sampled.assign(16, 0);
    l.low.assign(16, 0);
    l.f.assign(16, {});
  }
  std::vector<std::int64_t> none(16, -1);
  h.levels[0].clusters = ClusterForest::from_parents(none);
  std::vector<std::int64_t> par(16, -1);
  std::vector<std::uint8_t> mem(16, 0);
  par[1] = 0;
  par[2] = 0;
  for (NodeId v = 3; v <= 6; ++v) par[v] = 2;
  for (NodeId v = 0; v <= 6; ++v) mem[v] = 1;
  h.levels[1].clusters = ClusterForest::from_parents(par, &mem);
  for (unsigned i = 2; i <= 4; ++i) h.levels[i].clusters = ClusterForest::from_parents(none, &mem);
  for (auto& x : mem) x = 0;
  h.levels[2].clusters = ClusterForest::from_parents(none, &mem);
  h.levels[3].clusters = h.levels[2].clusters;
  h.levels[4].clusters = h.levels[2].clusters;
  h.metrics = SimMetrics(g.m());
  ASSERT_EQ(prune_threshold(16, 0.25), 8u);
  h.epsilon = 0.5;
  ASSERT_EQ(prune_threshold(16, 0.5), 4u);
  auto p = prune_hierarchy(g, h);
  const auto& f = p.levels[1].clusters;
  EXPECT_EQ(f.center[2], 2);
  for (NodeId v = 3; v <= 6; ++v) EXPECT_EQ(f.center[v], 2);
  EXPECT_EQ(f.center[1], 0);
  EXPECT_EQ(f.parent[2], -1);
}

TEST(Hierarchy, DumpIsJson) {
  Graph g = generate_connected({GraphKind::Gnp, 32, 0.2}, 1);
  auto h = build_pruned_hierarchy(g, 0.5, 1);
  auto j = nlohmann::json::parse(h.to_json());
  EXPECT_EQ(j["levels"].size(), 3u);
  EXPECT_TRUE(j["pruned"].get<bool>());
}

TEST(Ensemble, SizeAndIndependence) {
  Graph g = generate_connected({GraphKind::Gnp, 16, 0.3}, 1);
  auto e = build_ensemble(g, 1.0, 9);
  EXPECT_EQ(e.zeta, 16u);
  EXPECT_EQ(e.hierarchies.size(), 16u);
  for (const auto& h : e.hierarchies) EXPECT_EQ(h.f_edge_count(), 2 * g.m());
  EXPECT_EQ(e.hierarchy_of(17), 1u);
  Graph g2 = generate_connected({GraphKind::Gnp, 64, 0.2}, 1);
  auto e2 = build_ensemble(g2, 0.5, 9);
  EXPECT_EQ(e2.zeta, 8u);
  std::set<std::uint64_t> seeds;
  for (const auto& h : e2.hierarchies) seeds.insert(h.seed);
  EXPECT_EQ(seeds.size(), 8u);
}

TEST(Ensemble, ClusterEdgesAreRare) {
  Graph g = generate_connected({GraphKind::Gnp, 64, 0.2}, 5);
  auto r = cluster_edge_rarity(g, 0.5, 200, 1);
  EXPECT_EQ(r.builds, 200u);
  EXPECT_GT(r.max_rate, 0.0);
  EXPECT_LE(r.mean_rate, r.max_rate);
  EXPECT_DOUBLE_EQ(r.bound, 4.0 * 2 / 8);
  EXPECT_LE(r.max_rate, r.bound);
  // At epsilon = 1 there are no clusters at all.
  EXPECT_EQ(cluster_edge_rarity(g, 1.0, 20, 1).max_rate, 0.0);
  auto ens = build_ensemble(g, 0.5, 2);
  EXPECT_GE(max_cluster_multiplicity(ens), 1u);
  EXPECT_LE(static_cast<double>(max_cluster_multiplicity(ens)), Constants{}.smoothing_c * std::log(64.0));
}
