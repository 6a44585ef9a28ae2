#include <gtest/gtest.h>

#include "congest/cover.hpp"
#include "congest/errors.hpp"

using namespace congest;

TEST(Cover, RadiusSchedule) {
  EXPECT_EQ(cover_radius(1, 1, 1), 1);
  EXPECT_EQ(cover_radius(2, 2, 1), 6);
  EXPECT_EQ(cover_radius(2, 2, 2), 2);
  EXPECT_EQ(cover_radius(3, 1, 1), 5);
}

TEST(Cover, StarWithOneTree) {
  Graph star = generate(GraphKind::Star, 7, 0);
  Cover c;
  c.k = 1;
  c.w = 1;
  CoverTree t;
  t.center = 0;
  for (NodeId v = 0; v < 7; ++v) {
    t.members.push_back(v);
    t.parent.push_back(v == 0 ? -1 : 0);
    t.depth.push_back(v == 0 ? 0 : 1);
  }
  c.trees.push_back(t);
  auto rep = check_cover(star, c);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.max_membership, 1u);

  // A leaf-centered tree of depth 1 misses the other leaves.
  c.trees[0].center = 1;
  c.trees[0].members = {0, 1};
  c.trees[0].parent = {1, -1};
  c.trees[0].depth = {1, 0};
  rep = check_cover(star, c);
  EXPECT_TRUE(rep.trees_valid);
  EXPECT_FALSE(rep.neighborhoods_ok);
  c.trees[0].parent = {-1, -1};
  EXPECT_FALSE(check_cover(star, c).trees_valid);
}

TEST(Cover, ConstructionSatisfiesAllProperties) {
  for (std::uint64_t s = 0; s < 4; ++s) {
    Graph g = generate_connected({GraphKind::Gnp, 96, 0.08}, s);
    for (unsigned k : {1u, 2u, 3u})
      for (std::int64_t w : {1, 2}) {
        auto r = neighborhood_cover(g, k, w, s);
        auto rep = check_cover(g, r.cover);
        EXPECT_TRUE(rep.ok()) << "k " << k << " W " << w << " seed " << s;
        EXPECT_LE(rep.max_depth, (2 * static_cast<std::int64_t>(k) - 1) * w);
        EXPECT_EQ(r.centers_per_phase.size(), k);
        EXPECT_GT(r.metrics.messages, 0u);
      }
  }
}

TEST(Cover, LargeRadiusNeedsOnePhase) {
  Graph g = generate_connected({GraphKind::Gnp, 40, 0.2}, 1);
  auto r = neighborhood_cover(g, 1, 40, 3);
  // Every node is a center in the single phase and each tree spans the graph.
  EXPECT_EQ(r.cover.trees.size(), 40u);
  for (const auto& t : r.cover.trees) EXPECT_EQ(t.members.size(), 40u);
  EXPECT_THROW(neighborhood_cover(g, 0, 1, 0), InvalidArgument);
}

TEST(Cover, Deterministic) {
  Graph g = generate_connected({GraphKind::Gnp, 64, 0.1}, 2);
  auto a = neighborhood_cover(g, 2, 1, 9);
  auto b = neighborhood_cover(g, 2, 1, 9);
  EXPECT_EQ(a.metrics.to_json(), b.metrics.to_json());
  EXPECT_EQ(a.cover.trees.size(), b.cover.trees.size());
}
