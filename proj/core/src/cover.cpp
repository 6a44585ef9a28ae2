#include "congest/cover.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "congest/bcsim.hpp"
#include "congest/errors.hpp"
#include "congest/retry.hpp"
#include "congest/schedule.hpp"

namespace congest {

std::int64_t cover_radius(unsigned k, std::int64_t w, unsigned phase) {
  return (2 * static_cast<std::int64_t>(k - phase) + 1) * w;
}

namespace {

// Nodes within w hops of v.
std::vector<NodeId> ball(const Graph& g, NodeId v, std::int64_t w) {
  std::vector<std::int64_t> d(g.n(), -1);
  std::vector<NodeId> out{v};
  std::deque<NodeId> q{v};
  d[v] = 0;
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop_front();
    if (d[u] == w) continue;
    for (NodeId x : g.neighbors(u))
      if (d[x] < 0) {
        d[x] = d[u] + 1;
        out.push_back(x);
        q.push_back(x);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

CoverReport check_cover(const Graph& g, const Cover& cover, const Constants& c) {
  CoverReport rep;
  const std::size_t n = g.n();
  const double ln = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  rep.depth_bound = c.cover_depth_c * cover.k * static_cast<double>(cover.w);
  rep.membership_bound = c.cover_membership_c * cover.k * std::pow(static_cast<double>(n), 1.0 / cover.k) * ln;
  std::vector<std::size_t> member_of(n, 0);
  for (const auto& t : cover.trees) {
    if (t.members.size() != t.parent.size() || t.members.size() != t.depth.size()) {
      rep.trees_valid = false;
      rep.problems.push_back("tree of " + std::to_string(t.center) + " has misaligned fields");
      continue;
    }
    for (std::size_t i = 0; i < t.members.size(); ++i) {
      const NodeId v = t.members[i];
      ++member_of[v];
      rep.max_depth = std::max(rep.max_depth, t.depth[i]);
      if (v == t.center) {
        if (t.parent[i] != -1 || t.depth[i] != 0) rep.trees_valid = false;
        continue;
      }
      const auto p = t.parent[i];
      auto it = std::lower_bound(t.members.begin(), t.members.end(), static_cast<NodeId>(std::max<std::int64_t>(p, 0)));
      if (p < 0 || it == t.members.end() || *it != static_cast<NodeId>(p) || !g.adjacent(v, static_cast<NodeId>(p)) ||
          t.depth[static_cast<std::size_t>(it - t.members.begin())] != t.depth[i] - 1) {
        rep.trees_valid = false;
        rep.problems.push_back("node " + std::to_string(v) + " has a bad parent in the tree of " +
                               std::to_string(t.center));
      }
    }
  }
  for (NodeId v = 0; v < n; ++v) rep.max_membership = std::max(rep.max_membership, member_of[v]);
  rep.depth_ok = static_cast<double>(rep.max_depth) <= rep.depth_bound;
  rep.membership_ok = static_cast<double>(rep.max_membership) <= rep.membership_bound;
  if (!rep.depth_ok) rep.problems.push_back("tree depth " + std::to_string(rep.max_depth));
  if (!rep.membership_ok) rep.problems.push_back("membership " + std::to_string(rep.max_membership));

  for (NodeId v = 0; v < n && rep.neighborhoods_ok; ++v) {
    const auto b = ball(g, v, cover.w);
    bool inside = false;
    for (const auto& t : cover.trees)
      if (std::binary_search(t.members.begin(), t.members.end(), v) &&
          std::includes(t.members.begin(), t.members.end(), b.begin(), b.end())) {
        inside = true;
        break;
      }
    if (!inside) {
      rep.neighborhoods_ok = false;
      rep.problems.push_back("the " + std::to_string(cover.w) + "-neighborhood of " + std::to_string(v) +
                             " is in no tree");
    }
  }
  return rep;
}

CoverResult neighborhood_cover(const Graph& g, unsigned k, std::int64_t w, std::uint64_t seed, const Constants& c) {
  if (k < 1 || w < 1) throw InvalidArgument("cover needs k >= 1 and W >= 1");
  require_undirected(g);
  require_connected(g);
  const std::size_t n = g.n();
  unsigned attempts = 1;
  CoverResult res = with_reseed(
      seed, c.max_reseeds,
      [&](std::uint64_t s) {
        RandomStream root(s);
        CoverResult out;
        out.cover.k = k;
        out.cover.w = w;
        out.metrics = SimMetrics(g.m());
        BcSimBase base = prepare_base(g, root.child("base").key(), c);
        out.metrics.absorb_as("cover.base", base.metrics);
        std::vector<std::uint8_t> covered(n, 0);
        for (unsigned j = 1; j <= k; ++j) {
          const double p = j == k ? 1.0 : std::pow(static_cast<double>(n), static_cast<double>(j) / k - 1.0);
          RandomStream coins = root.child("sample", j);
          std::vector<NodeId> centers;
          for (NodeId v = 0; v < n; ++v)
            if (!covered[v] && coins.child("node", v).bernoulli(p)) centers.push_back(v);
          out.centers_per_phase.push_back(centers.size());
          if (centers.empty()) continue;
          const std::int64_t r = cover_radius(k, w, j);
          const std::uint64_t key = root.child("explore", j).key();
          SimMetrics sub = out.metrics.child();
          charge_shared_randomness(g, base.setup, words_for_fields(centers.size()), key, sub);
          DecomposableAlgorithm alg = schedule_bfs(n, centers, r, key, c);
          BcSimResult br = simulate(g, *alg.program, {}, alg.round_bound, key, base, c);
          sub.absorb_as("cover.explore", br.metrics);
          out.metrics.absorb_as("cover.phase", sub);
          const std::size_t l = centers.size();
          for (std::size_t t = 0; t < l; ++t) {
            CoverTree tree;
            tree.center = centers[t];
            tree.phase = j;
            tree.radius = r;
            for (NodeId v = 0; v < n; ++v) {
              const std::int64_t d = br.outputs[v][t];
              if (d < 0) continue;
              tree.members.push_back(v);
              tree.parent.push_back(br.outputs[v][l + t]);
              tree.depth.push_back(d);
              if (d + w <= r) covered[v] = 1;
            }
            out.cover.trees.push_back(std::move(tree));
          }
        }
        out.report = check_cover(g, out.cover, c);
        if (!out.report.ok()) throw WhpFailure("neighborhood cover", out.report.problems.front());
        return out;
      },
      &attempts);
  res.attempts = attempts;
  return res;
}

}  // namespace congest
