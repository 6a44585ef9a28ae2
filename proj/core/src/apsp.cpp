#include "congest/apsp.hpp"

#include <algorithm>
#include <cmath>

#include "congest/bcsim.hpp"
#include "congest/errors.hpp"
#include "congest/forest.hpp"
#include "congest/hierarchy.hpp"
#include "congest/primitives.hpp"
#include "congest/programs.hpp"
#include "congest/retry.hpp"

namespace congest {

namespace {

std::vector<NodeId> iota_nodes(std::size_t n) {
  std::vector<NodeId> v(n);
  for (NodeId i = 0; i < n; ++i) v[i] = i;
  return v;
}

void require_apsp_input(const Graph& g) {
  require_undirected(g);
  require_connected(g);
}

// Shared delays: one field per source, disseminated from the leader.
void charge_delays(const Graph& g, std::size_t sources, std::uint64_t seed, SimMetrics& m) {
  SimMetrics sub = m.child();
  GlobalSetup setup = global_setup(g, RandomStream(seed).child("setup").key(), sub);
  charge_shared_randomness(g, setup, words_for_fields(sources), RandomStream(seed).child("delays").key(), sub);
  m.absorb_as("apsp.shared", sub);
}

}  // namespace

std::uint64_t bellman_ford_round_bound(const Graph& g) {
  std::int64_t w = 1;
  for (const auto& e : g.edges()) w = std::max(w, e.w);
  const std::uint64_t n = g.n();
  return n * (n > 0 ? n - 1 : 0) * static_cast<std::uint64_t>(w) + n;
}

ApspResult apsp_weighted_msgopt(const Graph& g, std::uint64_t seed, const Constants& c) {
  require_apsp_input(g);
  for (const auto& e : g.edges())
    if (e.w < 0) throw PreconditionError("negative edge weight");
  ApspResult res;
  res.regime = "weighted";
  res.round_bound = bellman_ford_round_bound(g);
  BellmanFordApspProgram prog;
  BcSimResult r = simulate(g, prog, {}, res.round_bound, seed, c);
  res.metrics = std::move(r.metrics);
  std::vector<std::vector<std::int64_t>> rows(r.outputs.begin(), r.outputs.end());
  res.dist = DistanceMatrix::from_rows(rows);
  return res;
}

double small_epsilon(std::size_t n) { return 1.0 / ceil_log2(std::max<std::size_t>(n, 2)); }

std::uint64_t depth_limit(std::size_t n, double epsilon, const Constants& c) {
  const double l = c.depth_c * std::pow(static_cast<double>(n), 1.0 - epsilon) * log2n(n);
  return static_cast<std::uint64_t>(std::max(1.0, std::ceil(l - 1e-9)));
}

namespace {

void fill_rows(MultiBfsResult& res, const std::vector<NodeId>& sources, const std::vector<Record>& out) {
  const std::size_t l = sources.size();
  for (NodeId v = 0; v < out.size(); ++v)
    for (std::size_t j = 0; j < l; ++j) {
      res.dist[sources[j]][v] = out[v][j];
      res.parent[sources[j]][v] = out[v][l + j];
    }
}

}  // namespace

MultiBfsResult multi_bfs_full(const Graph& g, double epsilon, std::uint64_t seed, const Constants& c) {
  require_apsp_input(g);
  if (epsilon < 0.5 || epsilon > 1) throw InvalidArgument("multi_bfs_full needs epsilon in [1/2, 1]");
  const std::size_t n = g.n();
  RandomStream root(seed);
  MultiBfsResult res;
  res.metrics = SimMetrics(g.m());
  res.dist.assign(n, std::vector<std::int64_t>(n, -1));
  res.parent = res.dist;
  charge_delays(g, n, root.child("shared").key(), res.metrics);

  BsHierarchy h = build_pruned_hierarchy(g, epsilon, root.child("hierarchy").key(), c);
  res.metrics.absorb_as("apsp.hierarchy", h.metrics);
  const auto sources = iota_nodes(n);
  AggSimOptions opt;
  opt.run_setup = false;
  AggSimResult r = with_reseed(
      root.child("bfs").key(), c.max_reseeds,
      [&](std::uint64_t s) { return simulate_star(g, h, schedule_bfs(n, sources, kNoDepthLimit, s, c), s, c, opt); },
      &res.attempts);
  res.metrics.absorb_as("apsp.bfs", r.metrics);
  fill_rows(res, sources, r.outputs);
  return res;
}

MultiBfsResult multi_bfs_limited(const Graph& g, double epsilon, std::uint64_t seed, const Constants& c,
                                 bool single_hierarchy) {
  require_apsp_input(g);
  if (epsilon <= 0 || epsilon > 1) throw InvalidArgument("multi_bfs_limited needs epsilon in (0, 1]");
  const std::size_t n = g.n();
  RandomStream root(seed);
  MultiBfsResult res;
  res.metrics = SimMetrics(g.m());
  res.dist.assign(n, std::vector<std::int64_t>(n, -1));
  res.parent = res.dist;
  res.depth_limit = static_cast<std::int64_t>(std::min<std::uint64_t>(depth_limit(n, epsilon, c), n));
  res.batches = std::min<std::size_t>(n, std::max<std::uint64_t>(1, ceil_pow(n, epsilon)));
  std::vector<std::vector<NodeId>> groups(res.batches);
  for (NodeId v = 0; v < n; ++v) groups[v % res.batches].push_back(v);
  charge_delays(g, n, root.child("shared").key(), res.metrics);

  HierarchyEnsemble ens = build_ensemble(g, epsilon, root.child("ensemble").key(), c);
  res.metrics.absorb_as("apsp.ensemble", ens.metrics);
  SmoothingOptions opt;
  opt.kind = SimKind::General;
  opt.single_hierarchy = single_hierarchy;
  res.smoothing = with_reseed(
      root.child("bfs").key(), c.max_reseeds,
      [&](std::uint64_t s) {
        std::vector<DecomposableAlgorithm> batches;
        batches.reserve(groups.size());
        for (std::size_t j = 0; j < groups.size(); ++j)
          batches.push_back(schedule_bfs(n, groups[j], res.depth_limit, RandomStream(s).child("batch", j).key(), c));
        return combine_with_smoothing(g, ens, batches, s, c, opt);
      },
      &res.attempts);
  res.metrics.absorb_as("apsp.bfs", res.smoothing.metrics);
  for (std::size_t j = 0; j < groups.size(); ++j) fill_rows(res, groups[j], res.smoothing.outputs[j]);
  return res;
}

bool is_bfs_table(const Graph& g, const DistanceMatrix& d) {
  const std::size_t n = g.n();
  if (d.n() != n) return false;
  for (NodeId s = 0; s < n; ++s) {
    if (d.at(s, s) != 0) return false;
    for (NodeId v = 0; v < n; ++v) {
      if (v == s) continue;
      std::int64_t best = DistanceMatrix::kInfinity;
      for (NodeId w : g.neighbors(v)) best = std::min(best, d.at(s, w));
      if (best == DistanceMatrix::kInfinity || d.at(s, v) != best + 1) return false;
    }
  }
  return true;
}

std::size_t landmark_phase(const Graph& g, double epsilon, DistanceMatrix& partial, std::uint64_t seed,
                           SimMetrics& m, const Constants& c, const LandmarkOptions& opt) {
  require_apsp_input(g);
  const std::size_t n = g.n();
  if (partial.n() != n) throw InvalidArgument("partial distances have the wrong size");
  RandomStream root(seed);
  std::vector<NodeId> marks = opt.forced;
  double cl = c.landmark_c;
  for (unsigned round = 0; marks.empty(); ++round) {
    const double p = std::min(1.0, cl * std::log(static_cast<double>(std::max<std::size_t>(n, 2))) *
                                       std::pow(static_cast<double>(n), epsilon - 1));
    RandomStream rs = root.child("landmark", round);
    for (NodeId v = 0; v < n; ++v)
      if (rs.child("node", v).bernoulli(p)) marks.push_back(v);
    cl *= 2;
  }

  for (std::size_t k = 0; k < marks.size(); ++k) {
    const NodeId l = marks[k];
    if (l >= n) throw InvalidArgument("landmark is not a node");
    const std::uint64_t rs = root.child("bfs", k).key();
    RunResult bfs = run_part("apsp.landmark.bfs", g, BfsProgram(l), {}, n + 1, rs, m);
    std::vector<std::int64_t> parent(n), dist(n);
    for (NodeId v = 0; v < n; ++v) {
      dist[v] = bfs.outputs[v][0];
      parent[v] = bfs.outputs[v][1];
    }
    // Every tree edge travels to the root as one word.
    ClusterForest tree = ClusterForest::from_parents(parent);
    Router up(g);
    for (NodeId v = 0; v < n; ++v)
      if (v != l) up.add_up(tree, v);
    SimMetrics sub = m.child();
    up.run(sub);
    m.absorb_as("apsp.landmark.upcast", sub);
    // ... and then down to every node, pipelined.
    auto kids = tree.children();
    std::vector<Record> in(n);
    for (NodeId v = 0; v < n; ++v) {
      in[v] = {v == l ? 1 : 0, static_cast<std::int64_t>(n - 1)};
      for (NodeId ch : kids[v]) in[v].push_back(ch);
    }
    run_part("apsp.landmark.cast", g, PipelineCastProgram(), in, 2 * n + 2, rs, m);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = 0; v < n; ++v) partial.relax(u, v, dist[u] + dist[v]);
  }
  if (opt.verify && !is_bfs_table(g, partial))
    throw WhpFailure("landmark coverage", "some far pair was not resolved through a landmark");
  return marks.size();
}

ApspResult apsp_unweighted_tradeoff(const Graph& g, double epsilon, std::uint64_t seed, const Constants& c) {
  require_apsp_input(g);
  if (g.weighted()) throw PreconditionError("unweighted APSP needs an unweighted graph");
  if (!(epsilon >= 0 && epsilon <= 1)) throw InvalidArgument("epsilon must lie in [0, 1]");
  const std::size_t n = g.n();
  if (epsilon <= small_epsilon(n)) return apsp_weighted_msgopt(g, seed, c);

  ApspResult res;
  auto to_matrix = [&](const MultiBfsResult& r) {
    DistanceMatrix d(n);
    for (NodeId s = 0; s < n; ++s)
      for (NodeId v = 0; v < n; ++v)
        if (r.dist[s][v] >= 0) d.set(s, v, r.dist[s][v]);
    return d;
  };
  if (epsilon >= 0.5) {
    res.regime = "full";
    MultiBfsResult r = multi_bfs_full(g, epsilon, seed, c);
    res.dist = to_matrix(r);
    res.metrics = std::move(r.metrics);
    res.attempts = r.attempts;
    return res;
  }
  unsigned attempts = 1;
  res = with_reseed(
      seed, c.max_reseeds,
      [&](std::uint64_t s) {
        ApspResult a;
        a.regime = "limited";
        MultiBfsResult r = multi_bfs_limited(g, epsilon, s, c);
        a.dist = to_matrix(r);
        a.metrics = std::move(r.metrics);
        a.landmarks = landmark_phase(g, epsilon, a.dist, RandomStream(s).child("landmarks").key(), a.metrics, c);
        return a;
      },
      &attempts);
  res.attempts = attempts;
  return res;
}

}  // namespace congest
