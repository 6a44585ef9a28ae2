#pragma once

#include <string>
#include <vector>

#include "congest/aggsim.hpp"
#include "congest/constants.hpp"
#include "congest/oracles.hpp"

namespace congest {

struct ApspResult {
  DistanceMatrix dist;
  SimMetrics metrics;
  std::string regime;  // "weighted", "limited" or "full"
  unsigned attempts = 1;
  std::uint64_t round_bound = 0;
  std::size_t landmarks = 0;
};

// Round bound for pipelined Bellman-Ford: n (n - 1) max_w + n.
std::uint64_t bellman_ford_round_bound(const Graph& g);

// Pipelined Bellman-Ford under the broadcast simulation. Weights must be
// nonnegative integers.
ApspResult apsp_weighted_msgopt(const Graph& g, std::uint64_t seed, const Constants& c = {});

// 1 / ceil(log2 n).
double small_epsilon(std::size_t n);
// ceil(depth_c n^(1-eps) log2 n).
std::uint64_t depth_limit(std::size_t n, double epsilon, const Constants& c);

struct MultiBfsResult {
  // dist[s][v] and parent[s][v]; -1 where v was not reached from s.
  std::vector<std::vector<std::int64_t>> dist;
  std::vector<std::vector<std::int64_t>> parent;
  SimMetrics metrics;
  unsigned attempts = 1;
  std::int64_t depth_limit = kNoDepthLimit;
  std::size_t batches = 1;
  // Only for the batched runs.
  SmoothingResult smoothing;
};

// BFS from every node scheduled with shared random delays and simulated with
// the star simulation on one pruned hierarchy. epsilon in [1/2, 1].
MultiBfsResult multi_bfs_full(const Graph& g, double epsilon, std::uint64_t seed, const Constants& c = {});

// BFS to depth L from every node in ceil(n^eps) batches; batch j is simulated
// on hierarchy j mod zeta of an ensemble and the batches are merged by the
// central schedule. `single_hierarchy` runs every batch on the first
// hierarchy instead.
MultiBfsResult multi_bfs_limited(const Graph& g, double epsilon, std::uint64_t seed, const Constants& c = {},
                                 bool single_hierarchy = false);

struct LandmarkOptions {
  // Use these landmarks instead of sampling.
  std::vector<NodeId> forced;
  // Check that the result is a BFS distance table and throw WhpFailure
  // otherwise.
  bool verify = true;
};

// Landmarks are sampled with p = min(1, landmark_c ln n n^(eps-1)), doubling
// the constant while none is drawn. Each landmark runs a BFS, collects its
// tree edges at the root and pipelines them down the tree to every node;
// every node then relaxes its row through every landmark. Returns the count
// of landmarks used.
std::size_t landmark_phase(const Graph& g, double epsilon, DistanceMatrix& partial, std::uint64_t seed,
                           SimMetrics& m, const Constants& c = {}, const LandmarkOptions& opt = {});

// Distances d with d[s][s] = 0 and d[s][v] = 1 + min over neighbors for v != s
// are exactly the hop distances.
bool is_bfs_table(const Graph& g, const DistanceMatrix& d);

// epsilon <= 1/ceil(log2 n): Bellman-Ford with unit weights; epsilon < 1/2:
// depth-limited batches plus landmarks; otherwise all BFS trees at once.
ApspResult apsp_unweighted_tradeoff(const Graph& g, double epsilon, std::uint64_t seed, const Constants& c = {});

}  // namespace congest
