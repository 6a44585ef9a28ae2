#pragma once

#include <string>
#include <vector>

#include "congest/constants.hpp"
#include "congest/forest.hpp"
#include "congest/graph.hpp"
#include "congest/metrics.hpp"

namespace congest {

struct BsLevel {
  std::vector<std::uint8_t> sampled;  // S_i
  ClusterForest clusters;             // C_i; contains(v) iff v in V_i
  std::vector<std::uint8_t> low;      // L_i
  // F_i heads for each v in L_i, one per neighboring cluster of level i-1.
  std::vector<std::vector<NodeId>> f;
};

struct BsHierarchy {
  double epsilon = 1.0;
  unsigned kappa = 1;
  bool pruned = false;
  std::uint64_t seed = 0;
  std::vector<BsLevel> levels;  // kappa + 1 entries
  // Per edge id: tree edge of some cluster at some level.
  std::vector<std::uint8_t> cluster_edge;
  SimMetrics metrics;

  std::size_t n() const { return levels.empty() ? 0 : levels[0].sampled.size(); }
  // Level i with v in L_i, or 0 if none (n = 1).
  unsigned low_level(NodeId v) const;
  std::size_t f_edge_count() const;
  // Clusters containing v, one per level where v is clustered (level, center).
  std::vector<std::pair<unsigned, NodeId>> memberships(NodeId v) const;
  void refresh_cluster_edges(const Graph& g);
  std::string to_json() const;
};

unsigned kappa_for(double epsilon);
// Proper-subtree size threshold ceil(n^(1-eps)) used by pruning.
std::uint64_t prune_threshold(std::size_t n, double epsilon);
// F_i degree bound c * n^eps * ln n.
double bs_degree_bound(std::size_t n, double epsilon, const Constants& c);

// One construction attempt, charged as distributed programs. Throws
// WhpFailure("bs degree") when property (b) fails.
BsHierarchy build_bs_hierarchy(const Graph& g, double epsilon, std::uint64_t seed, const Constants& c = {});
BsHierarchy prune_hierarchy(const Graph& g, const BsHierarchy& h);
// Construction, pruning and property (b) check with the reseed protocol.
BsHierarchy build_pruned_hierarchy(const Graph& g, double epsilon, std::uint64_t seed, const Constants& c = {});

struct HierarchyEnsemble {
  std::size_t zeta = 1;
  std::vector<BsHierarchy> hierarchies;
  SimMetrics metrics;
  std::size_t hierarchy_of(std::size_t component) const { return component % zeta; }
};

HierarchyEnsemble build_ensemble(const Graph& g, double epsilon, std::uint64_t seed, const Constants& c = {});

// Largest number of ensemble hierarchies that share one cluster edge.
std::size_t max_cluster_multiplicity(const HierarchyEnsemble& ens);

struct RarityEstimate {
  std::size_t builds = 0;
  double max_rate = 0;   // worst edge: fraction of builds with it as a cluster edge
  double mean_rate = 0;  // averaged over edges
  double bound = 0;      // rarity_c * kappa * n^-eps
};

// Builds `builds` pruned hierarchies on independent seeds.
RarityEstimate cluster_edge_rarity(const Graph& g, double epsilon, std::size_t builds, std::uint64_t seed,
                                   const Constants& c = {});

struct HierarchyReport {
  bool structure = true;          // level shapes, partitions, forests
  bool radius = true;             // property (a)
  std::size_t max_f_degree = 0;   // property (b), compared by the caller
  bool f_distinct = true;         // each F_i edge hits a distinct foreign cluster
  bool coverage = true;           // property (c)
  std::size_t coverage_checked = 0;
  bool subtree_bound = true;      // pruned: proper subtrees < threshold
  std::uint64_t max_proper_subtree = 0;
  std::vector<std::string> problems;
};

// Checks (a), (b), (c) and, for pruned hierarchies, the subtree bound.
// Property (c) is checked on every edge, or on `sample_edges` random edges
// when nonzero.
HierarchyReport check_hierarchy(const Graph& g, const BsHierarchy& h, std::size_t sample_edges = 0,
                                std::uint64_t seed = 0);

}  // namespace congest
