#pragma once

#include <string>
#include <vector>

#include "congest/constants.hpp"
#include "congest/hierarchy.hpp"
#include "congest/schedule.hpp"

namespace congest {

struct AggSimOptions {
  // Compare all states with a lockstep direct run after every phase.
  bool shadow_check = false;
  // Star simulation: verify that every per-cluster-pair matching is maximal.
  bool check_matching = false;
  // Leader, BFS tree and node count; off when the caller already paid for it.
  bool run_setup = true;
  // Record every message in metrics.trace, rounds starting at 1.
  bool keep_trace = false;
};

struct AggSimResult {
  std::vector<Record> outputs;
  SimMetrics metrics;
  std::uint64_t simulated_rounds = 0;
  std::uint64_t phase_budget = 0;
  std::uint64_t max_phase_rounds = 0;
  std::uint64_t preprocessing_messages = 0;
  // Per-edge load of the phases, split by cluster-tree membership of the edge.
  std::vector<std::uint64_t> phase_congestion;
  std::uint64_t cluster_congestion = 0;
  std::uint64_t noncluster_congestion = 0;
  std::uint64_t matched_edges = 0;
};

// Phase budgets: ceil(c2 n log2 n) and ceil(c3 n^(1-eps) log2 n).
std::uint64_t general_phase_budget(std::size_t n, const Constants& c);
std::uint64_t star_phase_budget(std::size_t n, double epsilon, const Constants& c);

// Each simulated round p runs as one phase. Send: a broadcaster sends its
// message with its id over every incident F edge, and the center of every
// cluster C containing it builds, for each outside neighbor u with an F edge
// into C, the aggregate of the messages from C that u must receive; the
// aggregate travels to the F-edge endpoint and across. Receive: messages that
// came over F edges are upcast in every cluster of the receiver, and centers
// send each member the aggregate of what it must receive. Compute: every
// node transitions on the union of its aggregates. Each phase is charged the
// rounds its routing needs (at least one) and must fit the budget.
// Throws InvariantViolation when a node's aggregates do not cover exactly its
// broadcasting neighbors, ContractViolation on an oversized aggregate,
// BudgetError and TimeoutError as in the direct simulation.
AggSimResult simulate_general(const Graph& g, const BsHierarchy& h, const DecomposableAlgorithm& alg,
                              std::uint64_t seed, const Constants& c = {}, const AggSimOptions& opt = {});

// Hierarchies with kappa <= 2. Nodes outside the star clusters send over all
// their edges; star members send to their center, which matches broadcasters
// to members of each neighboring cluster by ascending edge id and ships one
// message plus one aggregate per matched edge. Star members also send
// directly to unclustered neighbors. Receive and compute as in the general
// simulation.
AggSimResult simulate_star(const Graph& g, const BsHierarchy& h, const DecomposableAlgorithm& alg,
                           std::uint64_t seed, const Constants& c = {}, const AggSimOptions& opt = {});

enum class SimKind { General, Star };

struct SmoothingOptions {
  SimKind kind = SimKind::General;
  // Run every batch on the first hierarchy instead of batch mod zeta.
  bool single_hierarchy = false;
  bool shadow_check = false;
};

struct SmoothingResult {
  std::vector<std::vector<Record>> outputs;  // per batch
  SimMetrics metrics;
  CentralSchedule schedule;
  std::vector<std::size_t> hierarchy_of;  // per batch
  // Load per edge attributed to batches whose hierarchy has it as a cluster
  // edge, and the remaining load.
  std::vector<std::uint64_t> cluster_load;
  std::vector<std::uint64_t> other_load;
  std::uint64_t max_cluster_congestion = 0;
  std::uint64_t max_noncluster_congestion = 0;
  std::vector<std::vector<std::uint64_t>> batch_load;  // per batch, per edge
};

// Simulates batch j on hierarchy j mod zeta and merges the executions with
// the central schedule. The leader setup is charged once.
SmoothingResult combine_with_smoothing(const Graph& g, const HierarchyEnsemble& ens,
                                       const std::vector<DecomposableAlgorithm>& batches, std::uint64_t seed,
                                       const Constants& c = {}, const SmoothingOptions& opt = {});

// Per-edge totals, cluster split and per-batch attribution as JSON.
std::string congestion_audit_json(const Graph& g, const SmoothingResult& r);

}  // namespace congest
