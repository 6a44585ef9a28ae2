#pragma once

#include <vector>

#include "congest/constants.hpp"
#include "congest/forest.hpp"
#include "congest/graph.hpp"
#include "congest/metrics.hpp"
#include "congest/program.hpp"

namespace congest {

// Exponential-shift clustering as a broadcast program. Every node draws a
// geometric level delta (P[delta >= k] = exp(-beta k), capped) and starts
// its own cluster in round cap - delta unless reached earlier. A node joins
// the first cluster to reach it, preferring the smaller center id, and
// broadcasts (center, depth) once. Output: [center, parent, depth,
// (neighbor, neighbor's center)...].
class ShiftedClusteringProgram final : public Program {
 public:
  ShiftedClusteringProgram(double beta, std::uint32_t cap) : beta_(beta), cap_(cap) {}
  Mode mode() const override { return Mode::Bcongest; }
  std::string name() const override { return "shifted_clustering"; }
  State init(const NodeContext& ctx, const Record& input, RandomStream& rng) const override;
  std::optional<Message> broadcast(const NodeContext& ctx, const State& s, std::uint64_t round) const override;
  void transition(const NodeContext& ctx, State& s, std::uint64_t round, std::span<const Delivery> inbox,
                  RandomStream& rng) const override;
  Record output(const NodeContext& ctx, const State& s) const override;
  bool quiescent(const NodeContext& ctx, const State& s) const override;

 private:
  double beta_;
  std::uint32_t cap_;
};

struct LdcDecomposition {
  double beta = 0.5;
  ClusterForest forest;
  // F edges out of each node, one per neighboring foreign cluster; heads ascending.
  std::vector<std::vector<NodeId>> f_out;
  std::uint32_t r_bound = 0;
  std::uint32_t d_bound = 0;
  std::uint32_t max_diameter = 0;
  std::uint32_t max_f_degree = 0;
  std::size_t cluster_count = 0;
  SimMetrics metrics;

  NodeId center(NodeId v) const { return static_cast<NodeId>(forest.center[v]); }
  bool has_f_edge(NodeId from, NodeId to) const;
};

// Level cap used by the clustering program: ceil(2 ln n / beta) + 1.
std::uint32_t ldc_level_cap(std::size_t n, double beta);

// Builds and validates one decomposition. Throws WhpFailure naming the
// violated bound ("ldc diameter" or "ldc degree").
LdcDecomposition ldc_decompose(const Graph& g, double beta, std::uint64_t seed, const Constants& c = {});

// Strong diameter of the subgraph induced by `members`; -1 if disconnected.
std::int64_t strong_diameter(const Graph& g, const std::vector<NodeId>& members);

struct LdcReport {
  std::uint32_t max_diameter = 0;
  std::uint32_t max_f_degree = 0;
  bool partition = true;
  bool trees_valid = true;
  bool coverage = true;
  bool f_inter_cluster = true;
  bool ok(std::uint32_t r_bound, std::uint32_t d_bound) const {
    return partition && trees_valid && coverage && f_inter_cluster && max_diameter <= r_bound &&
           max_f_degree <= d_bound;
  }
};

// Independent check of all decomposition properties.
LdcReport check_ldc(const Graph& g, const LdcDecomposition& d);

}  // namespace congest
