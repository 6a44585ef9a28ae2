#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace congest {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
// Directed use of an undirected edge: 2*edge + (from > to).
using DirEdge = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct Edge {
  NodeId u;
  NodeId v;
  std::int64_t w = 1;
  bool operator==(const Edge&) const = default;
};

class Graph {
 public:
  Graph() = default;
  // Validates and canonicalizes. Undirected edges are stored with u < v and
  // sorted; self-loops and duplicates are rejected.
  Graph(std::size_t n, std::vector<Edge> edges, bool directed = false, bool weighted = false);

  std::size_t n() const { return n_; }
  std::size_t m() const { return edges_.size(); }
  bool directed() const { return directed_; }
  bool weighted() const { return weighted_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  // Sorted neighbor ids; for directed graphs these are out-neighbors.
  std::span<const NodeId> neighbors(NodeId v) const {
    return {adj_.data() + offs_[v], adj_.data() + offs_[v + 1]};
  }
  // Edge id of each neighbor, aligned with neighbors(v).
  std::span<const EdgeId> incident(NodeId v) const {
    return {adj_edge_.data() + offs_[v], adj_edge_.data() + offs_[v + 1]};
  }
  std::span<const std::int64_t> neighbor_weights(NodeId v) const {
    return {adj_w_.data() + offs_[v], adj_w_.data() + offs_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offs_[v + 1] - offs_[v]; }

  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const;
  bool adjacent(NodeId u, NodeId v) const { return find_edge(u, v).has_value(); }
  // Directed use of the edge {u,v}; throws if not adjacent.
  DirEdge dir_edge(NodeId u, NodeId v) const;
  static EdgeId edge_of(DirEdge d) { return d >> 1; }

  std::size_t component_count() const { return components_; }
  bool connected() const { return components_ <= 1; }
  bool operator==(const Graph& o) const {
    return n_ == o.n_ && directed_ == o.directed_ && weighted_ == o.weighted_ && edges_ == o.edges_;
  }

 private:
  std::size_t n_ = 0;
  bool directed_ = false;
  bool weighted_ = false;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offs_{0};
  std::vector<NodeId> adj_;
  std::vector<EdgeId> adj_edge_;
  std::vector<std::int64_t> adj_w_;
  std::size_t components_ = 0;
};

enum class GraphKind { Path, Cycle, Grid, Clique, Star, Gnp, BipartiteGnp };

struct GenSpec {
  GraphKind kind = GraphKind::Path;
  std::size_t n = 1;
  double p = 0.0;
  // Left part size for bipartite graphs; 0 means n/2.
  std::size_t left = 0;
  bool weighted = false;
  // Weights drawn uniformly from [1, max_weight]; 0 means n^2.
  std::int64_t max_weight = 0;
};

GraphKind parse_graph_kind(std::string_view s);
std::string to_string(GraphKind k);

Graph generate(const GenSpec& spec, std::uint64_t seed);
Graph generate(GraphKind kind, std::size_t n, std::uint64_t seed, double p = 0.0);
// gnp retried on derived seeds until connected (bounded attempts).
Graph generate_connected(const GenSpec& spec, std::uint64_t seed, unsigned max_attempts = 64);

Graph load_edge_list(std::string_view text);
std::string save_edge_list(const Graph& g);

// Two-coloring; empty if not bipartite. side[v] in {0,1}.
std::optional<std::vector<std::uint8_t>> bipartition(const Graph& g);

// Hop distances from src; -1 when unreachable.
std::vector<std::int64_t> bfs_distances(const Graph& g, NodeId src);

void require_connected(const Graph& g);
void require_undirected(const Graph& g);

// ceil(log2(max(n,2))).
std::uint32_t ceil_log2(std::uint64_t n);
double log2n(std::size_t n);
// ceil(n^e) robust to rounding noise.
std::uint64_t ceil_pow(std::size_t n, double e);

}  // namespace congest
