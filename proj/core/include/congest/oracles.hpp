#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "congest/graph.hpp"

namespace congest {

// Dense n x n distances; kInfinity marks unreachable pairs.
class DistanceMatrix {
 public:
  static constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max();

  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, kInfinity) {}

  std::size_t n() const { return n_; }
  std::int64_t at(NodeId u, NodeId v) const { return d_[static_cast<std::size_t>(u) * n_ + v]; }
  void set(NodeId u, NodeId v, std::int64_t d) { d_[static_cast<std::size_t>(u) * n_ + v] = d; }
  // Keeps the smaller of the current entry and d.
  void relax(NodeId u, NodeId v, std::int64_t d);
  const std::vector<std::int64_t>& data() const { return d_; }
  std::size_t infinite_count() const;
  bool operator==(const DistanceMatrix&) const = default;

  // Zero diagonal, symmetry (when requested) and the triangle inequality.
  // Returns a description of every kind of violation found.
  std::vector<std::string> validate(bool symmetric = true) const;

  // Row-major little-endian int64 values.
  std::string to_binary() const;
  static DistanceMatrix from_binary(const std::string& bytes, std::size_t n);
  // {"n", "checksum" (FNV-1a 64 of the binary form, hex), "infinite"}.
  std::string summary_json() const;

  // Entry u,v of a per-node output table, -1 meaning unreachable.
  static DistanceMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> d_;
};

std::uint64_t fnv1a64(const std::string& bytes);

DistanceMatrix bfs_apsp(const Graph& g);
DistanceMatrix dijkstra_apsp(const Graph& g);

// Maximum matching in a bipartite graph; mate[v] or kNoNode.
std::vector<NodeId> hopcroft_karp(const Graph& g);
std::size_t matching_size(const std::vector<NodeId>& mate);
// Every v matched to a neighbor that is matched back.
bool is_matching(const Graph& g, const std::vector<NodeId>& mate);
// Edge list "u v" per line, u < v, ascending.
std::string matching_edge_list(const std::vector<NodeId>& mate);

}  // namespace congest
