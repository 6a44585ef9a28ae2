#pragma once

#include <map>
#include <span>
#include <vector>

#include "congest/graph.hpp"
#include "congest/message.hpp"
#include "congest/metrics.hpp"

namespace congest {

// Rooted cluster trees over graph edges. Nodes outside the forest have
// center -1.
struct ClusterForest {
  std::vector<std::int64_t> parent;
  std::vector<std::int64_t> center;
  std::vector<std::uint32_t> depth;

  // parent[v] = -1 marks a root; member[v] = false excludes v entirely.
  static ClusterForest from_parents(const std::vector<std::int64_t>& parent,
                                    const std::vector<std::uint8_t>* member = nullptr);
  std::size_t n() const { return parent.size(); }
  bool contains(NodeId v) const { return center[v] >= 0; }
  std::uint32_t max_depth() const;
  // center id -> members (ascending).
  std::map<NodeId, std::vector<NodeId>> clusters() const;
  // Throws PreconditionError unless every parent link is a graph edge and
  // the structure is acyclic with consistent depths.
  void validate(const Graph& g) const;
  // Children lists, ascending.
  std::vector<std::vector<NodeId>> children() const;
  // Directed hops from v up to its center.
  std::vector<DirEdge> up_path(const Graph& g, NodeId v) const;
};

// Store-and-forward routing of unit packets along fixed paths. Every directed
// edge forwards one packet per round; the waiting packet with the smallest
// (priority, arrival round, id) goes first.
class Router {
 public:
  explicit Router(const Graph& g);
  void add(std::span<const DirEdge> hops, std::uint32_t copies = 1, std::uint32_t priority = 0);
  void add_up(const ClusterForest& f, NodeId v, std::uint32_t copies = 1, std::uint32_t priority = 0);
  void add_down(const ClusterForest& f, NodeId v, std::uint32_t copies = 1, std::uint32_t priority = 0);
  void add_edge(NodeId from, NodeId to, std::uint32_t copies = 1, std::uint32_t priority = 0);
  std::size_t packets() const { return packets_.size(); }
  std::uint64_t hops() const { return hop_total_; }
  // Delivers everything, charging each hop to m, then advances m.rounds by
  // the schedule length, which is returned.
  std::uint64_t run(SimMetrics& m);

 private:
  struct Packet {
    std::uint32_t begin, end, cur, prio;
  };
  struct Key {
    std::uint32_t prio;
    std::uint64_t arrival;
    std::uint32_t id;
    bool operator>(const Key& o) const {
      if (prio != o.prio) return prio > o.prio;
      if (arrival != o.arrival) return arrival > o.arrival;
      return id > o.id;
    }
  };
  const Graph& g_;
  std::vector<DirEdge> hopbuf_;
  std::vector<Packet> packets_;
  std::uint64_t hop_total_ = 0;
  std::vector<std::vector<Key>> queues_;
  std::vector<std::uint8_t> active_flag_;
  std::vector<DirEdge> scratch_;
};

struct UpcastResult {
  // center -> (origin, word) in origin order.
  std::map<NodeId, std::vector<std::pair<NodeId, Message>>> collected;
  SimMetrics metrics;
};

struct DowncastResult {
  std::vector<std::vector<Message>> delivered;
  SimMetrics metrics;
};

UpcastResult upcast(const Graph& g, const ClusterForest& f, const std::vector<std::vector<Message>>& inputs,
                    const SimMetrics* parent = nullptr);
DowncastResult downcast(const Graph& g, const ClusterForest& f,
                        const std::map<NodeId, std::vector<std::pair<NodeId, Message>>>& root_messages,
                        const SimMetrics* parent = nullptr);

}  // namespace congest
