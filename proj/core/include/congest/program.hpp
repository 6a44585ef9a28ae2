#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "congest/graph.hpp"
#include "congest/message.hpp"
#include "congest/random.hpp"

namespace congest {

enum class Mode { Congest, Bcongest };

// What a node knows locally: its id, the network size and its incident edges.
struct NodeContext {
  NodeId id = 0;
  std::size_t n = 0;
  std::span<const NodeId> nbrs;
  std::span<const EdgeId> edges;
  std::span<const std::int64_t> weights;

  std::size_t degree() const { return nbrs.size(); }
  // Position of u in nbrs, or -1.
  std::ptrdiff_t index_of(NodeId u) const;
};

NodeContext make_context(const Graph& g, NodeId v);

using Outbox = std::vector<std::pair<NodeId, Message>>;

// A replayable per-node program. emit is a pure function of the state;
// randomness is only available to init and transition, through the stream
// for (node, round).
class Program {
 public:
  virtual ~Program() = default;
  virtual Mode mode() const = 0;
  virtual std::string name() const = 0;
  virtual State init(const NodeContext& ctx, const Record& input, RandomStream& rng) const = 0;
  virtual std::optional<Message> broadcast(const NodeContext&, const State&, std::uint64_t) const {
    return std::nullopt;
  }
  virtual void send(const NodeContext&, const State&, std::uint64_t, Outbox&) const {}
  virtual void transition(const NodeContext& ctx, State& s, std::uint64_t round,
                          std::span<const Delivery> inbox, RandomStream& rng) const = 0;
  virtual Record output(const NodeContext& ctx, const State& s) const = 0;
  // No pending emission unless new messages arrive.
  virtual bool quiescent(const NodeContext& ctx, const State& s) const = 0;
};

// Compression of a receiver's inbox. Must return a subset of msgs such that
// the transition on the union of per-part aggregates equals the transition
// on the full inbox, for any partition or overlapping cover of the inbox.
class AggregationContract {
 public:
  virtual ~AggregationContract() = default;
  virtual std::vector<Delivery> aggregate(const NodeContext& receiver, std::uint64_t round,
                                          std::span<const Delivery> msgs) const = 0;
  virtual std::size_t max_words() const { return 8; }
};

}  // namespace congest
