#pragma once

#include "congest/program.hpp"

namespace congest {

// CONGEST token flood: a node forwards the token once, to every neighbor it
// did not receive it from. Output: [has_token, round_received].
class FloodProgram final : public Program {
 public:
  explicit FloodProgram(NodeId source) : source_(source) {}
  Mode mode() const override { return Mode::Congest; }
  std::string name() const override { return "flood"; }
  State init(const NodeContext& ctx, const Record& input, RandomStream& rng) const override;
  void send(const NodeContext& ctx, const State& s, std::uint64_t round, Outbox& out) const override;
  void transition(const NodeContext& ctx, State& s, std::uint64_t round, std::span<const Delivery> inbox,
                  RandomStream& rng) const override;
  Record output(const NodeContext& ctx, const State& s) const override;
  bool quiescent(const NodeContext& ctx, const State& s) const override;

 private:
  NodeId source_;
};

// Broadcast token flood: each node broadcasts once after first hearing the
// token. Output: [has_token, round_received].
class BroadcastFloodProgram final : public Program {
 public:
  explicit BroadcastFloodProgram(NodeId source) : source_(source) {}
  Mode mode() const override { return Mode::Bcongest; }
  std::string name() const override { return "broadcast_flood"; }
  State init(const NodeContext& ctx, const Record& input, RandomStream& rng) const override;
  std::optional<Message> broadcast(const NodeContext& ctx, const State& s, std::uint64_t round) const override;
  void transition(const NodeContext& ctx, State& s, std::uint64_t round, std::span<const Delivery> inbox,
                  RandomStream& rng) const override;
  Record output(const NodeContext& ctx, const State& s) const override;
  bool quiescent(const NodeContext& ctx, const State& s) const override;

 private:
  NodeId source_;
};

// Single-source BFS with optional depth limit. Message (source, dist).
// Output: [dist, parent], -1 when not reached.
class BfsProgram final : public Program {
 public:
  explicit BfsProgram(NodeId source, std::int64_t depth_limit = -1) : source_(source), limit_(depth_limit) {}
  Mode mode() const override { return Mode::Bcongest; }
  std::string name() const override { return "bfs"; }
  State init(const NodeContext& ctx, const Record& input, RandomStream& rng) const override;
  std::optional<Message> broadcast(const NodeContext& ctx, const State& s, std::uint64_t round) const override;
  void transition(const NodeContext& ctx, State& s, std::uint64_t round, std::span<const Delivery> inbox,
                  RandomStream& rng) const override;
  Record output(const NodeContext& ctx, const State& s) const override;
  bool quiescent(const NodeContext& ctx, const State& s) const override;

 private:
  NodeId source_;
  std::int64_t limit_;
};

// Keeps, per source field f[0], the delivery with the smallest (f[1], sender).
class MinDistanceContract final : public AggregationContract {
 public:
  explicit MinDistanceContract(std::size_t max_words = 8) : max_words_(max_words) {}
  std::size_t max_words() const override { return max_words_; }
  std::vector<Delivery> aggregate(const NodeContext& receiver, std::uint64_t round,
                                  std::span<const Delivery> msgs) const override;

 private:
  std::size_t max_words_;
};

// Pipelined Bellman-Ford for weighted APSP. Each round a node broadcasts one
// improved estimate, the pending source with the smallest (distance, source).
// Message (source, dist_hi, dist_lo). Output: distance row, -1 if unreachable.
class BellmanFordApspProgram final : public Program {
 public:
  Mode mode() const override { return Mode::Bcongest; }
  std::string name() const override { return "bellman_ford_apsp"; }
  State init(const NodeContext& ctx, const Record& input, RandomStream& rng) const override;
  std::optional<Message> broadcast(const NodeContext& ctx, const State& s, std::uint64_t round) const override;
  void transition(const NodeContext& ctx, State& s, std::uint64_t round, std::span<const Delivery> inbox,
                  RandomStream& rng) const override;
  Record output(const NodeContext& ctx, const State& s) const override;
  bool quiescent(const NodeContext& ctx, const State& s) const override;

 private:
  static std::int64_t pick(const State& s, std::size_t n);
};

// Broadcasts nothing and stops immediately.
class SilentProgram final : public Program {
 public:
  explicit SilentProgram(Mode m = Mode::Bcongest) : mode_(m) {}
  Mode mode() const override { return mode_; }
  std::string name() const override { return "silent"; }
  State init(const NodeContext&, const Record&, RandomStream&) const override { return {}; }
  void transition(const NodeContext&, State&, std::uint64_t, std::span<const Delivery>,
                  RandomStream&) const override {}
  Record output(const NodeContext&, const State&) const override { return {}; }
  bool quiescent(const NodeContext&, const State&) const override { return true; }

 private:
  Mode mode_;
};

}  // namespace congest
