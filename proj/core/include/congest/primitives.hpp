#pragma once

#include <vector>

#include "congest/engine.hpp"
#include "congest/program.hpp"

namespace congest {

// Min-id flooding. Output: [leader].
class LeaderElectionProgram final : public Program {
 public:
  Mode mode() const override { return Mode::Bcongest; }
  std::string name() const override { return "leader_election"; }
  State init(const NodeContext& ctx, const Record& input, RandomStream& rng) const override;
  std::optional<Message> broadcast(const NodeContext& ctx, const State& s, std::uint64_t round) const override;
  void transition(const NodeContext& ctx, State& s, std::uint64_t round, std::span<const Delivery> inbox,
                  RandomStream& rng) const override;
  Record output(const NodeContext& ctx, const State& s) const override;
  bool quiescent(const NodeContext& ctx, const State& s) const override;
};

// BFS tree from `root`; message (dist, parent) lets parents learn children.
// Output: [dist, parent, children...].
class TreeBfsProgram final : public Program {
 public:
  explicit TreeBfsProgram(NodeId root) : root_(root) {}
  Mode mode() const override { return Mode::Bcongest; }
  std::string name() const override { return "tree_bfs"; }
  State init(const NodeContext& ctx, const Record& input, RandomStream& rng) const override;
  std::optional<Message> broadcast(const NodeContext& ctx, const State& s, std::uint64_t round) const override;
  void transition(const NodeContext& ctx, State& s, std::uint64_t round, std::span<const Delivery> inbox,
                  RandomStream& rng) const override;
  Record output(const NodeContext& ctx, const State& s) const override;
  bool quiescent(const NodeContext& ctx, const State& s) const override;

 private:
  NodeId root_;
};

// Bottom-up aggregation over rooted trees.
// Input: [parent (-1 root or not in tree), value, children...].
// With a split threshold T, a non-root whose residual subtree size reaches T
// cuts itself off and reports 0 upward. Output: [accumulated, split].
class ConvergecastProgram final : public Program {
 public:
  enum class Op { Sum, Max };
  explicit ConvergecastProgram(Op op, std::int64_t split_threshold = -1) : op_(op), threshold_(split_threshold) {}
  Mode mode() const override { return Mode::Congest; }
  std::string name() const override { return "convergecast"; }
  State init(const NodeContext& ctx, const Record& input, RandomStream& rng) const override;
  void send(const NodeContext& ctx, const State& s, std::uint64_t round, Outbox& out) const override;
  void transition(const NodeContext& ctx, State& s, std::uint64_t round, std::span<const Delivery> inbox,
                  RandomStream& rng) const override;
  Record output(const NodeContext& ctx, const State& s) const override;
  bool quiescent(const NodeContext& ctx, const State& s) const override;

 private:
  void finish(State& s) const;
  Op op_;
  std::int64_t threshold_;
};

// Top-down value propagation. Input: [is_root, value, children...].
// Output: [value, depth]; value -1 when unreached.
class TreeCastProgram final : public Program {
 public:
  Mode mode() const override { return Mode::Congest; }
  std::string name() const override { return "tree_cast"; }
  State init(const NodeContext& ctx, const Record& input, RandomStream& rng) const override;
  void send(const NodeContext& ctx, const State& s, std::uint64_t round, Outbox& out) const override;
  void transition(const NodeContext& ctx, State& s, std::uint64_t round, std::span<const Delivery> inbox,
                  RandomStream& rng) const override;
  Record output(const NodeContext& ctx, const State& s) const override;
  bool quiescent(const NodeContext& ctx, const State& s) const override;
};

// Pipelined dissemination of W words from the root down a tree.
// Input: [is_root, W, children...]. Output: [words_received].
class PipelineCastProgram final : public Program {
 public:
  Mode mode() const override { return Mode::Congest; }
  std::string name() const override { return "pipeline_cast"; }
  State init(const NodeContext& ctx, const Record& input, RandomStream& rng) const override;
  void send(const NodeContext& ctx, const State& s, std::uint64_t round, Outbox& out) const override;
  void transition(const NodeContext& ctx, State& s, std::uint64_t round, std::span<const Delivery> inbox,
                  RandomStream& rng) const override;
  Record output(const NodeContext& ctx, const State& s) const override;
  bool quiescent(const NodeContext& ctx, const State& s) const override;
};

// One broadcast per active node. Input: [active, fields...] (at most 4 fields).
// Output: flattened entries [sender, size, f0, f1, f2, f3] per neighbor heard.
class NeighborExchangeProgram final : public Program {
 public:
  Mode mode() const override { return Mode::Bcongest; }
  std::string name() const override { return "neighbor_exchange"; }
  State init(const NodeContext& ctx, const Record& input, RandomStream& rng) const override;
  std::optional<Message> broadcast(const NodeContext& ctx, const State& s, std::uint64_t round) const override;
  void transition(const NodeContext& ctx, State& s, std::uint64_t round, std::span<const Delivery> inbox,
                  RandomStream& rng) const override;
  Record output(const NodeContext& ctx, const State& s) const override;
  bool quiescent(const NodeContext& ctx, const State& s) const override;
};

// One message to a chosen neighbor. Input: [target or -1]. Output: [senders...].
class NotifyProgram final : public Program {
 public:
  Mode mode() const override { return Mode::Congest; }
  std::string name() const override { return "notify"; }
  State init(const NodeContext& ctx, const Record& input, RandomStream& rng) const override;
  void send(const NodeContext& ctx, const State& s, std::uint64_t round, Outbox& out) const override;
  void transition(const NodeContext& ctx, State& s, std::uint64_t round, std::span<const Delivery> inbox,
                  RandomStream& rng) const override;
  Record output(const NodeContext& ctx, const State& s) const override;
  bool quiescent(const NodeContext& ctx, const State& s) const override;
};

struct NeighborInfo {
  NodeId from;
  Message msg;
};
std::vector<std::vector<NeighborInfo>> decode_exchange(const std::vector<Record>& outputs);

// Leader, BFS tree rooted at the leader, node count known to everyone.
struct GlobalSetup {
  NodeId leader = 0;
  std::vector<std::int64_t> parent;
  std::vector<std::int64_t> depth;
  std::vector<std::vector<NodeId>> children;
  std::size_t counted_n = 0;
  std::uint32_t height = 0;
};

GlobalSetup global_setup(const Graph& g, std::uint64_t seed, SimMetrics& m);
// Renaming to [0,n) via subtree counts and offsets; ids are already dense so
// only the cost is charged.
void charge_renaming(const Graph& g, const GlobalSetup& s, std::uint64_t seed, SimMetrics& m);
// Leader disseminates `words` random words down the tree.
void charge_shared_randomness(const Graph& g, const GlobalSetup& s, std::size_t words, std::uint64_t seed,
                              SimMetrics& m);
// Runs a sub-program and absorbs its cost into m under `part`.
RunResult run_part(const std::string& part, const Graph& g, const Program& prog, const std::vector<Record>& inputs,
                   std::uint64_t max_rounds, std::uint64_t seed, SimMetrics& m);

}  // namespace congest
