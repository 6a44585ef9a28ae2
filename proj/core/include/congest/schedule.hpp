#pragma once

#include <memory>
#include <string>
#include <vector>

#include "congest/constants.hpp"
#include "congest/engine.hpp"
#include "congest/program.hpp"

namespace congest {

// A broadcast program with its aggregation contract, inputs and a bound on
// its round complexity, ready to be simulated.
struct DecomposableAlgorithm {
  std::shared_ptr<const Program> program;
  std::shared_ptr<const AggregationContract> contract;
  std::vector<Record> inputs;
  std::uint64_t round_bound = 0;
  std::size_t components = 1;
};

inline constexpr std::int64_t kNoDepthLimit = -1;

// Several BFS runs combined into one broadcast program. Run j starts at
// logical round delays[j]; every logical round spans `slots` program rounds
// and a node broadcasts one pending (j, dist) per slot, in the order the runs
// reached it. A node that reaches `depth_limit` records its distance but does
// not forward. Throws WhpFailure("schedule slots") when a node has more
// pending broadcasts than slots.
// State: [logical round, ncur, nnxt, dist[l], parent[l], cur[l], nxt[l]].
// Output: [dist[l], parent[l]], -1 where unreached.
class ScheduledBfsProgram final : public Program {
 public:
  ScheduledBfsProgram(std::vector<NodeId> sources, std::vector<std::uint32_t> delays, std::uint32_t slots,
                      std::int64_t depth_limit = kNoDepthLimit);
  Mode mode() const override { return Mode::Bcongest; }
  std::string name() const override { return "scheduled_bfs"; }
  State init(const NodeContext& ctx, const Record& input, RandomStream& rng) const override;
  std::optional<Message> broadcast(const NodeContext& ctx, const State& s, std::uint64_t round) const override;
  void transition(const NodeContext& ctx, State& s, std::uint64_t round, std::span<const Delivery> inbox,
                  RandomStream& rng) const override;
  Record output(const NodeContext& ctx, const State& s) const override;
  bool quiescent(const NodeContext& ctx, const State& s) const override;

  std::size_t runs() const { return sources_.size(); }
  std::uint32_t slots() const { return slots_; }
  const std::vector<NodeId>& sources() const { return sources_; }
  const std::vector<std::uint32_t>& delays() const { return delays_; }
  std::uint64_t logical_round(std::uint64_t round) const { return (round - 1) / slots_ + 1; }

 private:
  void start_own(const NodeContext& ctx, State& s) const;
  std::vector<NodeId> sources_;
  std::vector<std::uint32_t> delays_;
  std::uint32_t slots_;
  std::int64_t limit_;
  std::vector<std::vector<std::uint32_t>> own_;  // per node id: runs it sources, by delay
};

// Slots per logical round: ceil(slot_c * ceil(log2 n)), at least 1.
std::uint32_t schedule_slots(std::size_t n, const Constants& c);
// Distinct sources a node may hear per logical round: source_audit_c * ln n.
double source_audit_bound(std::size_t n, const Constants& c);

// BFS from every node in `sources` with delays drawn uniformly from
// [1, sources.size()] using the shared seed. The contract keeps one entry per
// run and is sized for the audit bound.
DecomposableAlgorithm schedule_bfs(std::size_t n, const std::vector<NodeId>& sources, std::int64_t depth_limit,
                                   std::uint64_t shared_seed, const Constants& c = {});

// Records, per node and logical round, the distinct runs heard.
class SourceAudit final : public RunObserver {
 public:
  SourceAudit(std::size_t n, std::uint32_t slots) : slots_(slots), cur_(n, 0), heard_(n) {}
  void before_transition(const NodeContext& ctx, std::uint64_t round, const State& state,
                         std::span<const Delivery> inbox) override;
  std::size_t max_distinct() const { return max_; }

 private:
  std::uint32_t slots_;
  std::vector<std::uint64_t> cur_;
  std::vector<std::vector<std::int64_t>> heard_;
  std::size_t max_ = 0;
};

struct CentralSchedule {
  std::uint64_t length = 0;
  std::uint64_t congestion = 0;  // max load of a directed edge, summed over components
  std::uint64_t dilation = 0;    // longest component
  std::vector<std::uint64_t> delays;
  unsigned attempts = 1;
};

// Merges independent traced executions into one: each starts after a random
// delay in [0, ceil(congestion / log2 n)], and every global round in which a
// directed edge carries k > 1 messages is expanded into k rounds. Throws
// WhpFailure("central schedule") after the reseeds when the length exceeds
// schedule_c (congestion + dilation log2 n).
CentralSchedule central_schedule(const std::vector<const Trace*>& components, std::size_t n, std::uint64_t seed,
                                 const Constants& c = {});

}  // namespace congest
