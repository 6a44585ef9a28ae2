#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "congest/graph.hpp"
#include "congest/metrics.hpp"
#include "congest/program.hpp"

namespace congest {

class RunObserver {
 public:
  virtual ~RunObserver() = default;
  // Called before node v applies its transition of `round`.
  virtual void before_transition(const NodeContext&, std::uint64_t /*round*/, const State& /*state*/,
                                 std::span<const Delivery> /*inbox*/) {}
  virtual void after_round(std::uint64_t /*round*/, const std::vector<State>& /*states*/) {}
};

struct RunResult {
  std::vector<Record> outputs;
  SimMetrics metrics;
};

std::uint64_t input_bits(const Graph& g, const std::vector<Record>& inputs);
std::uint64_t output_bits(std::size_t n, const std::vector<Record>& outputs);

// Lockstep executor. Round r: every node emits from its state after round
// r-1, messages are delivered, then every node applies its transition to the
// sender-sorted inbox. Round 0 is init.
class Stepper {
 public:
  Stepper(const Graph& g, const Program& prog, const std::vector<Record>& inputs, std::uint64_t seed,
          const SimMetrics* parent = nullptr, RunObserver* observer = nullptr);

  bool done() const { return done_; }
  std::uint64_t round() const { return round_; }
  void step();
  const std::vector<State>& states() const { return states_; }
  const NodeContext& context(NodeId v) const { return ctx_[v]; }
  SimMetrics& metrics() { return metrics_; }
  std::vector<Record> outputs() const;

 private:
  void refresh_done();

  const Graph& g_;
  const Program& prog_;
  std::uint64_t seed_;
  RunObserver* observer_;
  std::vector<NodeContext> ctx_;
  std::vector<State> states_;
  std::vector<std::vector<Delivery>> inbox_;
  SimMetrics metrics_;
  std::uint64_t round_ = 0;
  bool done_ = false;
  Outbox outbox_;
};

RunResult run_congest(const Graph& g, const Program& prog, const std::vector<Record>& inputs,
                      std::uint64_t max_rounds, std::uint64_t seed, const SimMetrics* parent = nullptr,
                      RunObserver* observer = nullptr);
RunResult run_bcongest(const Graph& g, const Program& prog, const std::vector<Record>& inputs,
                       std::uint64_t max_rounds, std::uint64_t seed, const SimMetrics* parent = nullptr,
                       RunObserver* observer = nullptr);

struct ContractReport {
  std::size_t checks = 0;
  std::size_t samples = 0;
  std::size_t max_words = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Replays random (state, inbox) pairs reached by a direct run on g and tests
// random partitions, overlapping covers and nested aggregation.
ContractReport verify_aggregation_contract(const Graph& g, const Program& prog, const AggregationContract& contract,
                                           const std::vector<Record>& inputs, std::size_t trials, std::uint64_t seed,
                                           std::uint64_t max_rounds = 1'000'000);

}  // namespace congest
