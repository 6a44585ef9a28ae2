#include <gtest/gtest.h>

#include "congest/bcsim.hpp"
#include "congest/errors.hpp"
#include "congest/programs.hpp"

using namespace congest;

namespace {

// Min of random values drawn at init, plus a coin added every round, so that
// outputs depend on both init and transition randomness.
class RandomMinProgram final : public Program {
 public:
  Mode mode() const override { return Mode::Bcongest; }
  std::string name() const override { return "random_min"; }
  State init(const NodeContext&, const Record&, RandomStream& rng) const override {
    return {static_cast<std::int64_t>(rng.uniform_int(0, 1000)), 1, 0};
  }
  std::optional<Message> broadcast(const NodeContext&, const State& s, std::uint64_t) const override {
    if (!s[1]) return std::nullopt;
    return Message::make(1, {s[0]});
  }
  void transition(const NodeContext&, State& s, std::uint64_t, std::span<const Delivery> in,
                  RandomStream& rng) const override {
    std::int64_t best = s[0];
    for (const auto& d : in) best = std::min(best, d.msg.f[0]);
    s[1] = best < s[0] ? 1 : 0;
    s[0] = best;
    s[2] += static_cast<std::int64_t>(rng.uniform_int(0, 1));
  }
  Record output(const NodeContext&, const State& s) const override { return {s[0], s[2]}; }
  bool quiescent(const NodeContext&, const State& s) const override { return s[1] == 0; }
};

// Every node broadcasts its id in round 1 only.
class OnceProgram final : public Program {
 public:
  Mode mode() const override { return Mode::Bcongest; }
  std::string name() const override { return "once"; }
  State init(const NodeContext&, const Record&, RandomStream&) const override { return {1, 0}; }
  std::optional<Message> broadcast(const NodeContext& ctx, const State& s, std::uint64_t) const override {
    if (!s[0]) return std::nullopt;
    return Message::make(1, {static_cast<std::int64_t>(ctx.id)});
  }
  void transition(const NodeContext&, State& s, std::uint64_t, std::span<const Delivery> in,
                  RandomStream&) const override {
    s[0] = 0;
    for (const auto& d : in) s[1] += d.msg.f[0] + 1;
  }
  Record output(const NodeContext&, const State& s) const override { return {s[1]}; }
  bool quiescent(const NodeContext&, const State& s) const override { return s[0] == 0; }
};

constexpr std::uint64_t kBound = 100000;

}  // namespace

TEST(BcSim, BfsOnPathMatchesDirectRun) {
  Graph g = generate(GraphKind::Path, 8, 0);
  BfsProgram prog(0);
  auto direct = run_bcongest(g, prog, {}, kBound, 1);
  auto sim = simulate(g, prog, {}, kBound, 1);
  EXPECT_EQ(sim.outputs, direct.outputs);
  for (NodeId v = 1; v < 8; ++v) EXPECT_EQ(sim.outputs[v][1], v - 1);
  EXPECT_EQ(sim.simulated_rounds, direct.metrics.rounds);
}

TEST(BcSim, SilentProgramCostsOnlyPreprocessing) {
  Graph g = generate_connected({GraphKind::Gnp, 40, 0.2}, 3);
  SilentProgram prog;
  auto sim = simulate(g, prog, {}, 50, 3);
  EXPECT_EQ(sim.metrics.messages, sim.preprocessing_messages);
  EXPECT_EQ(sim.simulated_rounds, 0u);
  EXPECT_TRUE(sim.metrics.per_phase.empty());
}

TEST(BcSim, SingleNode) {
  Graph g(1, {});
  auto pre = preprocess(g, SilentProgram{}, {}, 1);
  EXPECT_EQ(pre.metrics.counters.at("bcsim.upcast.messages"), 0u);
  EXPECT_EQ(pre.ledger.members.size(), 1u);
}

TEST(BcSim, StarLedgerHoldsInputs) {
  Graph g = generate(GraphKind::Star, 5, 0);
  std::vector<Record> in{{10}, {11}, {12}, {13}, {14}};
  auto pre = preprocess(g, SilentProgram{}, in, 2);
  EXPECT_EQ(pre.ledger.input, in);
  std::size_t covered = 0;
  for (const auto& [c, mem] : pre.ledger.members) covered += mem.size();
  EXPECT_EQ(covered, 5u);
  for (NodeId v = 0; v < 5; ++v) EXPECT_EQ(pre.ledger.ctx[v].degree(), g.degree(v));
}

TEST(BcSim, PreprocessingMessageBound) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    Graph g = generate_connected({GraphKind::Gnp, 128, 0.2}, s);
    std::vector<Record> in(g.n(), Record{1, 2});
    auto pre = preprocess(g, SilentProgram{}, in, s);
    const double in_fields = static_cast<double>(input_bits(g, in)) / field_bits(g.n());
    EXPECT_LE(static_cast<double>(pre.metrics.messages), 8.0 * (in_fields + g.m() * log2n(g.n())));
  }
}

TEST(BcSim, OracleEquivalenceWithShadow) {
  for (std::uint64_t s = 0; s < 8; ++s) {
    Graph g = generate_connected({GraphKind::Gnp, 48, 0.15}, s);
    BcSimOptions opt;
    opt.shadow_check = true;
    opt.check_f_edges = true;
    BfsProgram bfs(static_cast<NodeId>(s % g.n()));
    BroadcastFloodProgram flood(0);
    RandomMinProgram rmin;
    for (const Program* p : std::initializer_list<const Program*>{&bfs, &flood, &rmin}) {
      auto direct = run_bcongest(g, *p, {}, kBound, s);
      auto sim = simulate(g, *p, {}, kBound, s, {}, opt);
      EXPECT_EQ(sim.outputs, direct.outputs) << p->name() << " seed " << s;
      std::uint64_t b = 0;
      for (const auto& st : sim.metrics.per_phase) b += st.broadcasters;
      EXPECT_EQ(b, direct.metrics.broadcasts);
    }
  }
}

TEST(BcSim, WeightedBellmanFord) {
  for (std::uint64_t s = 0; s < 3; ++s) {
    GenSpec spec{GraphKind::Gnp, 24, 0.3, 0, true, 50};
    Graph g = generate_connected(spec, s);
    BellmanFordApspProgram prog;
    auto direct = run_bcongest(g, prog, {}, kBound, s);
    auto sim = simulate(g, prog, {}, kBound, s);
    EXPECT_EQ(sim.outputs, direct.outputs);
  }
}

TEST(BcSim, MessageBoundOnCorpus) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Graph g = generate_connected({GraphKind::Gnp, 64, 0.3}, s);
    BfsProgram prog(0);
    auto direct = run_bcongest(g, prog, {}, kBound, s);
    auto sim = simulate(g, prog, {}, kBound, s);
    const double bound = simulation_message_bound(g.n(), sim.metrics.in_bits, sim.metrics.out_bits,
                                                  direct.metrics.broadcasts, Constants{}.sim_message_c);
    EXPECT_LE(static_cast<double>(sim.metrics.messages), bound);
  }
}

TEST(BcSim, PerPhaseMessagesScaleWithBroadcasters) {
  Graph g = generate_connected({GraphKind::Gnp, 64, 0.2}, 4);
  auto sim = simulate(g, RandomMinProgram{}, {}, kBound, 4);
  const double lg = log2n(g.n());
  ASSERT_FALSE(sim.metrics.per_phase.empty());
  for (const auto& st : sim.metrics.per_phase) {
    const double c = 16;
    EXPECT_LE(static_cast<double>(st.messages_step1 + st.messages_step2), c * st.broadcasters * lg * lg + c);
    if (st.broadcasters == 0) EXPECT_EQ(st.messages_step1 + st.messages_step2, 0u);
  }
}

TEST(BcSim, PhaseWithoutBroadcastersIsFree) {
  Graph g = generate(GraphKind::Path, 4, 0);
  LdcDecomposition ldc;
  ldc.forest = ClusterForest::from_parents({-1, 0, 1, 2});
  ldc.f_out.assign(4, {});
  CenterLedger l;
  l.members = ldc.forest.clusters();
  SilentProgram prog;
  RandomStream rng(0);
  for (NodeId v = 0; v < 4; ++v) {
    l.ctx.push_back(make_context(g, v));
    l.state.push_back(prog.init(l.ctx[v], {}, rng));
  }
  SimMetrics m(g.m());
  auto st = run_phase(g, prog, ldc, l, 0, 10, m);
  EXPECT_EQ(st.messages_step1 + st.messages_step2, 0u);
  EXPECT_EQ(m.rounds, 20u);
}

TEST(BcSim, AdjacentSingletonsExchangeOverF) {
  Graph g = generate(GraphKind::Path, 2, 0);
  LdcDecomposition ldc;
  ldc.forest = ClusterForest::from_parents({-1, -1});
  ldc.f_out = {{1}, {0}};
  CenterLedger l;
  l.members = ldc.forest.clusters();
  OnceProgram prog;
  RandomStream rng(0);
  for (NodeId v = 0; v < 2; ++v) {
    l.ctx.push_back(make_context(g, v));
    l.state.push_back(prog.init(l.ctx[v], {}, rng));
  }
  SimMetrics m(g.m());
  auto st = run_phase(g, prog, ldc, l, 0, 10, m);
  EXPECT_EQ(st.broadcasters, 2u);
  EXPECT_EQ(st.messages_step1, 2u);
  EXPECT_EQ(st.messages_step2, 0u);
  EXPECT_EQ(prog.output(l.ctx[0], l.state[0]), (Record{2}));
  EXPECT_EQ(prog.output(l.ctx[1], l.state[1]), (Record{1}));
  EXPECT_TRUE(l.finished);
}

TEST(BcSim, ZeroBudgetConstantFails) {
  Graph g = generate_connected({GraphKind::Gnp, 32, 0.2}, 1);
  Constants c;
  c.c1 = 0;
  EXPECT_THROW(simulate(g, BfsProgram{0}, {}, kBound, 1, c), BudgetError);
}

TEST(BcSim, RoundBoundTooSmallTimesOut) {
  Graph g = generate(GraphKind::Path, 10, 0);
  try {
    simulate(g, BfsProgram{0}, {}, 3, 1);
    FAIL() << "expected timeout";
  } catch (const TimeoutError& e) {
    ASSERT_NE(e.partial(), nullptr);
    EXPECT_EQ(e.partial()->per_phase.size(), 3u);
  }
}

TEST(BcSim, RejectsPointToPointPrograms) {
  Graph g = generate(GraphKind::Path, 4, 0);
  EXPECT_THROW(simulate(g, FloodProgram{0}, {}, 10, 1), InvalidArgument);
  Graph h = generate(GraphKind::Gnp, 10, 1, 0.0);
  EXPECT_THROW(simulate(h, BfsProgram{0}, {}, 10, 1), DisconnectedGraph);
}

TEST(BcSim, RoundsChargeEveryPhase) {
  Graph g = generate(GraphKind::Path, 6, 0);
  auto a = simulate(g, BfsProgram{0}, {}, 10, 1);
  auto b = simulate(g, BfsProgram{0}, {}, 20, 1);
  EXPECT_EQ(b.metrics.rounds - a.metrics.rounds, 20 * a.phase_budget);
  EXPECT_EQ(a.metrics.messages, b.metrics.messages);
}

TEST(BcSim, ZeroBudgetFailsEvenWithOneCluster) {
  Graph g = generate(GraphKind::Clique, 8, 0);
  Constants c;
  c.c1 = 0;
  EXPECT_THROW(simulate(g, BfsProgram{0}, {}, 10, 1, c), BudgetError);
  EXPECT_NO_THROW(simulate(g, BfsProgram{0}, {}, 10, 1));
}
