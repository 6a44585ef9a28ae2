#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>
#include <numeric>

#include "congest/aggsim.hpp"
#include "congest/errors.hpp"
#include "congest/programs.hpp"

using namespace congest;

namespace {

std::vector<NodeId> all_nodes(std::size_t n) {
  std::vector<NodeId> v(n);
  std::iota(v.begin(), v.end(), NodeId{0});
  return v;
}

// Distances and parents of a scheduled BFS output against plain BFS.
void expect_bfs_rows(const Graph& g, const std::vector<NodeId>& sources, const std::vector<Record>& out,
                     std::int64_t limit = kNoDepthLimit) {
  const std::size_t l = sources.size();
  for (std::size_t j = 0; j < l; ++j) {
    auto d = bfs_distances(g, sources[j]);
    for (NodeId v = 0; v < g.n(); ++v) {
      std::int64_t want = d[v];
      if (limit != kNoDepthLimit && want > limit) want = -1;
      ASSERT_EQ(out[v][j], want) << "run " << j << " node " << v;
      const std::int64_t par = out[v][l + j];
      if (want > 0) {
        ASSERT_TRUE(g.adjacent(v, static_cast<NodeId>(par)));
        ASSERT_EQ(out[static_cast<NodeId>(par)][j], want - 1);
      } else {
        ASSERT_EQ(par, -1);
      }
    }
  }
}

// Every node broadcasts its id once.
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

class IdentityContract final : public AggregationContract {
 public:
  explicit IdentityContract(std::size_t w) : w_(w) {}
  std::vector<Delivery> aggregate(const NodeContext&, std::uint64_t, std::span<const Delivery> m) const override {
    return {m.begin(), m.end()};
  }
  std::size_t max_words() const override { return w_; }

 private:
  std::size_t w_;
};

class ForgingContract final : public AggregationContract {
 public:
  std::vector<Delivery> aggregate(const NodeContext&, std::uint64_t, std::span<const Delivery> m) const override {
    std::vector<Delivery> out(m.begin(), m.end());
    if (!out.empty()) out[0].msg.f[0] += 1000;
    return out;
  }
};

DecomposableAlgorithm once_with(std::shared_ptr<const AggregationContract> c) {
  DecomposableAlgorithm a;
  a.program = std::make_shared<OnceProgram>();
  a.contract = std::move(c);
  a.round_bound = 4;
  return a;
}

constexpr std::uint64_t kBound = 1'000'000;

}  // namespace

TEST(ScheduledBfs, AllSourcesMatchOracle) {
  for (std::uint64_t s = 0; s < 4; ++s) {
    Graph g = generate_connected({GraphKind::Gnp, 64, 0.12}, s);
    auto src = all_nodes(g.n());
    auto alg = schedule_bfs(g.n(), src, kNoDepthLimit, s);
    auto r = run_bcongest(g, *alg.program, {}, alg.round_bound, s);
    expect_bfs_rows(g, src, r.outputs);
    EXPECT_LE(r.metrics.rounds, alg.round_bound);
    // One broadcast per (run, node): every node forwards every run once.
    EXPECT_EQ(r.metrics.broadcasts, g.n() * g.n());
  }
}

TEST(ScheduledBfs, DepthLimitOnPath) {
  Graph g = generate(GraphKind::Path, 10, 0);
  auto alg = schedule_bfs(g.n(), {0}, 3, 1);
  auto r = run_bcongest(g, *alg.program, {}, alg.round_bound, 1);
  for (NodeId v = 0; v < 10; ++v) EXPECT_EQ(r.outputs[v][0], v <= 3 ? std::int64_t{v} : -1) << v;
  // Nodes at the limit do not forward.
  EXPECT_EQ(r.metrics.broadcasts, 3u);
  expect_bfs_rows(g, {0}, r.outputs, 3);
}

TEST(ScheduledBfs, SingleRunTakesDelayPlusEccentricity) {
  Graph g = generate(GraphKind::Path, 6, 0);
  ScheduledBfsProgram prog({2}, {1}, 3);
  auto r = run_bcongest(g, prog, {}, kBound, 0);
  // The farthest node also forwards, so four logical rounds of three slots.
  EXPECT_EQ(r.metrics.rounds, 4u * 3);
  EXPECT_EQ(r.outputs[5][0], 3);
  EXPECT_EQ(r.outputs[5][1], 4);
}

TEST(ScheduledBfs, DelaysAreSharedAndInRange) {
  auto a = schedule_bfs(50, all_nodes(50), kNoDepthLimit, 9);
  auto b = schedule_bfs(50, all_nodes(50), kNoDepthLimit, 9);
  auto* pa = dynamic_cast<const ScheduledBfsProgram*>(a.program.get());
  auto* pb = dynamic_cast<const ScheduledBfsProgram*>(b.program.get());
  ASSERT_NE(pa, nullptr);
  EXPECT_EQ(pa->delays(), pb->delays());
  for (auto d : pa->delays()) {
    EXPECT_GE(d, 1u);
    EXPECT_LE(d, 50u);
  }
  EXPECT_EQ(pa->slots(), schedule_slots(50, Constants{}));
  EXPECT_EQ(pa->slots(), 12u);
}

TEST(ScheduledBfs, SlotOverflowIsWhpFailure) {
  Graph g = generate(GraphKind::Star, 6, 0);
  ScheduledBfsProgram prog({1, 2, 3, 4, 5}, {1, 1, 1, 1, 1}, 1);
  EXPECT_THROW(run_bcongest(g, prog, {}, kBound, 0), WhpFailure);
  EXPECT_THROW(ScheduledBfsProgram({1}, {0}, 1), InvalidArgument);
  EXPECT_THROW(schedule_bfs(4, {7}, kNoDepthLimit, 0), InvalidArgument);
}

TEST(ScheduledBfs, DistinctSourcesPerLogicalRound) {
  for (std::uint64_t s = 0; s < 3; ++s) {
    Graph g = generate_connected({GraphKind::Gnp, 128, 0.08}, s);
    auto alg = schedule_bfs(g.n(), all_nodes(g.n()), kNoDepthLimit, s);
    SourceAudit audit(g.n(), schedule_slots(g.n(), Constants{}));
    run_bcongest(g, *alg.program, {}, alg.round_bound, s, nullptr, &audit);
    EXPECT_GT(audit.max_distinct(), 0u);
    EXPECT_LE(static_cast<double>(audit.max_distinct()), source_audit_bound(g.n(), Constants{}));
  }
}

TEST(ScheduledBfs, ContractHoldsOnCovers) {
  Graph g = generate_connected({GraphKind::Gnp, 30, 0.2}, 2);
  auto alg = schedule_bfs(g.n(), all_nodes(g.n()), kNoDepthLimit, 2);
  auto rep = verify_aggregation_contract(g, *alg.program, *alg.contract, {}, 300, 2);
  EXPECT_TRUE(rep.ok()) << (rep.violations.empty() ? "" : rep.violations[0]);
}

TEST(AggSimGeneral, OracleEquivalenceAcrossEpsilon) {
  AggSimOptions opt;
  opt.shadow_check = true;
  for (double eps : {1.0, 0.5, 1.0 / 3, 0.25}) {
    for (std::uint64_t s = 0; s < 3; ++s) {
      Graph g = generate_connected({GraphKind::Gnp, 48, 0.15}, s);
      BsHierarchy h = build_pruned_hierarchy(g, eps, s);
      std::vector<NodeId> src{0, 5, 11, 17, 23, 29, 35, 47};
      auto alg = schedule_bfs(g.n(), src, kNoDepthLimit, s + 100);
      auto direct = run_bcongest(g, *alg.program, {}, alg.round_bound, s);
      auto sim = simulate_general(g, h, alg, s, {}, opt);
      EXPECT_EQ(sim.outputs, direct.outputs) << "eps " << eps << " seed " << s;
      std::uint64_t b = 0;
      for (const auto& st : sim.metrics.per_phase) b += st.broadcasters;
      EXPECT_EQ(b, direct.metrics.broadcasts);
      EXPECT_EQ(sim.simulated_rounds, direct.metrics.rounds);
      EXPECT_LE(sim.max_phase_rounds, sim.phase_budget);
    }
  }
}

TEST(AggSimGeneral, OtherProgramsWithContracts) {
  Graph g = generate_connected({GraphKind::Gnp, 40, 0.2}, 7);
  BsHierarchy h = build_pruned_hierarchy(g, 0.5, 7);
  AggSimOptions opt;
  opt.shadow_check = true;
  DecomposableAlgorithm bfs;
  bfs.program = std::make_shared<BfsProgram>(3);
  bfs.contract = std::make_shared<MinDistanceContract>();
  bfs.round_bound = 100;
  auto direct = run_bcongest(g, *bfs.program, {}, 100, 7);
  EXPECT_EQ(simulate_general(g, h, bfs, 7, {}, opt).outputs, direct.outputs);
  auto once = once_with(std::make_shared<IdentityContract>(64));
  EXPECT_EQ(simulate_general(g, h, once, 7, {}, opt).outputs, run_bcongest(g, *once.program, {}, 4, 7).outputs);
}

TEST(AggSimGeneral, DegenerateHierarchyUsesOnlySingletons) {
  Graph g = generate_connected({GraphKind::Gnp, 32, 0.2}, 1);
  BsHierarchy h = build_pruned_hierarchy(g, 1.0, 1);
  ASSERT_EQ(h.kappa, 1u);
  auto alg = once_with(std::make_shared<IdentityContract>(64));
  auto sim = simulate_general(g, h, alg, 1);
  ASSERT_EQ(sim.metrics.per_phase.size(), 1u);
  // Every edge carries the message both ways in the indirect send and, for
  // each singleton, once more as a direct aggregate.
  EXPECT_EQ(sim.metrics.per_phase[0].messages_step1, 4 * g.m());
  EXPECT_EQ(sim.metrics.per_phase[0].messages_step2, 0u);
  EXPECT_EQ(sim.cluster_congestion, 0u);
}

TEST(AggSimGeneral, MissingFEdgesBreakCoverage) {
  Graph g = generate_connected({GraphKind::Gnp, 24, 0.3}, 2);
  BsHierarchy h = build_pruned_hierarchy(g, 1.0, 2);
  for (auto& f : h.levels[1].f) f.clear();
  EXPECT_THROW(simulate_general(g, h, once_with(std::make_shared<IdentityContract>(64)), 2), InvariantViolation);
}

TEST(AggSimGeneral, ContractViolations) {
  Graph g = generate(GraphKind::Clique, 5, 0);
  BsHierarchy h = build_pruned_hierarchy(g, 1.0, 0);
  EXPECT_THROW(simulate_general(g, h, once_with(std::make_shared<IdentityContract>(1)), 0), ContractViolation);
  EXPECT_THROW(simulate_general(g, h, once_with(std::make_shared<ForgingContract>()), 0), ContractViolation);
}

TEST(AggSimGeneral, BudgetAndTimeout) {
  Graph g = generate_connected({GraphKind::Gnp, 32, 0.2}, 3);
  BsHierarchy h = build_pruned_hierarchy(g, 0.5, 3);
  auto alg = schedule_bfs(g.n(), {0, 1}, kNoDepthLimit, 3);
  Constants c;
  c.c2 = 0;
  EXPECT_THROW(simulate_general(g, h, alg, 3, c), BudgetError);
  alg.round_bound = 2;
  try {
    simulate_general(g, h, alg, 3);
    FAIL() << "expected timeout";
  } catch (const TimeoutError& e) {
    ASSERT_NE(e.partial(), nullptr);
    EXPECT_EQ(e.partial()->per_phase.size(), 2u);
  }
  DecomposableAlgorithm p2p;
  p2p.program = std::make_shared<FloodProgram>(0);
  p2p.contract = std::make_shared<MinDistanceContract>();
  p2p.round_bound = 10;
  EXPECT_THROW(simulate_general(g, h, p2p, 3), InvalidArgument);
}

TEST(AggSimGeneral, IdlePhasesCostOneRoundEach) {
  Graph g = generate(GraphKind::Path, 6, 0);
  BsHierarchy h = build_pruned_hierarchy(g, 0.5, 0);
  auto alg = once_with(std::make_shared<IdentityContract>(64));
  auto a = simulate_general(g, h, alg, 0);
  alg.round_bound = 14;
  auto b = simulate_general(g, h, alg, 0);
  EXPECT_EQ(b.metrics.rounds - a.metrics.rounds, 10u);
  EXPECT_EQ(a.metrics.messages, b.metrics.messages);
}

TEST(AggSimStar, OracleEquivalenceWithMaximalMatchings) {
  AggSimOptions opt;
  opt.shadow_check = true;
  opt.check_matching = true;
  for (double eps : {1.0, 0.75, 0.5}) {
    std::uint64_t matched = 0;
    for (std::uint64_t s = 0; s < 3; ++s) {
      Graph g = generate_connected({GraphKind::Gnp, 40, 0.25}, s);
      BsHierarchy h = build_pruned_hierarchy(g, eps, s);
      auto src = all_nodes(g.n());
      auto alg = schedule_bfs(g.n(), src, kNoDepthLimit, s + 7);
      auto sim = simulate_star(g, h, alg, s, {}, opt);
      expect_bfs_rows(g, src, sim.outputs);
      EXPECT_LE(sim.max_phase_rounds, sim.phase_budget);
      matched += sim.matched_edges;
    }
    if (eps < 1.0) EXPECT_GT(matched, 0u) << eps;
  }
}

TEST(AggSimStar, RejectsDeepHierarchies) {
  Graph g = generate_connected({GraphKind::Gnp, 32, 0.2}, 1);
  BsHierarchy h = build_pruned_hierarchy(g, 0.25, 1);
  EXPECT_THROW(simulate_star(g, h, schedule_bfs(g.n(), {0}, kNoDepthLimit, 1), 1), PreconditionError);
}

TEST(AggSimStar, FewerMessagesThanGeneralOnDenseGraphs) {
  Graph g = generate_connected({GraphKind::Gnp, 64, 0.5}, 4);
  BsHierarchy h = build_pruned_hierarchy(g, 0.5, 4);
  auto alg = schedule_bfs(g.n(), all_nodes(g.n()), kNoDepthLimit, 4);
  auto star = simulate_star(g, h, alg, 4);
  auto gen = simulate_general(g, h, alg, 4);
  EXPECT_EQ(star.outputs, gen.outputs);
  EXPECT_LT(star.metrics.messages, gen.metrics.messages);
}

TEST(CentralSchedule, TwoClashingMessages) {
  Trace a, b;
  a.add(1, 0);
  b.add(1, 0);
  auto cs = central_schedule({&a, &b}, 4, 0);
  EXPECT_EQ(cs.congestion, 2u);
  EXPECT_EQ(cs.dilation, 1u);
  EXPECT_GE(cs.length, 2u);
  EXPECT_LE(cs.length, 3u);
}

TEST(CentralSchedule, LengthBetweenLowerBoundsAndContract) {
  Constants c;
  for (std::uint64_t s = 0; s < 20; ++s) {
    RandomStream rs(s);
    std::vector<Trace> ts(6);
    for (auto& t : ts) {
      const auto len = rs.uniform_int(1, 30);
      for (std::uint64_t r = 1; r <= len; ++r)
        for (int k = 0; k < 3; ++k) t.add(r, static_cast<DirEdge>(rs.uniform_int(0, 9)));
    }
    std::vector<const Trace*> p;
    for (auto& t : ts) p.push_back(&t);
    auto cs = central_schedule(p, 64, s, c);
    EXPECT_GE(cs.length, cs.congestion);
    EXPECT_GE(cs.length, cs.dilation);
    EXPECT_LE(static_cast<double>(cs.length),
              c.schedule_c * (static_cast<double>(cs.congestion) + static_cast<double>(cs.dilation) * log2n(64)));
  }
}

TEST(Smoothing, BatchesMatchDirectRunsAndAuditAddsUp) {
  Graph g = generate_connected({GraphKind::Gnp, 32, 0.25}, 5);
  HierarchyEnsemble ens = build_ensemble(g, 0.5, 5);
  std::vector<DecomposableAlgorithm> batches;
  for (NodeId b = 0; b < 4; ++b) batches.push_back(schedule_bfs(g.n(), {b, b + 8, b + 16, b + 24}, kNoDepthLimit, b));
  SmoothingOptions opt;
  opt.shadow_check = true;
  auto r = combine_with_smoothing(g, ens, batches, 5, {}, opt);
  ASSERT_EQ(r.outputs.size(), 4u);
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_EQ(r.outputs[j], run_bcongest(g, *batches[j].program, {}, kBound, 0).outputs);
    EXPECT_EQ(r.hierarchy_of[j], j % ens.zeta);
  }
  std::uint64_t sum = 0, split = 0;
  for (const auto& bl : r.batch_load) sum += std::accumulate(bl.begin(), bl.end(), std::uint64_t{0});
  for (EdgeId e = 0; e < g.m(); ++e) split += r.cluster_load[e] + r.other_load[e];
  EXPECT_EQ(sum, split);
  auto j = nlohmann::json::parse(congestion_audit_json(g, r));
  EXPECT_EQ(j["schedule_length"].get<std::uint64_t>(), r.schedule.length);
  std::uint64_t listed = 0;
  for (const auto& e : j["edges"]) listed += e["total"].get<std::uint64_t>();
  EXPECT_EQ(listed, sum);
  EXPECT_GE(r.metrics.rounds, r.schedule.length);
}

TEST(Smoothing, SingleHierarchyControlUsesFirst) {
  Graph g = generate_connected({GraphKind::Gnp, 32, 0.25}, 6);
  HierarchyEnsemble ens = build_ensemble(g, 0.5, 6);
  std::vector<DecomposableAlgorithm> batches;
  for (NodeId b = 0; b < 3; ++b) batches.push_back(schedule_bfs(g.n(), {b}, kNoDepthLimit, b));
  SmoothingOptions opt;
  opt.single_hierarchy = true;
  auto r = combine_with_smoothing(g, ens, batches, 6, {}, opt);
  for (auto h : r.hierarchy_of) EXPECT_EQ(h, 0u);
}
