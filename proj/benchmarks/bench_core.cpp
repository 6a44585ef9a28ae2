#include <benchmark/benchmark.h>

#include <numeric>

#include "congest/aggsim.hpp"
#include "congest/apsp.hpp"
#include "congest/bcsim.hpp"
#include "congest/hierarchy.hpp"
#include "congest/ldc.hpp"
#include "congest/matching.hpp"
#include "congest/oracles.hpp"
#include "congest/programs.hpp"

using namespace congest;

namespace {

Graph gnp(std::size_t n, double p, std::uint64_t seed = 1) {
  return generate_connected({GraphKind::Gnp, n, p}, seed);
}

void BM_DirectBfs(benchmark::State& st) {
  Graph g = gnp(static_cast<std::size_t>(st.range(0)), 0.1);
  BfsProgram prog(0);
  for (auto _ : st) benchmark::DoNotOptimize(run_bcongest(g, prog, {}, g.n() + 1, 1));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_DirectBfs)->RangeMultiplier(2)->Range(64, 512)->Complexity();

void BM_BcSimBfs(benchmark::State& st) {
  Graph g = gnp(static_cast<std::size_t>(st.range(0)), 0.1);
  BfsProgram prog(0);
  for (auto _ : st) benchmark::DoNotOptimize(simulate(g, prog, {}, g.n() + 1, 1));
}
BENCHMARK(BM_BcSimBfs)->RangeMultiplier(2)->Range(64, 256);

void BM_LdcDecompose(benchmark::State& st) {
  Graph g = gnp(static_cast<std::size_t>(st.range(0)), 0.1);
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(ldc_decompose(g, 0.5, ++seed));
}
BENCHMARK(BM_LdcDecompose)->RangeMultiplier(2)->Range(64, 256);

void BM_PrunedHierarchy(benchmark::State& st) {
  Graph g = gnp(256, 0.1);
  const double eps = 1.0 / static_cast<double>(st.range(0));
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(build_pruned_hierarchy(g, eps, ++seed));
}
BENCHMARK(BM_PrunedHierarchy)->DenseRange(2, 4);

void BM_ScheduledAllSourceBfs(benchmark::State& st) {
  Graph g = gnp(static_cast<std::size_t>(st.range(0)), 0.1);
  std::vector<NodeId> src(g.n());
  std::iota(src.begin(), src.end(), NodeId{0});
  auto alg = schedule_bfs(g.n(), src, kNoDepthLimit, 3);
  for (auto _ : st) benchmark::DoNotOptimize(run_bcongest(g, *alg.program, {}, alg.round_bound, 1));
}
BENCHMARK(BM_ScheduledAllSourceBfs)->RangeMultiplier(2)->Range(64, 256);

void BM_ApspTradeoff(benchmark::State& st) {
  Graph g = gnp(128, 0.1);
  const double eps = static_cast<double>(st.range(0)) / 4.0;
  for (auto _ : st) benchmark::DoNotOptimize(apsp_unweighted_tradeoff(g, eps, 1));
}
BENCHMARK(BM_ApspTradeoff)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_MatchingVsHopcroftKarp(benchmark::State& st) {
  GenSpec spec{GraphKind::BipartiteGnp, 200, 0.1};
  Graph g = generate_connected(spec, 2);
  if (st.range(0) == 0)
    for (auto _ : st) benchmark::DoNotOptimize(hopcroft_karp(g));
  else
    for (auto _ : st) benchmark::DoNotOptimize(bipartite_max_matching(g, 1));
}
BENCHMARK(BM_MatchingVsHopcroftKarp)->Arg(0)->Arg(1);

void BM_OracleApsp(benchmark::State& st) {
  Graph g = gnp(static_cast<std::size_t>(st.range(0)), 0.1);
  for (auto _ : st) benchmark::DoNotOptimize(bfs_apsp(g));
}
BENCHMARK(BM_OracleApsp)->RangeMultiplier(2)->Range(64, 512);

}  // namespace

BENCHMARK_MAIN();
