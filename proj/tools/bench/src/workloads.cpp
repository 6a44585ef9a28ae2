#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "congest/aggsim.hpp"
#include "congest/apsp.hpp"
#include "congest/bcsim.hpp"
#include "congest/bench.hpp"
#include "congest/cover.hpp"
#include "congest/errors.hpp"
#include "congest/hierarchy.hpp"
#include "congest/ldc.hpp"
#include "congest/matching.hpp"
#include "congest/oracles.hpp"
#include "congest/programs.hpp"
#include "congest/retry.hpp"
#include "congest/schedule.hpp"

namespace congest::bench {

namespace {

void take(Row& r, const SimMetrics& m) {
  r.rounds = m.rounds;
  r.messages = m.messages;
  r.broadcasts = m.broadcasts;
  r.max_edge_congestion = m.max_edge_congestion();
  r.metrics_json = m.to_json();
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const BudgetError*>(&e)) return "BudgetError";
  if (dynamic_cast<const TimeoutError*>(&e)) return "TimeoutError";
  if (dynamic_cast<const WhpFailure*>(&e)) return "WhpFailure";
  if (dynamic_cast<const ContractViolation*>(&e)) return "ContractViolation";
  if (dynamic_cast<const InvariantViolation*>(&e)) return "InvariantViolation";
  if (dynamic_cast<const PayloadError*>(&e)) return "PayloadError";
  if (dynamic_cast<const DisconnectedGraph*>(&e)) return "DisconnectedGraph";
  if (dynamic_cast<const PreconditionError*>(&e)) return "PreconditionError";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "InvalidArgument";
  return "error";
}

std::uint64_t outputs_checksum(const std::vector<Record>& out) {
  std::string bytes;
  for (const auto& r : out) {
    for (auto x : r) bytes.append(reinterpret_cast<const char*>(&x), sizeof x);
    bytes.push_back('\n');
  }
  return fnv1a64(bytes);
}

std::string hex(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::vector<NodeId> spread_sources(std::size_t n, std::size_t l) {
  l = std::clamp<std::size_t>(l, 1, n);
  std::vector<NodeId> s(l);
  for (std::size_t j = 0; j < l; ++j) s[j] = static_cast<NodeId>(j * n / l);
  return s;
}

Graph make_graph(const CellConfig& cell, std::size_t n, std::uint64_t seed, Row& row) {
  const GraphConfig& gc = cell.graph;
  GenSpec spec;
  spec.kind = gc.kind;
  spec.n = n;
  spec.p = gc.p_for(n);
  spec.left = gc.left;
  spec.weighted = gc.weighted;
  spec.max_weight = gc.max_weight;
  RandomStream rs = RandomStream(seed).child("bench.instance");
  if (gc.p_max > 0) spec.p = gc.p_min + (gc.p_max - gc.p_min) * rs.uniform01();
  if (gc.left_hi > 0) {
    const double f = gc.left_lo + (gc.left_hi - gc.left_lo) * rs.uniform01();
    auto left = static_cast<std::size_t>(std::llround(f * static_cast<double>(n)));
    left = std::clamp<std::size_t>(left, 1, n - 1);
    if (gc.max_part) left = std::clamp(left, n > gc.max_part ? n - gc.max_part : 1, std::min(gc.max_part, n - 1));
    spec.left = left;
  }
  if (gc.kind == GraphKind::BipartiteGnp) row.extras["left"] = spec.left ? spec.left : n / 2;
  if (gc.kind == GraphKind::Gnp || gc.kind == GraphKind::BipartiteGnp) row.extras["p"] = spec.p;
  return generate_connected(spec, seed);
}

std::uint64_t shared_seed(std::uint64_t seed) { return RandomStream(seed).child("bench.shared").key(); }

void bcsim_cell(const CellConfig& cell, const Graph& g, std::uint64_t seed, const Constants& c, Row& row) {
  const std::string which = cell.params.value("program", std::string("bfs"));
  std::unique_ptr<Program> prog;
  std::uint64_t bound = g.n() + 1;
  if (which == "bfs") {
    prog = std::make_unique<BfsProgram>(static_cast<NodeId>(seed % g.n()));
  } else if (which == "flood") {
    prog = std::make_unique<BroadcastFloodProgram>(static_cast<NodeId>(seed % g.n()));
  } else if (which == "bellman_ford") {
    prog = std::make_unique<BellmanFordApspProgram>();
    bound = bellman_ford_round_bound(g);
  } else {
    throw InvalidArgument("bcsim: unknown program '" + which + "'");
  }
  bound = cell.params.value("max_rounds", bound);
  auto direct = run_bcongest(g, *prog, {}, bound, seed);
  auto sim = simulate(g, *prog, {}, bound, seed, c);
  take(row, sim.metrics);
  const bool equal = sim.outputs == direct.outputs;
  const double mb = simulation_message_bound(g.n(), sim.metrics.in_bits, sim.metrics.out_bits,
                                             direct.metrics.broadcasts, c.sim_message_c);
  const bool bound_ok = static_cast<double>(sim.metrics.messages) <= mb;
  row.extras["program"] = which;
  row.extras["outputs_equal"] = equal;
  row.extras["output_checksum"] = hex(outputs_checksum(sim.outputs));
  row.extras["direct_rounds"] = direct.metrics.rounds;
  row.extras["direct_messages"] = direct.metrics.messages;
  row.extras["direct_broadcasts"] = direct.metrics.broadcasts;
  row.extras["simulated_rounds"] = sim.simulated_rounds;
  row.extras["in_fields"] = sim.metrics.in_bits;
  row.extras["out_fields"] = sim.metrics.out_bits;
  row.extras["message_bound"] = mb;
  row.extras["message_bound_ok"] = bound_ok;
  row.extras["clusters"] = sim.ldc.cluster_count;
  row.ok = equal && bound_ok;
}

void aggsim_cell(const CellConfig& cell, const Graph& g, double eps, std::uint64_t seed, const Constants& c,
                 Row& row) {
  const std::string mode = cell.params.value("mode", std::string("general"));
  const auto l = cell.params.value("sources", std::size_t{8});
  BsHierarchy h = build_pruned_hierarchy(g, eps, seed, c);
  auto src = spread_sources(g.n(), l);
  auto alg = with_reseed(shared_seed(seed), c.max_reseeds,
                         [&](std::uint64_t s) { return schedule_bfs(g.n(), src, kNoDepthLimit, s, c); });
  auto direct = run_bcongest(g, *alg.program, alg.inputs, alg.round_bound, seed);
  AggSimResult sim;
  if (mode == "general")
    sim = simulate_general(g, h, alg, seed, c);
  else if (mode == "star")
    sim = simulate_star(g, h, alg, seed, c);
  else
    throw InvalidArgument("aggsim: unknown mode '" + mode + "'");
  take(row, sim.metrics);
  bool oracle = true;
  for (std::size_t j = 0; j < src.size() && oracle; ++j) {
    auto d = bfs_distances(g, src[j]);
    for (NodeId v = 0; v < g.n(); ++v)
      if (sim.outputs[v][j] != d[v]) oracle = false;
  }
  const bool equal = sim.outputs == direct.outputs;
  row.extras["mode"] = mode;
  row.extras["kappa"] = h.kappa;
  row.extras["outputs_equal"] = equal;
  row.extras["bfs_oracle"] = oracle;
  row.extras["simulated_rounds"] = sim.simulated_rounds;
  row.extras["phase_budget"] = sim.phase_budget;
  row.extras["max_phase_rounds"] = sim.max_phase_rounds;
  row.extras["cluster_congestion"] = sim.cluster_congestion;
  row.extras["noncluster_congestion"] = sim.noncluster_congestion;
  row.extras["matched_edges"] = sim.matched_edges;
  row.ok = equal && oracle && sim.max_phase_rounds <= sim.phase_budget;
}

void apsp_cell(const Graph& g, double eps, bool weighted, std::uint64_t seed, const Constants& c, Row& row) {
  ApspResult r = weighted ? apsp_weighted_msgopt(g, seed, c) : apsp_unweighted_tradeoff(g, eps, seed, c);
  take(row, r.metrics);
  const DistanceMatrix want = weighted ? dijkstra_apsp(g) : bfs_apsp(g);
  const bool equal = r.dist == want;
  row.extras["regime"] = r.regime;
  row.extras["attempts"] = r.attempts;
  row.extras["landmarks"] = r.landmarks;
  row.extras["round_bound"] = r.round_bound;
  row.extras["oracle_equal"] = equal;
  row.extras["distances"] = r.dist.summary_json();
  row.ok = equal && r.attempts <= c.max_reseeds + 1;
}

// Checks a depth-limited multi-source BFS table against the oracle.
bool limited_table_ok(const Graph& g, const MultiBfsResult& r) {
  for (NodeId s = 0; s < g.n(); ++s) {
    auto d = bfs_distances(g, s);
    for (NodeId v = 0; v < g.n(); ++v) {
      const std::int64_t want = r.depth_limit != kNoDepthLimit && d[v] > r.depth_limit ? -1 : d[v];
      if (r.dist[s][v] != want) return false;
    }
  }
  return true;
}

void smoothing_cell(const Graph& g, double eps, std::uint64_t seed, const Constants& c, Row& row) {
  auto ens = multi_bfs_limited(g, eps, seed, c, false);
  auto ctl = multi_bfs_limited(g, eps, seed, c, true);
  take(row, ens.metrics);
  const bool ok_e = limited_table_ok(g, ens), ok_c = limited_table_ok(g, ctl);
  const auto ce = ens.smoothing.max_cluster_congestion, cc = ctl.smoothing.max_cluster_congestion;
  row.extras["depth_limit"] = ens.depth_limit;
  row.extras["batches"] = ens.batches;
  row.extras["ensemble_cluster_congestion"] = ce;
  row.extras["control_cluster_congestion"] = cc;
  row.extras["ensemble_noncluster_congestion"] = ens.smoothing.max_noncluster_congestion;
  row.extras["control_noncluster_congestion"] = ctl.smoothing.max_noncluster_congestion;
  row.extras["ensemble_lower"] = ce < cc;
  row.extras["control_rounds"] = ctl.metrics.rounds;
  row.extras["control_messages"] = ctl.metrics.messages;
  row.extras["tables_correct"] = ok_e && ok_c;
  row.ok = ok_e && ok_c;
}

void matching_cell(const Graph& g, std::uint64_t seed, const Constants& c, Row& row) {
  auto r = bipartite_max_matching(g, seed, c);
  take(row, r.metrics);
  const std::size_t hk = matching_size(hopcroft_karp(g));
  const bool valid = is_matching(g, r.mate) && matching_size(r.mate) == r.size;
  row.extras["size"] = r.size;
  row.extras["hopcroft_karp"] = hk;
  row.extras["maximal_size"] = r.maximal_size;
  row.extras["s"] = r.s;
  row.extras["phases"] = r.phases;
  row.extras["augmentations"] = r.augmentations;
  row.extras["round_bound"] = r.round_bound;
  row.extras["attempts"] = r.attempts;
  row.extras["valid"] = valid;
  row.ok = valid && r.size == hk;
}

void cover_cell(const CellConfig& cell, const Graph& g, std::uint64_t seed, const Constants& c, Row& row) {
  const auto k = cell.params.value("k", 1u);
  const auto w = cell.params.value("w", std::int64_t{1});
  auto r = neighborhood_cover(g, k, w, seed, c);
  // The construction validates itself; validate again on the returned cover.
  auto rep = check_cover(g, r.cover, c);
  take(row, r.metrics);
  row.extras["k"] = k;
  row.extras["w"] = w;
  row.extras["trees"] = r.cover.trees.size();
  row.extras["max_depth"] = rep.max_depth;
  row.extras["depth_bound"] = rep.depth_bound;
  row.extras["max_membership"] = rep.max_membership;
  row.extras["membership_bound"] = rep.membership_bound;
  row.extras["depth_ok"] = rep.depth_ok;
  row.extras["membership_ok"] = rep.membership_ok;
  row.extras["neighborhoods_ok"] = rep.neighborhoods_ok;
  row.extras["trees_valid"] = rep.trees_valid;
  row.extras["attempts"] = r.attempts;
  row.ok = rep.ok();
}

void ldc_cell(const Graph& g, std::uint64_t seed, const Constants& c, Row& row) {
  // One attempt: the suite asserts the bounds on every seed.
  auto d = ldc_decompose(g, c.ldc_beta, seed, c);
  auto rep = check_ldc(g, d);
  take(row, d.metrics);
  row.extras["clusters"] = d.cluster_count;
  row.extras["max_diameter"] = rep.max_diameter;
  row.extras["diameter_bound"] = d.r_bound;
  row.extras["max_f_degree"] = rep.max_f_degree;
  row.extras["f_degree_bound"] = d.d_bound;
  row.extras["partition"] = rep.partition;
  row.extras["coverage"] = rep.coverage;
  row.extras["f_inter_cluster"] = rep.f_inter_cluster;
  row.ok = rep.ok(d.r_bound, d.d_bound);
}

void hierarchy_cell(const CellConfig& cell, const Graph& g, double eps, std::uint64_t seed, const Constants& c,
                    Row& row) {
  const auto sample = cell.params.value("sample_edges", std::size_t{0});
  BsHierarchy raw = build_bs_hierarchy(g, eps, seed, c);
  BsHierarchy h = prune_hierarchy(g, raw);
  auto rep = check_hierarchy(g, h, sample, seed);
  take(row, h.metrics);
  const double deg_bound = bs_degree_bound(g.n(), eps, c);
  const bool deg_ok = static_cast<double>(rep.max_f_degree) <= deg_bound;
  row.extras["kappa"] = h.kappa;
  row.extras["structure"] = rep.structure;
  row.extras["radius"] = rep.radius;
  row.extras["max_f_degree"] = rep.max_f_degree;
  row.extras["f_degree_bound"] = deg_bound;
  row.extras["f_distinct"] = rep.f_distinct;
  row.extras["coverage"] = rep.coverage;
  row.extras["coverage_checked"] = rep.coverage_checked;
  row.extras["subtree_bound"] = rep.subtree_bound;
  row.extras["max_proper_subtree"] = rep.max_proper_subtree;
  row.extras["prune_threshold"] = prune_threshold(g.n(), eps);
  if (!rep.problems.empty()) row.extras["problem"] = rep.problems.front();
  row.ok = rep.structure && rep.radius && deg_ok && rep.f_distinct && rep.coverage && rep.subtree_bound;
}

void rarity_cell(const CellConfig& cell, const Graph& g, double eps, std::uint64_t seed, const Constants& c,
                 Row& row) {
  const auto builds = cell.params.value("builds", std::size_t{1000});
  auto r = cluster_edge_rarity(g, eps, builds, seed, c);
  row.extras["builds"] = r.builds;
  row.extras["max_rate"] = r.max_rate;
  row.extras["mean_rate"] = r.mean_rate;
  row.extras["bound"] = r.bound;
  row.extras["kappa"] = kappa_for(eps);
  row.metrics_json = "{}";
  row.ok = r.max_rate <= r.bound;
}

void schedule_audit_cell(const CellConfig& cell, const Graph& g, std::uint64_t seed, const Constants& c, Row& row) {
  const auto l = cell.params.value("sources", g.n());
  auto src = spread_sources(g.n(), l);
  const std::uint32_t slots = schedule_slots(g.n(), c);
  std::size_t heard = 0;
  unsigned attempts = 1;
  auto direct = with_reseed(
      shared_seed(seed), c.max_reseeds,
      [&](std::uint64_t s) {
        auto alg = schedule_bfs(g.n(), src, kNoDepthLimit, s, c);
        SourceAudit audit(g.n(), slots);
        auto r = run_bcongest(g, *alg.program, alg.inputs, alg.round_bound, seed, nullptr, &audit);
        heard = audit.max_distinct();
        return r;
      },
      &attempts);
  take(row, direct.metrics);
  bool oracle = true;
  for (std::size_t j = 0; j < src.size() && oracle; ++j) {
    auto d = bfs_distances(g, src[j]);
    for (NodeId v = 0; v < g.n(); ++v)
      if (direct.outputs[v][j] != d[v]) oracle = false;
  }
  const double bound = source_audit_bound(g.n(), c);
  row.extras["sources"] = src.size();
  row.extras["slots"] = slots;
  row.extras["max_distinct_sources"] = heard;
  row.extras["audit_bound"] = bound;
  row.extras["attempts"] = attempts;
  row.extras["bfs_oracle"] = oracle;
  row.ok = oracle && static_cast<double>(heard) <= bound;
}

}  // namespace

std::string Row::key() const {
  char eps[32];
  std::snprintf(eps, sizeof eps, "%.4f", epsilon);
  return cell + ".n" + std::to_string(n) + ".e" + eps + ".s" + std::to_string(seed);
}

double Row::metric(const std::string& name) const {
  if (name == "rounds") return static_cast<double>(rounds);
  if (name == "messages") return static_cast<double>(messages);
  if (name == "broadcasts") return static_cast<double>(broadcasts);
  if (name == "max_edge_congestion") return static_cast<double>(max_edge_congestion);
  if (name == "wall_time") return wall_time;
  if (extras.contains(name) && extras[name].is_number()) return extras[name].get<double>();
  throw InvalidArgument("unknown metric '" + name + "'");
}

Row run_cell(const CellConfig& cell, std::size_t n, double epsilon, std::uint64_t seed, const Constants& c) {
  Row row;
  row.cell = cell.name;
  row.algorithm = cell.algorithm;
  row.n = n;
  row.epsilon = epsilon;
  row.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Graph g = make_graph(cell, n, seed, row);
    row.n = g.n();
    row.m = g.m();
    const std::string& a = cell.algorithm;
    if (a == "bcsim") bcsim_cell(cell, g, seed, c, row);
    else if (a == "aggsim") aggsim_cell(cell, g, epsilon, seed, c, row);
    else if (a == "apsp_unweighted") apsp_cell(g, epsilon, false, seed, c, row);
    else if (a == "apsp_weighted") apsp_cell(g, epsilon, true, seed, c, row);
    else if (a == "smoothing_pair") smoothing_cell(g, epsilon, seed, c, row);
    else if (a == "matching") matching_cell(g, seed, c, row);
    else if (a == "cover") cover_cell(cell, g, seed, c, row);
    else if (a == "ldc") ldc_cell(g, seed, c, row);
    else if (a == "hierarchy") hierarchy_cell(cell, g, epsilon, seed, c, row);
    else if (a == "rarity") rarity_cell(cell, g, epsilon, seed, c, row);
    else if (a == "schedule_audit") schedule_audit_cell(cell, g, seed, c, row);
    else throw InvalidArgument("unknown algorithm '" + a + "'");
    if (!row.ok && row.error.empty()) row.error = "validation failed";
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = error_kind(e) + ": " + e.what();
  }
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

}  // namespace congest::bench
