#include "congest/ldc.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "congest/engine.hpp"
#include "congest/errors.hpp"

namespace congest {

// State: [wake, status, center, parent, depth, (sender, center)...]
// status 0 undecided, 1 decided and about to broadcast, 2 done.

State ShiftedClusteringProgram::init(const NodeContext& ctx, const Record&, RandomStream& rng) const {
  const std::uint32_t delta = rng.geometric_level(std::exp(-beta_), cap_);
  const std::int64_t wake = static_cast<std::int64_t>(cap_) - delta;
  if (wake == 0) return {wake, 1, static_cast<std::int64_t>(ctx.id), -1, 0};
  return {wake, 0, -1, -1, -1};
}

std::optional<Message> ShiftedClusteringProgram::broadcast(const NodeContext&, const State& s,
                                                           std::uint64_t) const {
  if (s[1] != 1) return std::nullopt;
  return Message::make(1, {s[2], s[4]});
}

void ShiftedClusteringProgram::transition(const NodeContext& ctx, State& s, std::uint64_t round,
                                          std::span<const Delivery> inbox, RandomStream&) const {
  if (s[1] == 1) s[1] = 2;
  for (const auto& d : inbox) {
    s.push_back(d.from);
    s.push_back(d.msg.f[0]);
  }
  if (s[1] != 0) return;
  std::int64_t center = -1, parent = -1, depth = -1;
  if (s[0] == static_cast<std::int64_t>(round)) {
    center = ctx.id;
    depth = 0;
  }
  for (const auto& d : inbox) {
    if (center < 0 || d.msg.f[0] < center) {
      center = d.msg.f[0];
      parent = d.from;
      depth = d.msg.f[1] + 1;
    }
  }
  if (center < 0) return;
  s[1] = 1;
  s[2] = center;
  s[3] = parent;
  s[4] = depth;
}

Record ShiftedClusteringProgram::output(const NodeContext&, const State& s) const {
  Record r{s[2], s[3], s[4]};
  r.insert(r.end(), s.begin() + 5, s.end());
  return r;
}

bool ShiftedClusteringProgram::quiescent(const NodeContext&, const State& s) const { return s[1] == 2; }

bool LdcDecomposition::has_f_edge(NodeId from, NodeId to) const {
  const auto& v = f_out[from];
  return std::binary_search(v.begin(), v.end(), to);
}

std::uint32_t ldc_level_cap(std::size_t n, double beta) {
  const double ln = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  return static_cast<std::uint32_t>(std::ceil(2.0 * ln / beta)) + 1;
}

std::int64_t strong_diameter(const Graph& g, const std::vector<NodeId>& members) {
  if (members.empty()) return 0;
  std::vector<std::int64_t> idx(g.n(), -1);
  for (std::size_t i = 0; i < members.size(); ++i) idx[members[i]] = static_cast<std::int64_t>(i);
  std::int64_t diam = 0;
  std::vector<std::int64_t> dist(members.size());
  std::deque<NodeId> q;
  for (NodeId s : members) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[idx[s]] = 0;
    q.assign(1, s);
    std::size_t seen = 1;
    while (!q.empty()) {
      NodeId x = q.front();
      q.pop_front();
      for (NodeId y : g.neighbors(x)) {
        if (idx[y] < 0 || dist[idx[y]] >= 0) continue;
        dist[idx[y]] = dist[idx[x]] + 1;
        diam = std::max(diam, dist[idx[y]]);
        ++seen;
        q.push_back(y);
      }
    }
    if (seen != members.size()) return -1;
  }
  return diam;
}

LdcDecomposition ldc_decompose(const Graph& g, double beta, std::uint64_t seed, const Constants& c) {
  require_undirected(g);
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("beta must lie in (0, 1)");
  const std::size_t n = g.n();
  const std::uint32_t cap = ldc_level_cap(n, beta);
  LdcDecomposition d;
  d.beta = beta;
  d.metrics = SimMetrics(g.m());
  ShiftedClusteringProgram prog(beta, cap);
  auto res = run_bcongest(g, prog, {}, cap + 4, seed);
  d.metrics.absorb_as("ldc.clustering", res.metrics);

  std::vector<std::int64_t> parent(n);
  for (NodeId v = 0; v < n; ++v) parent[v] = res.outputs[v][1];
  d.forest = ClusterForest::from_parents(parent);
  d.f_out.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    const Record& o = res.outputs[v];
    if (d.forest.center[v] != o[0]) throw InvariantViolation("cluster tree disagrees with chosen center");
    std::map<std::int64_t, NodeId> best;
    for (std::size_t i = 3; i + 1 < o.size(); i += 2) {
      const std::int64_t cu = o[i + 1];
      if (cu == o[0]) continue;
      auto u = static_cast<NodeId>(o[i]);
      auto [it, fresh] = best.emplace(cu, u);
      if (!fresh) it->second = std::min(it->second, u);
    }
    for (auto& [cc, u] : best) d.f_out[v].push_back(u);
    std::sort(d.f_out[v].begin(), d.f_out[v].end());
  }

  const double lg = log2n(n);
  d.r_bound = static_cast<std::uint32_t>(std::ceil(c.ldc_diameter_c * lg));
  d.d_bound = static_cast<std::uint32_t>(std::ceil(c.ldc_degree_c * lg));
  auto rep = check_ldc(g, d);
  d.max_diameter = rep.max_diameter;
  d.max_f_degree = rep.max_f_degree;
  d.cluster_count = d.forest.clusters().size();
  if (!rep.partition || !rep.trees_valid || !rep.coverage || !rep.f_inter_cluster)
    throw InvariantViolation("decomposition structure is inconsistent");
  if (rep.max_diameter > d.r_bound)
    throw WhpFailure("ldc diameter", "strong diameter " + std::to_string(rep.max_diameter) + " exceeds " +
                                         std::to_string(d.r_bound));
  if (rep.max_f_degree > d.d_bound)
    throw WhpFailure("ldc degree", "F out-degree " + std::to_string(rep.max_f_degree) + " exceeds " +
                                       std::to_string(d.d_bound));
  return d;
}

LdcReport check_ldc(const Graph& g, const LdcDecomposition& d) {
  LdcReport r;
  const std::size_t n = g.n();
  for (NodeId v = 0; v < n; ++v)
    if (!d.forest.contains(v)) r.partition = false;
  try {
    d.forest.validate(g);
  } catch (const Error&) {
    r.trees_valid = false;
  }
  for (const auto& [c, members] : d.forest.clusters()) {
    auto diam = strong_diameter(g, members);
    if (diam < 0) {
      r.trees_valid = false;
      continue;
    }
    r.max_diameter = std::max<std::uint32_t>(r.max_diameter, static_cast<std::uint32_t>(diam));
  }
  for (NodeId v = 0; v < n; ++v) {
    r.max_f_degree = std::max<std::uint32_t>(r.max_f_degree, static_cast<std::uint32_t>(d.f_out[v].size()));
    std::map<std::int64_t, int> hit;
    for (NodeId u : d.f_out[v]) {
      if (!g.adjacent(u, v) || d.forest.center[u] == d.forest.center[v]) r.f_inter_cluster = false;
      ++hit[d.forest.center[u]];
    }
    for (auto& [cc, k] : hit)
      if (k > 1) r.f_inter_cluster = false;
    for (NodeId u : g.neighbors(v))
      if (d.forest.center[u] != d.forest.center[v] && !hit.count(d.forest.center[u])) r.coverage = false;
  }
  return r;
}

}  // namespace congest
