#include "congest/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include <json.hpp>

#include "congest/engine.hpp"
#include "congest/errors.hpp"
#include "congest/primitives.hpp"
#include "congest/retry.hpp"

namespace congest {

unsigned kappa_for(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in (0, 1]");
  return static_cast<unsigned>(std::ceil(1.0 / epsilon - 1e-9));
}

std::uint64_t prune_threshold(std::size_t n, double epsilon) { return std::max<std::uint64_t>(1, ceil_pow(n, 1.0 - epsilon)); }

double bs_degree_bound(std::size_t n, double epsilon, const Constants& c) {
  const double nn = static_cast<double>(std::max<std::size_t>(n, 2));
  return c.bs_degree_c * std::pow(nn, epsilon) * std::log(nn);
}

unsigned BsHierarchy::low_level(NodeId v) const {
  for (unsigned i = 1; i < levels.size(); ++i)
    if (levels[i].low[v]) return i;
  return 0;
}

std::size_t BsHierarchy::f_edge_count() const {
  std::size_t k = 0;
  for (const auto& l : levels)
    for (const auto& f : l.f) k += f.size();
  return k;
}

std::vector<std::pair<unsigned, NodeId>> BsHierarchy::memberships(NodeId v) const {
  std::vector<std::pair<unsigned, NodeId>> out;
  for (unsigned i = 0; i + 1 < levels.size(); ++i)
    if (levels[i].clusters.contains(v)) out.push_back({i, static_cast<NodeId>(levels[i].clusters.center[v])});
  return out;
}

void BsHierarchy::refresh_cluster_edges(const Graph& g) {
  cluster_edge.assign(g.m(), 0);
  for (const auto& l : levels)
    for (NodeId v = 0; v < l.clusters.n(); ++v)
      if (l.clusters.contains(v) && l.clusters.parent[v] >= 0)
        cluster_edge[*g.find_edge(v, static_cast<NodeId>(l.clusters.parent[v]))] = 1;
}

std::string BsHierarchy::to_json() const {
  nlohmann::ordered_json j;
  j["epsilon"] = epsilon;
  j["kappa"] = kappa;
  j["pruned"] = pruned;
  j["seed"] = seed;
  auto& arr = j["levels"] = nlohmann::ordered_json::array();
  for (unsigned i = 0; i < levels.size(); ++i) {
    const auto& l = levels[i];
    nlohmann::ordered_json lj;
    lj["level"] = i;
    std::vector<NodeId> s, low;
    for (NodeId v = 0; v < l.sampled.size(); ++v) {
      if (l.sampled[v]) s.push_back(v);
      if (l.low[v]) low.push_back(v);
    }
    lj["sampled"] = s;
    lj["low"] = low;
    auto& cl = lj["clusters"] = nlohmann::ordered_json::array();
    for (const auto& [c, members] : l.clusters.clusters()) {
      nlohmann::ordered_json cj;
      cj["center"] = c;
      cj["members"] = members;
      std::vector<std::int64_t> par;
      for (NodeId v : members) par.push_back(l.clusters.parent[v]);
      cj["parent"] = par;
      cl.push_back(cj);
    }
    auto& fj = lj["f"] = nlohmann::ordered_json::array();
    for (NodeId v = 0; v < l.f.size(); ++v)
      for (NodeId w : l.f[v]) fj.push_back({v, w});
    arr.push_back(lj);
  }
  return j.dump();
}

namespace {

std::vector<Record> tree_cast_inputs(const ClusterForest& f, const std::vector<std::int64_t>& value,
                                     const std::vector<std::uint8_t>* cut = nullptr) {
  const std::size_t n = f.n();
  auto ch = f.children();
  std::vector<Record> in(n);
  for (NodeId v = 0; v < n; ++v) {
    if (!f.contains(v)) {
      in[v] = {0, 0};
      continue;
    }
    const bool root = f.parent[v] < 0 || (cut && (*cut)[v]);
    in[v] = {root ? 1 : 0, value[v]};
    for (NodeId c : ch[v])
      if (!(cut && (*cut)[c])) in[v].push_back(c);
  }
  return in;
}

// Per node: (neighbor, message) pairs heard in one exchange round.
std::vector<std::vector<NeighborInfo>> exchange(const std::string& part, const Graph& g,
                                                const std::vector<Record>& in, std::uint64_t seed, SimMetrics& m) {
  auto r = run_part(part, g, NeighborExchangeProgram{}, in, 4, seed, m);
  return decode_exchange(r.outputs);
}

// Smallest-id neighbor per heard cluster other than `own`.
std::vector<NodeId> pick_f(const std::vector<NeighborInfo>& heard, std::int64_t own) {
  std::map<std::int64_t, NodeId> best;
  for (const auto& h : heard) {
    const std::int64_t c = h.msg.f[0];
    if (c == own) continue;
    auto [it, fresh] = best.emplace(c, h.from);
    if (!fresh) it->second = std::min(it->second, h.from);
  }
  std::vector<NodeId> out;
  for (auto& [c, w] : best) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

BsHierarchy build_bs_hierarchy(const Graph& g, double epsilon, std::uint64_t seed, const Constants& c) {
  require_undirected(g);
  require_connected(g);
  const std::size_t n = g.n();
  BsHierarchy h;
  h.epsilon = epsilon;
  h.kappa = kappa_for(epsilon);
  h.seed = seed;
  h.metrics = SimMetrics(g.m());
  const unsigned kappa = h.kappa;
  h.levels.resize(kappa + 1);
  for (auto& l : h.levels) {
    l.sampled.assign(n, 0);
    l.low.assign(n, 0);
    l.f.assign(n, {});
  }
  h.levels[0].sampled.assign(n, 1);
  h.levels[0].clusters = ClusterForest::from_parents(std::vector<std::int64_t>(n, -1));
  const double p = std::pow(static_cast<double>(n), -epsilon);
  RandomStream root(seed);

  for (unsigned i = 0; i < kappa; ++i) {
    const BsLevel& cur = h.levels[i];
    BsLevel& next = h.levels[i + 1];
    const bool top = i + 1 == kappa;
    // Centers of sampled clusters draw locally; the flag travels down each tree.
    std::vector<std::int64_t> flag(n, 0);
    if (!top) {
      RandomStream lr = root.child("bs_sample", i + 1);
      for (NodeId v = 0; v < n; ++v)
        if (cur.sampled[v] && lr.child(v, 0).bernoulli(p)) next.sampled[v] = 1;
      std::vector<std::int64_t> val(n, 0);
      for (NodeId v = 0; v < n; ++v) val[v] = next.sampled[v];
      auto tc = run_part("bs.flag", g, TreeCastProgram{}, tree_cast_inputs(cur.clusters, val), 4 * n + 8,
                         seed, h.metrics);
      for (NodeId v = 0; v < n; ++v)
        if (cur.clusters.contains(v)) flag[v] = tc.outputs[v][0];
    }
    std::vector<Record> xin(n);
    for (NodeId v = 0; v < n; ++v) {
      if (cur.clusters.contains(v))
        xin[v] = {1, cur.clusters.center[v], flag[v], static_cast<std::int64_t>(cur.clusters.depth[v])};
      else
        xin[v] = {0};
    }
    auto heard = exchange("bs.exchange", g, xin, seed, h.metrics);

    std::vector<std::int64_t> parent(n, -1);
    std::vector<std::uint8_t> member(n, 0);
    std::vector<Record> notify(n, Record{-1});
    for (NodeId v = 0; v < n; ++v) {
      if (!cur.clusters.contains(v)) continue;
      if (flag[v]) {
        member[v] = 1;
        parent[v] = cur.clusters.parent[v];
        continue;
      }
      std::int64_t best_c = -1;
      NodeId best_u = kNoNode;
      for (const auto& x : heard[v]) {
        if (!x.msg.f[1]) continue;
        const std::int64_t cc = x.msg.f[0];
        if (best_c < 0 || cc < best_c || (cc == best_c && x.from < best_u)) {
          best_c = cc;
          best_u = x.from;
        }
      }
      if (best_c >= 0) {
        member[v] = 1;
        parent[v] = best_u;
        notify[v] = {static_cast<std::int64_t>(best_u)};
      } else {
        next.low[v] = 1;
        next.f[v] = pick_f(heard[v], cur.clusters.center[v]);
      }
    }
    run_part("bs.notify", g, NotifyProgram{}, notify, 4, seed, h.metrics);
    next.clusters = ClusterForest::from_parents(parent, &member);
  }
  h.refresh_cluster_edges(g);

  const double bound = bs_degree_bound(n, epsilon, c);
  for (unsigned i = 1; i <= kappa; ++i)
    for (NodeId v = 0; v < n; ++v)
      if (static_cast<double>(h.levels[i].f[v].size()) > bound)
        throw WhpFailure("bs degree", "node " + std::to_string(v) + " has " +
                                          std::to_string(h.levels[i].f[v].size()) + " F edges at level " +
                                          std::to_string(i));
  return h;
}

BsHierarchy prune_hierarchy(const Graph& g, const BsHierarchy& src) {
  if (src.pruned) throw PreconditionError("hierarchy is already pruned");
  BsHierarchy h = src;
  h.pruned = true;
  const std::size_t n = g.n();
  const std::int64_t T = static_cast<std::int64_t>(prune_threshold(n, h.epsilon));
  for (unsigned i = 1; i < h.kappa; ++i) {
    ClusterForest& f = h.levels[i].clusters;
    auto ch = f.children();
    std::vector<Record> cin(n);
    for (NodeId v = 0; v < n; ++v) {
      if (!f.contains(v)) {
        cin[v] = {-1, 0};
        continue;
      }
      cin[v] = {f.parent[v], 1};
      for (NodeId x : ch[v]) cin[v].push_back(x);
    }
    auto cc = run_part("bs.prune.count", g, ConvergecastProgram{ConvergecastProgram::Op::Sum, T}, cin, 4 * n + 8,
                       h.seed, h.metrics);
    std::vector<std::uint8_t> cut(n, 0);
    bool any = false;
    for (NodeId v = 0; v < n; ++v)
      if (f.contains(v) && cc.outputs[v][1]) {
        cut[v] = 1;
        any = true;
      }
    if (!any) continue;
    std::vector<std::int64_t> ids(n);
    for (NodeId v = 0; v < n; ++v) ids[v] = v;
    auto tc = run_part("bs.prune.rename", g, TreeCastProgram{}, tree_cast_inputs(f, ids, &cut), 4 * n + 8, h.seed,
                       h.metrics);
    std::vector<std::int64_t> parent = f.parent;
    std::vector<std::uint8_t> member(n, 0);
    for (NodeId v = 0; v < n; ++v) {
      member[v] = f.contains(v) ? 1 : 0;
      if (cut[v]) parent[v] = -1;
    }
    ClusterForest nf = ClusterForest::from_parents(parent, &member);
    for (NodeId v = 0; v < n; ++v)
      if (nf.contains(v) && nf.center[v] != tc.outputs[v][0])
        throw InvariantViolation("pruned center ids disagree");
    f = std::move(nf);
  }
  // Rebuild F*_i against the pruned clusterings of level i - 1.
  for (unsigned i = 2; i <= h.kappa; ++i) {
    const ClusterForest& prev = h.levels[i - 1].clusters;
    std::vector<Record> xin(n);
    for (NodeId v = 0; v < n; ++v) xin[v] = prev.contains(v) ? Record{1, prev.center[v]} : Record{0};
    auto heard = exchange("bs.prune.exchange", g, xin, h.seed, h.metrics);
    for (NodeId v = 0; v < n; ++v)
      if (h.levels[i].low[v]) h.levels[i].f[v] = pick_f(heard[v], prev.center[v]);
  }
  h.refresh_cluster_edges(g);
  return h;
}

BsHierarchy build_pruned_hierarchy(const Graph& g, double epsilon, std::uint64_t seed, const Constants& c) {
  return with_reseed(seed, c.max_reseeds, [&](std::uint64_t s) {
    BsHierarchy p = prune_hierarchy(g, build_bs_hierarchy(g, epsilon, s, c));
    const double bound = bs_degree_bound(g.n(), epsilon, c);
    for (unsigned i = 1; i <= p.kappa; ++i)
      for (NodeId v = 0; v < g.n(); ++v)
        if (static_cast<double>(p.levels[i].f[v].size()) > bound)
          throw WhpFailure("bs degree", "pruned F edges of node " + std::to_string(v) + " exceed the bound");
    return p;
  });
}

HierarchyEnsemble build_ensemble(const Graph& g, double epsilon, std::uint64_t seed, const Constants& c) {
  HierarchyEnsemble e;
  e.zeta = static_cast<std::size_t>(std::max<std::uint64_t>(1, ceil_pow(g.n(), epsilon)));
  e.metrics = SimMetrics(g.m());
  RandomStream root(seed);
  for (std::size_t j = 0; j < e.zeta; ++j) {
    e.hierarchies.push_back(build_pruned_hierarchy(g, epsilon, root.child("ensemble", j).key(), c));
    e.metrics.absorb_as("ensemble.build", e.hierarchies.back().metrics);
  }
  return e;
}

std::size_t max_cluster_multiplicity(const HierarchyEnsemble& ens) {
  std::vector<std::size_t> k;
  for (const auto& h : ens.hierarchies) {
    if (k.size() < h.cluster_edge.size()) k.resize(h.cluster_edge.size(), 0);
    for (std::size_t e = 0; e < h.cluster_edge.size(); ++e) k[e] += h.cluster_edge[e] != 0;
  }
  return k.empty() ? 0 : *std::max_element(k.begin(), k.end());
}

RarityEstimate cluster_edge_rarity(const Graph& g, double epsilon, std::size_t builds, std::uint64_t seed,
                                   const Constants& c) {
  RarityEstimate r;
  r.builds = builds;
  r.bound = c.rarity_c * kappa_for(epsilon) * std::pow(static_cast<double>(g.n()), -epsilon);
  if (builds == 0 || g.m() == 0) return r;
  std::vector<std::size_t> hits(g.m(), 0);
  RandomStream root(seed);
  for (std::size_t b = 0; b < builds; ++b) {
    BsHierarchy h = build_pruned_hierarchy(g, epsilon, root.child("build", b).key(), c);
    for (EdgeId e = 0; e < g.m(); ++e) hits[e] += h.cluster_edge[e] != 0;
  }
  std::size_t total = 0, worst = 0;
  for (auto x : hits) {
    total += x;
    worst = std::max(worst, x);
  }
  r.max_rate = static_cast<double>(worst) / static_cast<double>(builds);
  r.mean_rate = static_cast<double>(total) / static_cast<double>(builds * g.m());
  return r;
}

HierarchyReport check_hierarchy(const Graph& g, const BsHierarchy& h, std::size_t sample_edges, std::uint64_t seed) {
  HierarchyReport r;
  const std::size_t n = g.n();
  auto fail = [&](bool& flag, const std::string& what) {
    flag = false;
    if (r.problems.size() < 32) r.problems.push_back(what);
  };
  if (h.levels.size() != h.kappa + 1) {
    fail(r.structure, "level count");
    return r;
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!h.levels[0].clusters.contains(v) || h.levels[0].clusters.center[v] != v)
      fail(r.structure, "level 0 is not the singleton clustering");
    if (h.levels[h.kappa].clusters.contains(v)) fail(r.structure, "top level clustering not empty");
  }
  for (unsigned i = 0; i <= h.kappa; ++i) {
    try {
      h.levels[i].clusters.validate(g);
    } catch (const Error& e) {
      fail(r.structure, "level " + std::to_string(i) + ": " + e.what());
    }
    if (i == 0) {
      for (NodeId v = 0; v < n; ++v)
        if (h.levels[0].low[v] || !h.levels[0].f[v].empty()) fail(r.structure, "L_0 or F_0 not empty");
      continue;
    }
    const auto& prev = h.levels[i - 1].clusters;
    const auto& cur = h.levels[i].clusters;
    for (NodeId v = 0; v < n; ++v) {
      const bool in_prev = prev.contains(v);
      const bool low = h.levels[i].low[v];
      const bool in_cur = cur.contains(v);
      if (in_prev != (low || in_cur) || (low && in_cur))
        fail(r.structure, "L_" + std::to_string(i) + " and V_" + std::to_string(i) + " do not partition V_" +
                              std::to_string(i - 1));
      if (!low && !h.levels[i].f[v].empty()) fail(r.structure, "F edges on a node outside L");
    }
  }
  if (!h.pruned)
    for (unsigned i = 0; i < h.kappa; ++i)
      for (NodeId v = 0; v < n; ++v)
        if (h.levels[i].clusters.contains(v) &&
            (h.levels[i].clusters.center[v] == v) != static_cast<bool>(h.levels[i].sampled[v]))
          fail(r.structure, "cluster centers differ from the sampled set");

  // (a) strong radius from the center inside the cluster.
  std::vector<std::int64_t> dist(n, -1);
  for (unsigned i = 0; i < h.kappa; ++i) {
    const auto& f = h.levels[i].clusters;
    for (const auto& [c, members] : f.clusters()) {
      for (NodeId v : members) dist[v] = -2;
      dist[c] = 0;
      std::deque<NodeId> q{c};
      std::size_t seen = 1;
      std::int64_t rad = 0;
      while (!q.empty()) {
        NodeId x = q.front();
        q.pop_front();
        for (NodeId y : g.neighbors(x)) {
          if (dist[y] != -2) continue;
          dist[y] = dist[x] + 1;
          rad = std::max(rad, dist[y]);
          ++seen;
          q.push_back(y);
        }
      }
      if (seen != members.size() || rad > static_cast<std::int64_t>(i))
        fail(r.radius, "cluster " + std::to_string(c) + " at level " + std::to_string(i) + " has radius " +
                           std::to_string(rad));
      for (NodeId v : members) dist[v] = -1;
    }
  }

  // (b) degree and distinct target clusters.
  for (unsigned i = 1; i <= h.kappa; ++i) {
    const auto& prev = h.levels[i - 1].clusters;
    for (NodeId v = 0; v < n; ++v) {
      const auto& fv = h.levels[i].f[v];
      r.max_f_degree = std::max(r.max_f_degree, fv.size());
      std::vector<std::int64_t> cs;
      for (NodeId w : fv) {
        if (!g.adjacent(v, w) || !prev.contains(w) || prev.center[w] == prev.center[v])
          fail(r.f_distinct, "bad F edge (" + std::to_string(v) + "," + std::to_string(w) + ")");
        cs.push_back(prev.center[w]);
      }
      std::sort(cs.begin(), cs.end());
      if (std::adjacent_find(cs.begin(), cs.end()) != cs.end()) fail(r.f_distinct, "two F edges into one cluster");
    }
  }

  // (c) every edge is covered by a shared cluster or an F edge.
  auto covered = [&](NodeId u, NodeId v) {
    unsigned i = h.low_level(u), j = h.low_level(v);
    if (i > j) {
      std::swap(u, v);
      std::swap(i, j);
    }
    if (i == 0) return false;
    const auto& prev = h.levels[i - 1].clusters;
    if (!prev.contains(v) || !prev.contains(u)) return false;
    if (prev.center[u] == prev.center[v]) return true;
    for (NodeId w : h.levels[i].f[u])
      if (prev.center[w] == prev.center[v]) return true;
    return false;
  };
  std::vector<EdgeId> which;
  if (sample_edges == 0 || sample_edges >= g.m()) {
    which.resize(g.m());
    for (EdgeId e = 0; e < g.m(); ++e) which[e] = e;
  } else {
    RandomStream rs(seed);
    for (std::size_t k = 0; k < sample_edges; ++k) which.push_back(static_cast<EdgeId>(rs.uniform_int(0, g.m() - 1)));
  }
  for (EdgeId e : which) {
    ++r.coverage_checked;
    if (!covered(g.edge(e).u, g.edge(e).v))
      fail(r.coverage, "edge (" + std::to_string(g.edge(e).u) + "," + std::to_string(g.edge(e).v) + ") uncovered");
  }

  // Pruned: proper subtrees stay below the threshold.
  if (h.pruned) {
    const std::uint64_t T = prune_threshold(n, h.epsilon);
    for (unsigned i = 1; i < h.kappa; ++i) {
      const auto& f = h.levels[i].clusters;
      std::vector<std::uint64_t> size(n, 0);
      std::vector<NodeId> order;
      for (NodeId v = 0; v < n; ++v)
        if (f.contains(v)) order.push_back(v);
      std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return f.depth[a] > f.depth[b]; });
      for (NodeId v : order) {
        size[v] += 1;
        if (f.parent[v] >= 0) {
          size[static_cast<NodeId>(f.parent[v])] += size[v];
          r.max_proper_subtree = std::max(r.max_proper_subtree, size[v]);
          if (size[v] >= T) fail(r.subtree_bound, "proper subtree at " + std::to_string(v) + " too large");
        }
      }
    }
  }
  return r;
}

}  // namespace congest
