#include "congest/aggsim.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <json.hpp>
#include <unordered_map>

#include "congest/errors.hpp"
#include "congest/forest.hpp"
#include "congest/primitives.hpp"

namespace congest {

namespace {

std::size_t delivery_fields(std::span<const Delivery> ds) {
  std::size_t f = 0;
  for (const auto& d : ds) f += 1 + d.msg.size;
  return f;
}

std::uint32_t msg_words(const Message& m) { return static_cast<std::uint32_t>(words_for_fields(1 + m.size)); }

// Node-side state of a simulation plus per-phase scratch.
class Runner {
 public:
  Runner(const Graph& g, const BsHierarchy& h, const DecomposableAlgorithm& alg, std::uint64_t seed)
      : router(g), g_(g), h_(h), prog_(*alg.program), con_(*alg.contract), seed_(seed), n_(g.n()) {
    static const Record kEmpty;
    ctx_.reserve(n_);
    state.reserve(n_);
    for (NodeId v = 0; v < n_; ++v) {
      ctx_.push_back(make_context(g, v));
      RandomStream rng = node_stream(seed, v, 0);
      state.push_back(prog_.init(ctx_[v], alg.inputs.empty() ? kEmpty : alg.inputs[v], rng));
    }
    out.resize(n_);
    parts_.resize(n_);
    covered_.resize(n_);
    heard.resize(n_);
    refresh_finished();
  }

  const Graph& graph() const { return g_; }
  const BsHierarchy& hierarchy() const { return h_; }
  std::size_t n() const { return n_; }
  const NodeContext& ctx(NodeId v) const { return ctx_[v]; }
  bool finished() const { return finished_; }

  // Emissions of round p; returns the broadcasters in ascending order.
  const std::vector<NodeId>& begin_phase(std::uint64_t p) {
    p_ = p;
    broadcasters.clear();
    for (NodeId v = 0; v < n_; ++v) {
      out[v] = prog_.broadcast(ctx_[v], state[v], p);
      parts_[v].clear();
      covered_[v].clear();
      heard[v].clear();
      if (!out[v]) continue;
      check_payload(*out[v], n_, v, p);
      broadcasters.push_back(v);
    }
    return broadcasters;
  }

  // Contracted packet for u from the given senders (ascending).
  std::vector<Delivery> aggregate_for(NodeId u, std::span<const NodeId> senders) {
    scratch_.clear();
    for (NodeId s : senders) scratch_.push_back({s, *out[s]});
    std::vector<Delivery> agg = con_.aggregate(ctx_[u], p_, scratch_);
    if (encoded_words(agg) > con_.max_words())
      throw ContractViolation("aggregate for node " + std::to_string(u) + " in round " + std::to_string(p_) +
                              " takes " + std::to_string(encoded_words(agg)) + " words, more than " +
                              std::to_string(con_.max_words()));
    for (const auto& d : agg)
      if (!std::binary_search(scratch_.begin(), scratch_.end(), d))
        throw ContractViolation("aggregate for node " + std::to_string(u) + " is not a subset of its inputs");
    return agg;
  }

  void deliver(NodeId u, const std::vector<Delivery>& packet, std::span<const NodeId> senders) {
    parts_[u].insert(parts_[u].end(), packet.begin(), packet.end());
    covered_[u].insert(covered_[u].end(), senders.begin(), senders.end());
  }

  // Receive step over the clusters of the given levels: receipts are upcast,
  // centers aggregate for every member adjacent to a known broadcaster.
  void receive(unsigned lo, unsigned hi, SimMetrics& step) {
    const auto& levels = h_.levels;
    for (NodeId x = 0; x < n_; ++x) {
      if (heard[x].empty()) continue;
      std::uint32_t w = 0;
      for (NodeId s : heard[x]) w += msg_words(*out[s]);
      for (unsigned i = std::max(lo, 1u); i < hi; ++i)
        if (levels[i].clusters.contains(x)) router.add_up(levels[i].clusters, x, w, i);
    }
    router.run(step);

    std::map<std::uint64_t, std::vector<NodeId>> known;
    auto note = [&](NodeId member, NodeId s) {
      for (unsigned i = lo; i < hi; ++i)
        if (levels[i].clusters.contains(member))
          known[static_cast<std::uint64_t>(i) * n_ + static_cast<std::uint64_t>(levels[i].clusters.center[member])]
              .push_back(s);
    };
    for (NodeId v : broadcasters) note(v, v);
    for (NodeId x = 0; x < n_; ++x)
      for (NodeId s : heard[x]) note(x, s);

    std::map<NodeId, std::vector<NodeId>> bucket;
    for (auto& [k, ss] : known) {
      std::sort(ss.begin(), ss.end());
      ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
      const auto i = static_cast<unsigned>(k / n_);
      const auto c = static_cast<std::int64_t>(k % n_);
      const ClusterForest& f = levels[i].clusters;
      bucket.clear();
      for (NodeId s : ss)
        for (NodeId y : g_.neighbors(s))
          if (f.center[y] == c) bucket[y].push_back(s);
      for (const auto& [y, senders] : bucket) {
        auto agg = aggregate_for(y, senders);
        deliver(y, agg, senders);
        router.add_down(f, y, static_cast<std::uint32_t>(words_for_fields(delivery_fields(agg))), i);
      }
    }
    router.run(step);
  }

  // Checks coverage and applies every node's transition.
  void compute() {
    std::vector<NodeId> expect;
    for (NodeId y = 0; y < n_; ++y) {
      auto& cov = covered_[y];
      std::sort(cov.begin(), cov.end());
      cov.erase(std::unique(cov.begin(), cov.end()), cov.end());
      expect.clear();
      for (NodeId u : ctx_[y].nbrs)
        if (out[u]) expect.push_back(u);
      if (cov != expect)
        throw InvariantViolation("node " + std::to_string(y) + " received aggregates covering " +
                                 std::to_string(cov.size()) + " senders instead of its " +
                                 std::to_string(expect.size()) + " broadcasting neighbors in round " +
                                 std::to_string(p_));
      auto& inbox = parts_[y];
      canonicalize(inbox);
      RandomStream rng = node_stream(seed_, y, p_);
      prog_.transition(ctx_[y], state[y], p_, inbox, rng);
    }
    refresh_finished();
  }

  std::vector<Record> outputs() const {
    std::vector<Record> r;
    r.reserve(n_);
    for (NodeId v = 0; v < n_; ++v) r.push_back(prog_.output(ctx_[v], state[v]));
    return r;
  }

  std::vector<State> state;
  std::vector<std::optional<Message>> out;
  std::vector<NodeId> broadcasters;
  // Senders whose message arrived over an F edge (or a matched edge).
  std::vector<std::vector<NodeId>> heard;
  Router router;

 private:
  void refresh_finished() {
    finished_ = true;
    for (NodeId v = 0; v < n_ && finished_; ++v) finished_ = prog_.quiescent(ctx_[v], state[v]);
  }

  const Graph& g_;
  const BsHierarchy& h_;
  const Program& prog_;
  const AggregationContract& con_;
  std::uint64_t seed_;
  std::size_t n_;
  std::uint64_t p_ = 0;
  bool finished_ = false;
  std::vector<NodeContext> ctx_;
  std::vector<std::vector<Delivery>> parts_;
  std::vector<std::vector<NodeId>> covered_;
  std::vector<Delivery> scratch_;
};

// F adjacency over all levels and, per (cluster, outside node), the smallest
// F-edge endpoint inside the cluster.
struct GeneralIndex {
  std::vector<std::vector<NodeId>> fadj;
  std::unordered_map<std::uint64_t, NodeId> endpoint;
  std::vector<std::vector<std::pair<unsigned, NodeId>>> memb;
  std::size_t n = 0;

  std::uint64_t cluster_key(unsigned i, NodeId c) const { return static_cast<std::uint64_t>(i) * n + c; }
  std::uint64_t key(std::uint64_t cluster, NodeId u) const { return cluster * n + u; }

  explicit GeneralIndex(const BsHierarchy& h) : n(h.n()) {
    fadj.assign(n, {});
    for (unsigned i = 1; i < h.levels.size(); ++i)
      for (NodeId v = 0; v < n; ++v)
        for (NodeId w : h.levels[i].f[v]) {
          fadj[v].push_back(w);
          fadj[w].push_back(v);
        }
    for (auto& a : fadj) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    memb.resize(n);
    for (NodeId v = 0; v < n; ++v) memb[v] = h.memberships(v);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId w : fadj[u])
        for (auto [i, c] : memb[w]) {
          if (h.levels[i].clusters.center[u] == static_cast<std::int64_t>(c)) continue;
          auto [it, fresh] = endpoint.emplace(key(cluster_key(i, c), u), w);
          if (!fresh) it->second = std::min(it->second, w);
        }
  }
};

void close_phase(const char* where, std::uint64_t p, std::uint64_t budget, SimMetrics& step, PhaseStat& st) {
  if (step.rounds > budget) throw BudgetError(where, p, step.rounds, budget);
  step.rounds = std::max<std::uint64_t>(step.rounds, 1);
  step.dilation = step.rounds;
  st.rounds = step.rounds;
}

PhaseStat general_phase(Runner& r, const GeneralIndex& ix, std::uint64_t p, std::uint64_t budget, SimMetrics& m) {
  const Graph& g = r.graph();
  const BsHierarchy& h = r.hierarchy();
  const std::size_t n = r.n();
  PhaseStat st;
  st.p = p;
  const auto& B = r.begin_phase(p);
  st.broadcasters = B.size();
  m.broadcasts += B.size();
  SimMetrics step = m.child();

  // Indirect send over incident F edges.
  for (NodeId v : B)
    for (NodeId w : ix.fadj[v]) {
      r.router.add_edge(v, w, msg_words(*r.out[v]));
      r.heard[w].push_back(v);
    }
  r.router.run(step);

  // Direct send: upcast in every cluster, centers aggregate per outside
  // neighbor with an F edge into the cluster.
  for (NodeId v : B)
    for (auto [i, c] : ix.memb[v])
      if (i > 0) r.router.add_up(h.levels[i].clusters, v, msg_words(*r.out[v]), i);
  r.router.run(step);

  std::map<std::uint64_t, std::vector<NodeId>> bucket;
  for (NodeId v : B)
    for (auto [i, c] : ix.memb[v]) {
      const std::uint64_t ck = ix.cluster_key(i, c);
      for (NodeId u : g.neighbors(v)) {
        const std::uint64_t k = ix.key(ck, u);
        if (ix.endpoint.count(k)) bucket[k].push_back(v);
      }
    }
  struct Hop {
    NodeId w, u;
    std::uint32_t words;
  };
  std::vector<Hop> hops;
  for (const auto& [k, senders] : bucket) {
    const auto u = static_cast<NodeId>(k % n);
    const std::uint64_t ck = k / n;
    const auto i = static_cast<unsigned>(ck / n);
    const NodeId w = ix.endpoint.at(k);
    auto agg = r.aggregate_for(u, senders);
    r.deliver(u, agg, senders);
    const std::size_t f = delivery_fields(agg);
    r.router.add_down(h.levels[i].clusters, w, static_cast<std::uint32_t>(words_for_fields(f + 1)), i);
    hops.push_back({w, u, static_cast<std::uint32_t>(words_for_fields(f))});
  }
  r.router.run(step);
  for (const auto& x : hops) r.router.add_edge(x.w, x.u, x.words);
  r.router.run(step);
  st.messages_step1 = step.messages;

  r.receive(0, h.kappa, step);
  st.messages_step2 = step.messages - st.messages_step1;
  r.compute();
  close_phase("agg-sim general phase", p, budget, step, st);
  m.absorb(step);
  return st;
}

PhaseStat star_phase(Runner& r, std::uint64_t p, std::uint64_t budget, bool check_matching, std::uint64_t& matched,
                     SimMetrics& m) {
  const Graph& g = r.graph();
  const BsHierarchy& h = r.hierarchy();
  const bool stars = h.kappa >= 2;
  const ClusterForest& f1 = h.levels[1].clusters;
  auto clustered = [&](NodeId v) { return stars && f1.contains(v); };
  PhaseStat st;
  st.p = p;
  const auto& B = r.begin_phase(p);
  st.broadcasters = B.size();
  m.broadcasts += B.size();
  SimMetrics step = m.child();

  // Direct sends from unclustered broadcasters, and from star members to
  // unclustered neighbors; star members also send to their center.
  std::map<NodeId, std::vector<NodeId>> by_cluster;
  for (NodeId v : B) {
    const bool in = clustered(v);
    for (NodeId u : g.neighbors(v)) {
      if (in && clustered(u)) continue;
      r.router.add_edge(v, u, msg_words(*r.out[v]));
      std::vector<Delivery> one{{v, *r.out[v]}};
      r.deliver(u, one, std::span<const NodeId>(&v, 1));
    }
    if (in) {
      r.router.add_up(f1, v, msg_words(*r.out[v]), 1);
      by_cluster[static_cast<NodeId>(f1.center[v])].push_back(v);
    }
  }
  r.router.run(step);

  // Centers match broadcasters to members of each neighboring cluster.
  struct Cand {
    EdgeId e;
    NodeId v, u;
  };
  struct Hop {
    NodeId w, u;
    std::uint32_t words;
  };
  std::vector<Hop> hops;
  std::map<NodeId, std::vector<Cand>> cand;
  std::map<NodeId, std::vector<NodeId>> senders_of;
  for (const auto& [c, bs] : by_cluster) {
    cand.clear();
    for (NodeId v : bs) {
      const NodeContext& cv = r.ctx(v);
      for (std::size_t k = 0; k < cv.nbrs.size(); ++k) {
        const NodeId u = cv.nbrs[k];
        if (clustered(u) && f1.center[u] != static_cast<std::int64_t>(c))
          cand[static_cast<NodeId>(f1.center[u])].push_back({cv.edges[k], v, u});
      }
    }
    for (auto& [c2, es] : cand) {
      std::sort(es.begin(), es.end(), [](const Cand& a, const Cand& b) { return a.e < b.e; });
      std::vector<NodeId> used_l, used_r;
      auto used = [](const std::vector<NodeId>& s, NodeId x) { return std::find(s.begin(), s.end(), x) != s.end(); };
      std::vector<std::pair<NodeId, NodeId>> match;
      for (const auto& e : es)
        if (!used(used_l, e.v) && !used(used_r, e.u)) {
          used_l.push_back(e.v);
          used_r.push_back(e.u);
          match.push_back({e.v, e.u});
        }
      if (check_matching)
        for (const auto& e : es)
          if (!used(used_l, e.v) && !used(used_r, e.u))
            throw InvariantViolation("matching between clusters " + std::to_string(c) + " and " +
                                     std::to_string(c2) + " is not maximal");
      senders_of.clear();
      for (const auto& e : es) senders_of[e.u].push_back(e.v);
      matched += match.size();
      for (auto [w, u] : match) {
        auto& ss = senders_of[u];
        std::sort(ss.begin(), ss.end());
        auto agg = r.aggregate_for(u, ss);
        r.deliver(u, agg, ss);
        r.heard[u].push_back(w);
        const std::size_t f = delivery_fields(agg);
        const std::uint32_t m1 = msg_words(*r.out[w]);
        r.router.add_down(f1, w, m1 + static_cast<std::uint32_t>(words_for_fields(f + 1)), 1);
        hops.push_back({w, u, m1 + static_cast<std::uint32_t>(words_for_fields(f))});
      }
    }
  }
  r.router.run(step);
  for (const auto& x : hops) r.router.add_edge(x.w, x.u, x.words);
  r.router.run(step);
  st.messages_step1 = step.messages;

  if (stars) r.receive(1, 2, step);
  st.messages_step2 = step.messages - st.messages_step1;
  r.compute();
  close_phase("agg-sim star phase", p, budget, step, st);
  m.absorb(step);
  return st;
}

template <class Phase>
AggSimResult drive(const Graph& g, const BsHierarchy& h, const DecomposableAlgorithm& alg, std::uint64_t seed,
                   const AggSimOptions& opt, std::uint64_t budget, Phase&& phase) {
  if (!alg.program || !alg.contract) throw InvalidArgument("algorithm needs a program and a contract");
  if (alg.program->mode() != Mode::Bcongest)
    throw InvalidArgument("program '" + alg.program->name() + "' is not a broadcast program");
  require_undirected(g);
  require_connected(g);
  if (h.n() != g.n()) throw InvalidArgument("hierarchy was built for a different graph");
  if (!alg.inputs.empty() && alg.inputs.size() != g.n())
    throw InvalidArgument("inputs must have one record per node");

  AggSimResult res;
  res.phase_budget = budget;
  SimMetrics total(g.m());
  if (opt.keep_trace) total.trace = std::make_shared<Trace>();
  RandomStream root(seed);
  if (opt.run_setup) global_setup(g, root.child("aggsim.setup").key(), total);

  // Centers learn their members' edges and hierarchy links.
  {
    Router up(g);
    for (unsigned i = 1; i < h.kappa; ++i) {
      const ClusterForest& f = h.levels[i].clusters;
      for (NodeId v = 0; v < g.n(); ++v)
        if (f.contains(v)) up.add_up(f, v, static_cast<std::uint32_t>(words_for_fields(1 + 2 * g.degree(v))), i);
    }
    SimMetrics s = total.child();
    up.run(s);
    total.absorb_as("aggsim.upcast", s);
  }
  res.preprocessing_messages = total.messages;

  Runner r(g, h, alg, seed);
  std::unique_ptr<Stepper> shadow;
  if (opt.shadow_check) shadow = std::make_unique<Stepper>(g, *alg.program, alg.inputs, seed);
  auto compare = [&](std::uint64_t p) {
    if (shadow && (shadow->states() != r.state || shadow->done() != r.finished()))
      throw InvariantViolation("node states diverged from the direct run after phase " + std::to_string(p));
  };
  compare(0);

  SimMetrics ph = total.child();
  for (std::uint64_t p = 1; p <= alg.round_bound && !r.finished(); ++p) {
    PhaseStat st = phase(r, p, ph);
    res.max_phase_rounds = std::max(res.max_phase_rounds, st.rounds);
    ph.per_phase.push_back(st);
    res.simulated_rounds = p;
    if (shadow) shadow->step();
    compare(p);
  }
  if (!r.finished()) {
    total.absorb_as("aggsim.phases", ph);
    throw TimeoutError(alg.round_bound, std::make_shared<SimMetrics>(total));
  }
  // Idle phases up to the round bound take one round each.
  ph.rounds += alg.round_bound - res.simulated_rounds;
  ph.dilation = ph.rounds;

  res.phase_congestion = ph.edge_congestion;
  for (EdgeId e = 0; e < g.m(); ++e) {
    const bool ce = e < h.cluster_edge.size() && h.cluster_edge[e];
    auto& slot = ce ? res.cluster_congestion : res.noncluster_congestion;
    slot = std::max(slot, ph.edge_congestion[e]);
  }
  total.absorb_as("aggsim.phases", ph);
  res.outputs = r.outputs();
  total.in_bits = input_bits(g, alg.inputs);
  total.out_bits = output_bits(g.n(), res.outputs);
  res.metrics = std::move(total);
  return res;
}

}  // namespace

std::uint64_t general_phase_budget(std::size_t n, const Constants& c) {
  return static_cast<std::uint64_t>(std::ceil(c.c2 * static_cast<double>(n) * log2n(n) - 1e-9));
}

std::uint64_t star_phase_budget(std::size_t n, double epsilon, const Constants& c) {
  return static_cast<std::uint64_t>(
      std::ceil(c.c3 * std::pow(static_cast<double>(n), 1.0 - epsilon) * log2n(n) - 1e-9));
}

AggSimResult simulate_general(const Graph& g, const BsHierarchy& h, const DecomposableAlgorithm& alg,
                              std::uint64_t seed, const Constants& c, const AggSimOptions& opt) {
  GeneralIndex ix(h);
  return drive(g, h, alg, seed, opt, general_phase_budget(g.n(), c),
               [&](Runner& r, std::uint64_t p, SimMetrics& m) { return general_phase(r, ix, p, general_phase_budget(g.n(), c), m); });
}

AggSimResult simulate_star(const Graph& g, const BsHierarchy& h, const DecomposableAlgorithm& alg,
                           std::uint64_t seed, const Constants& c, const AggSimOptions& opt) {
  if (h.kappa > 2)
    throw PreconditionError("star simulation needs at most two hierarchy levels, got " + std::to_string(h.kappa));
  const std::uint64_t budget = star_phase_budget(g.n(), h.epsilon, c);
  std::uint64_t matched = 0;
  auto res = drive(g, h, alg, seed, opt, budget, [&](Runner& r, std::uint64_t p, SimMetrics& m) {
    return star_phase(r, p, budget, opt.check_matching, matched, m);
  });
  res.matched_edges = matched;
  return res;
}

SmoothingResult combine_with_smoothing(const Graph& g, const HierarchyEnsemble& ens,
                                       const std::vector<DecomposableAlgorithm>& batches, std::uint64_t seed,
                                       const Constants& c, const SmoothingOptions& opt) {
  if (ens.hierarchies.empty()) throw InvalidArgument("empty hierarchy ensemble");
  SmoothingResult res;
  res.metrics = SimMetrics(g.m());
  RandomStream root(seed);
  global_setup(g, root.child("smoothing.setup").key(), res.metrics);

  AggSimOptions so;
  so.run_setup = false;
  so.keep_trace = true;
  so.shadow_check = opt.shadow_check;
  std::vector<AggSimResult> runs;
  runs.reserve(batches.size());
  for (std::size_t j = 0; j < batches.size(); ++j) {
    const std::size_t hi = opt.single_hierarchy ? 0 : j % ens.hierarchies.size();
    res.hierarchy_of.push_back(hi);
    const BsHierarchy& h = ens.hierarchies[hi];
    const std::uint64_t s = root.child("smoothing.batch", j).key();
    runs.push_back(opt.kind == SimKind::Star ? simulate_star(g, h, batches[j], s, c, so)
                                             : simulate_general(g, h, batches[j], s, c, so));
  }

  std::vector<const Trace*> traces;
  for (const auto& r : runs) traces.push_back(r.metrics.trace.get());
  res.schedule = central_schedule(traces, g.n(), root.child("smoothing.schedule").key(), c);

  res.cluster_load.assign(g.m(), 0);
  res.other_load.assign(g.m(), 0);
  SimMetrics merged(g.m());
  for (std::size_t j = 0; j < runs.size(); ++j) {
    const BsHierarchy& h = ens.hierarchies[res.hierarchy_of[j]];
    const auto& load = runs[j].metrics.edge_congestion;
    for (EdgeId e = 0; e < g.m(); ++e) {
      (h.cluster_edge[e] ? res.cluster_load : res.other_load)[e] += load[e];
      merged.edge_congestion[e] += load[e];
    }
    res.batch_load.push_back(load);
    merged.messages += runs[j].metrics.messages;
    merged.broadcasts += runs[j].metrics.broadcasts;
    merged.per_phase.insert(merged.per_phase.end(), runs[j].metrics.per_phase.begin(),
                            runs[j].metrics.per_phase.end());
    for (const auto& [k, v] : runs[j].metrics.counters) merged.counters[k] += v;
    merged.in_bits = std::max(merged.in_bits, runs[j].metrics.in_bits);
    merged.out_bits += runs[j].metrics.out_bits;
    res.outputs.push_back(std::move(runs[j].outputs));
  }
  merged.rounds = res.schedule.length;
  merged.counters["smoothing.schedule.rounds"] += res.schedule.length;
  res.metrics.absorb(merged);
  res.max_cluster_congestion = *std::max_element(res.cluster_load.begin(), res.cluster_load.end());
  res.max_noncluster_congestion = *std::max_element(res.other_load.begin(), res.other_load.end());
  return res;
}

std::string congestion_audit_json(const Graph& g, const SmoothingResult& r) {
  nlohmann::ordered_json j;
  j["schedule_length"] = r.schedule.length;
  j["congestion"] = r.schedule.congestion;
  j["dilation"] = r.schedule.dilation;
  j["max_cluster_congestion"] = r.max_cluster_congestion;
  j["max_noncluster_congestion"] = r.max_noncluster_congestion;
  j["hierarchy_of_batch"] = r.hierarchy_of;
  auto& edges = j["edges"] = nlohmann::ordered_json::array();
  for (EdgeId e = 0; e < g.m(); ++e) {
    const std::uint64_t total = r.cluster_load[e] + r.other_load[e];
    if (total == 0) continue;
    nlohmann::ordered_json ej;
    ej["edge"] = e;
    ej["u"] = g.edge(e).u;
    ej["v"] = g.edge(e).v;
    ej["total"] = total;
    ej["cluster"] = r.cluster_load[e];
    ej["other"] = r.other_load[e];
    auto& per = ej["batches"] = nlohmann::ordered_json::object();
    for (std::size_t b = 0; b < r.batch_load.size(); ++b)
      if (r.batch_load[b][e]) per[std::to_string(b)] = r.batch_load[b][e];
    edges.push_back(std::move(ej));
  }
  return j.dump(2);
}

}  // namespace congest
