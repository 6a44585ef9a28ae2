#include "congest/bcsim.hpp"

#include <algorithm>
#include <cmath>

#include "congest/errors.hpp"
#include "congest/retry.hpp"

namespace congest {

namespace {

bool all_quiescent(const Program& prog, const CenterLedger& l) {
  for (NodeId v = 0; v < l.state.size(); ++v)
    if (!prog.quiescent(l.ctx[v], l.state[v])) return false;
  return true;
}

std::size_t edge_fields(const Graph& g, NodeId v) { return g.degree(v) * (g.weighted() ? 2 : 1); }

// Runs one fixed-length step: the routers share the step's rounds, which
// must fit in `budget`; the step is then charged the full budget.
void close_step(const char* where, std::uint64_t phase, std::uint64_t budget, SimMetrics& step) {
  if (step.rounds > budget) throw BudgetError(where, phase, step.rounds, budget);
  step.rounds = budget;
  step.dilation = budget;
}

}  // namespace

std::uint64_t phase_budget(std::size_t n, const Constants& c) {
  return static_cast<std::uint64_t>(std::ceil(c.c1 * static_cast<double>(n) * log2n(n) - 1e-9));
}

BcSimBase prepare_base(const Graph& g, std::uint64_t seed, const Constants& c) {
  require_undirected(g);
  require_connected(g);
  BcSimBase b;
  b.metrics = SimMetrics(g.m());
  RandomStream root(seed);
  b.setup = global_setup(g, root.child("bcsim.setup").key(), b.metrics);
  b.ldc = with_reseed(
      root.child("bcsim.ldc").key(), c.max_reseeds,
      [&](std::uint64_t s) { return ldc_decompose(g, c.ldc_beta, s, c); }, &b.ldc_attempts);
  b.metrics.absorb_as("bcsim.ldc", b.ldc.metrics);
  return b;
}

namespace {

// Every node upcasts its input record and edge list to its center; the
// ledger states are initialised with the program's round-0 stream.
void fill_ledger(const Graph& g, const Program& prog, const std::vector<Record>& inputs, std::uint64_t seed,
                 Preprocessing& pre) {
  if (!inputs.empty() && inputs.size() != g.n()) throw InvalidArgument("inputs must have one record per node");
  const std::size_t n = g.n();
  static const Record kEmpty;
  Router r(g);
  for (NodeId v = 0; v < n; ++v) {
    const Record& in = inputs.empty() ? kEmpty : inputs[v];
    r.add_up(pre.ldc.forest, v, static_cast<std::uint32_t>(words_for_fields(1 + in.size() + edge_fields(g, v))));
  }
  SimMetrics up = pre.metrics.child();
  r.run(up);
  pre.metrics.absorb_as("bcsim.upcast", up);

  CenterLedger& l = pre.ledger;
  l.members = pre.ldc.forest.clusters();
  l.ctx.reserve(n);
  l.state.reserve(n);
  l.input.reserve(n);
  for (NodeId v = 0; v < n; ++v) {
    l.ctx.push_back(make_context(g, v));
    l.input.push_back(inputs.empty() ? kEmpty : inputs[v]);
    RandomStream rng = node_stream(seed, v, 0);
    l.state.push_back(prog.init(l.ctx[v], l.input[v], rng));
  }
  l.finished = all_quiescent(prog, l);
}

}  // namespace

Preprocessing preprocess(const Graph& g, const Program& prog, const std::vector<Record>& inputs, std::uint64_t seed,
                         const Constants& c) {
  BcSimBase b = prepare_base(g, seed, c);
  Preprocessing pre;
  pre.setup = std::move(b.setup);
  pre.ldc = std::move(b.ldc);
  pre.metrics = std::move(b.metrics);
  pre.ldc_attempts = b.ldc_attempts;
  fill_ledger(g, prog, inputs, seed, pre);
  return pre;
}

Preprocessing preprocess(const Graph& g, const Program& prog, const std::vector<Record>& inputs, std::uint64_t seed,
                         const BcSimBase& base) {
  require_undirected(g);
  require_connected(g);
  if (base.ldc.forest.n() != g.n()) throw InvalidArgument("base was prepared for a different graph");
  Preprocessing pre;
  pre.setup = base.setup;
  pre.ldc = base.ldc;
  pre.metrics = SimMetrics(g.m());
  pre.ldc_attempts = base.ldc_attempts;
  fill_ledger(g, prog, inputs, seed, pre);
  return pre;
}

PhaseStat run_phase(const Graph& g, const Program& prog, const LdcDecomposition& ldc, CenterLedger& l,
                    std::uint64_t seed, std::uint64_t budget, SimMetrics& m) {
  const std::uint64_t p = l.round;
  const std::size_t n = g.n();
  const ClusterForest& f = ldc.forest;
  PhaseStat st;
  st.p = p;

  // Centers decide who broadcasts and what.
  std::vector<std::optional<Message>> out(n);
  for (const auto& [c, mem] : l.members) {
    for (NodeId v : mem) {
      out[v] = prog.broadcast(l.ctx[v], l.state[v], p);
      if (!out[v]) continue;
      check_payload(*out[v], n, v, p);
      ++st.broadcasters;
    }
  }
  m.broadcasts += st.broadcasters;

  // Step 1: downcast (F edge, message) pairs, then send across F edges.
  SimMetrics s1 = m.child();
  {
    Router down(g);
    for (NodeId v = 0; v < n; ++v)
      if (out[v] && !ldc.f_out[v].empty())
        down.add_down(f, v, static_cast<std::uint32_t>(ldc.f_out[v].size() * words_for_fields(1 + out[v]->size)));
    down.run(s1);
    Router across(g);
    for (NodeId v = 0; v < n; ++v)
      if (out[v])
        for (NodeId u : ldc.f_out[v]) across.add_edge(v, u, 1);
    across.run(s1);
  }
  close_step("bc-sim step 1 (downcast and F sends)", p, budget, s1);
  st.messages_step1 = s1.messages;

  // Step 2: receivers upcast what arrived over F edges.
  std::map<NodeId, std::map<NodeId, Message>> heard;
  SimMetrics s2 = s1.child();
  {
    Router up(g);
    for (NodeId v = 0; v < n; ++v) {
      if (!out[v]) continue;
      for (NodeId u : ldc.f_out[v]) {
        heard[ldc.center(u)].emplace(v, *out[v]);
        up.add_up(f, u, static_cast<std::uint32_t>(words_for_fields(1 + out[v]->size)));
      }
    }
    up.run(s2);
  }
  close_step("bc-sim step 2 (upcast receipts)", p, budget, s2);
  st.messages_step2 = s2.messages;

  // Centers apply the round for every member.
  for (const auto& [c, mem] : l.members) {
    auto& known = heard[c];
    for (NodeId v : mem)
      if (out[v]) known.emplace(v, *out[v]);
    std::vector<Delivery> inbox;
    for (NodeId x : mem) {
      inbox.clear();
      for (NodeId y : l.ctx[x].nbrs) {
        auto it = known.find(y);
        if (it != known.end())
          inbox.push_back({y, it->second});
        else if (out[y])
          throw InvariantViolation("center " + std::to_string(c) + " missed the broadcast of " + std::to_string(y) +
                                   " in round " + std::to_string(p));
      }
      RandomStream rng = node_stream(seed, x, p);
      prog.transition(l.ctx[x], l.state[x], p, inbox, rng);
    }
  }

  m.absorb(s1);
  m.absorb(s2);
  st.rounds = s1.rounds + s2.rounds;
  ++l.round;
  l.finished = all_quiescent(prog, l);
  return st;
}

double simulation_message_bound(std::size_t n, std::uint64_t in_bits, std::uint64_t out_bits,
                                std::uint64_t broadcasts, double C) {
  const double fb = field_bits(n);
  const double lg = log2n(n);
  return C * (static_cast<double>(in_bits) / fb + static_cast<double>(out_bits) / fb + static_cast<double>(broadcasts)) *
         lg * lg;
}

std::uint64_t check_inter_cluster_traffic(const Graph& g, const LdcDecomposition& ldc, const Trace& t) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < t.slice_count(); ++i) {
    auto s = t.slice(i);
    for (const DirEdge* d = s.begin; d != s.end; ++d) {
      const Edge& e = g.edge(Graph::edge_of(*d));
      NodeId from = (*d & 1) ? e.v : e.u;
      NodeId to = (*d & 1) ? e.u : e.v;
      if (ldc.center(from) == ldc.center(to)) continue;
      ++count;
      if (!ldc.has_f_edge(from, to))
        throw InvariantViolation("message from " + std::to_string(from) + " to " + std::to_string(to) +
                                 " crosses clusters outside F");
    }
  }
  return count;
}

namespace {

void require_broadcast(const Program& prog) {
  if (prog.mode() != Mode::Bcongest)
    throw InvalidArgument("program '" + prog.name() + "' is not a broadcast program");
}

BcSimResult run_prepared(const Graph& g, const Program& prog, const std::vector<Record>& inputs,
                         std::uint64_t max_rounds, std::uint64_t seed, Preprocessing pre, const Constants& c,
                         const BcSimOptions& opt) {
  BcSimResult res;
  res.phase_budget = phase_budget(g.n(), c);
  // Each step takes at least one round even when nothing crosses a cluster.
  if (res.phase_budget == 0 && max_rounds > 0) throw BudgetError("bc-sim phase budget", 1, 1, 0);
  res.preprocessing_messages = pre.metrics.messages;
  SimMetrics total = std::move(pre.metrics);
  SimMetrics ph = total.child();
  if (opt.check_f_edges) ph.trace = std::make_shared<Trace>();

  std::unique_ptr<Stepper> shadow;
  if (opt.shadow_check) shadow = std::make_unique<Stepper>(g, prog, inputs, seed);
  auto compare = [&](std::uint64_t p) {
    if (!shadow) return;
    if (shadow->states() != pre.ledger.state || shadow->done() != pre.ledger.finished)
      throw InvariantViolation("center ledger diverged from the direct run after phase " + std::to_string(p));
  };
  compare(0);

  CenterLedger& l = pre.ledger;
  for (std::uint64_t p = 1; p <= max_rounds && !l.finished; ++p) {
    ph.per_phase.push_back(run_phase(g, prog, pre.ldc, l, seed, res.phase_budget, ph));
    res.simulated_rounds = p;
    if (shadow) shadow->step();
    compare(p);
  }
  if (!l.finished) {
    total.absorb_as("bcsim.phases", ph);
    throw TimeoutError(max_rounds, std::make_shared<SimMetrics>(total));
  }
  // Nodes cannot tell that the program has stopped; remaining phases idle.
  ph.rounds += 2 * res.phase_budget * (max_rounds - res.simulated_rounds);
  ph.dilation = ph.rounds;

  // Final downcast of every member's output.
  res.outputs.reserve(g.n());
  Router r(g);
  for (NodeId v = 0; v < g.n(); ++v) {
    res.outputs.push_back(prog.output(l.ctx[v], l.state[v]));
    if (!res.outputs[v].empty())
      r.add_down(pre.ldc.forest, v, static_cast<std::uint32_t>(words_for_fields(res.outputs[v].size())));
  }
  SimMetrics od = ph.child();
  r.run(od);
  ph.absorb_as("bcsim.output", od);

  if (opt.check_f_edges) res.inter_cluster_messages = check_inter_cluster_traffic(g, pre.ldc, *ph.trace);
  ph.trace.reset();
  total.absorb_as("bcsim.phases", ph);
  total.in_bits = input_bits(g, inputs);
  total.out_bits = output_bits(g.n(), res.outputs);
  res.metrics = std::move(total);
  res.ldc = std::move(pre.ldc);
  return res;
}

}  // namespace

BcSimResult simulate(const Graph& g, const Program& prog, const std::vector<Record>& inputs,
                     std::uint64_t max_rounds, std::uint64_t seed, const Constants& c, const BcSimOptions& opt) {
  require_broadcast(prog);
  return run_prepared(g, prog, inputs, max_rounds, seed, preprocess(g, prog, inputs, seed, c), c, opt);
}

BcSimResult simulate(const Graph& g, const Program& prog, const std::vector<Record>& inputs,
                     std::uint64_t max_rounds, std::uint64_t seed, const BcSimBase& base, const Constants& c,
                     const BcSimOptions& opt) {
  require_broadcast(prog);
  return run_prepared(g, prog, inputs, max_rounds, seed, preprocess(g, prog, inputs, seed, base), c, opt);
}

}  // namespace congest
