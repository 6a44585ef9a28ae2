#include "congest/engine.hpp"

#include <algorithm>

#include "congest/errors.hpp"

namespace congest {

std::ptrdiff_t NodeContext::index_of(NodeId u) const {
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), u);
  if (it == nbrs.end() || *it != u) return -1;
  return it - nbrs.begin();
}

NodeContext make_context(const Graph& g, NodeId v) {
  NodeContext c;
  c.id = v;
  c.n = g.n();
  c.nbrs = g.neighbors(v);
  c.edges = g.incident(v);
  c.weights = g.neighbor_weights(v);
  return c;
}

std::uint64_t input_bits(const Graph& g, const std::vector<Record>& inputs) {
  std::uint64_t fields = 0;
  for (NodeId v = 0; v < g.n(); ++v) {
    fields += 1 + g.degree(v) * (g.weighted() ? 2 : 1);
    if (v < inputs.size()) fields += inputs[v].size();
  }
  return fields * field_bits(g.n());
}

std::uint64_t output_bits(std::size_t n, const std::vector<Record>& outputs) {
  std::uint64_t fields = 0;
  for (const auto& r : outputs) fields += r.size();
  return fields * field_bits(n);
}

Stepper::Stepper(const Graph& g, const Program& prog, const std::vector<Record>& inputs, std::uint64_t seed,
                 const SimMetrics* parent, RunObserver* observer)
    : g_(g), prog_(prog), seed_(seed), observer_(observer) {
  require_undirected(g);
  if (!inputs.empty() && inputs.size() != g.n()) throw InvalidArgument("inputs must have one record per node");
  metrics_ = parent ? parent->child() : SimMetrics(g.m());
  if (metrics_.edge_congestion.size() != g.m()) metrics_.edge_congestion.assign(g.m(), 0);
  metrics_.in_bits = input_bits(g, inputs);
  const std::size_t n = g.n();
  ctx_.reserve(n);
  states_.reserve(n);
  inbox_.resize(n);
  static const Record kEmpty;
  for (NodeId v = 0; v < n; ++v) {
    ctx_.push_back(make_context(g, v));
    RandomStream rng = node_stream(seed_, v, 0);
    states_.push_back(prog_.init(ctx_[v], inputs.empty() ? kEmpty : inputs[v], rng));
  }
  refresh_done();
}

void Stepper::refresh_done() {
  done_ = true;
  for (NodeId v = 0; v < ctx_.size(); ++v)
    if (!prog_.quiescent(ctx_[v], states_[v])) {
      done_ = false;
      return;
    }
}

void Stepper::step() {
  const std::uint64_t r = round_ + 1;
  const std::size_t n = ctx_.size();
  for (auto& in : inbox_) in.clear();
  if (prog_.mode() == Mode::Bcongest) {
    for (NodeId v = 0; v < n; ++v) {
      auto m = prog_.broadcast(ctx_[v], states_[v], r);
      if (!m) continue;
      check_payload(*m, n, v, r);
      ++metrics_.broadcasts;
      const auto& c = ctx_[v];
      for (std::size_t i = 0; i < c.nbrs.size(); ++i) {
        NodeId u = c.nbrs[i];
        metrics_.charge(2 * c.edges[i] + (v > u ? 1 : 0), 1);
        inbox_[u].push_back({v, *m});
      }
    }
  } else {
    for (NodeId v = 0; v < n; ++v) {
      outbox_.clear();
      prog_.send(ctx_[v], states_[v], r, outbox_);
      if (outbox_.empty()) continue;
      std::sort(outbox_.begin(), outbox_.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      const auto& c = ctx_[v];
      for (std::size_t k = 0; k < outbox_.size(); ++k) {
        const auto& [u, m] = outbox_[k];
        if (k > 0 && outbox_[k - 1].first == u)
          throw PayloadError(v, r, "two messages to neighbor " + std::to_string(u) + " in one round");
        auto idx = c.index_of(u);
        if (idx < 0) throw PayloadError(v, r, "send to non-neighbor " + std::to_string(u));
        check_payload(m, n, v, r);
        metrics_.charge(2 * c.edges[idx] + (v > u ? 1 : 0), 1);
        inbox_[u].push_back({v, m});
      }
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    RandomStream rng = node_stream(seed_, v, r);
    if (observer_) observer_->before_transition(ctx_[v], r, states_[v], inbox_[v]);
    prog_.transition(ctx_[v], states_[v], r, inbox_[v], rng);
  }
  round_ = r;
  metrics_.rounds = r;
  metrics_.dilation = r;
  if (observer_) observer_->after_round(r, states_);
  refresh_done();
}

std::vector<Record> Stepper::outputs() const {
  std::vector<Record> out;
  out.reserve(ctx_.size());
  for (NodeId v = 0; v < ctx_.size(); ++v) out.push_back(prog_.output(ctx_[v], states_[v]));
  return out;
}

namespace {

RunResult run_mode(Mode mode, const Graph& g, const Program& prog, const std::vector<Record>& inputs,
                   std::uint64_t max_rounds, std::uint64_t seed, const SimMetrics* parent, RunObserver* observer) {
  if (prog.mode() != mode)
    throw InvalidArgument("program '" + prog.name() + "' declared for the other model variant");
  Stepper st(g, prog, inputs, seed, parent, observer);
  while (!st.done()) {
    if (st.round() >= max_rounds) {
      throw TimeoutError(max_rounds, std::make_shared<SimMetrics>(st.metrics()));
    }
    st.step();
  }
  RunResult res;
  res.outputs = st.outputs();
  res.metrics = std::move(st.metrics());
  res.metrics.out_bits = output_bits(g.n(), res.outputs);
  return res;
}

}  // namespace

RunResult run_congest(const Graph& g, const Program& prog, const std::vector<Record>& inputs,
                      std::uint64_t max_rounds, std::uint64_t seed, const SimMetrics* parent, RunObserver* observer) {
  return run_mode(Mode::Congest, g, prog, inputs, max_rounds, seed, parent, observer);
}

RunResult run_bcongest(const Graph& g, const Program& prog, const std::vector<Record>& inputs,
                       std::uint64_t max_rounds, std::uint64_t seed, const SimMetrics* parent, RunObserver* observer) {
  return run_mode(Mode::Bcongest, g, prog, inputs, max_rounds, seed, parent, observer);
}

namespace {

struct Sample {
  NodeId node;
  std::uint64_t round;
  State state;
  std::vector<Delivery> inbox;
};

class Reservoir : public RunObserver {
 public:
  Reservoir(std::size_t cap, RandomStream rng) : cap_(cap), rng_(rng) {}
  void before_transition(const NodeContext& ctx, std::uint64_t round, const State& s,
                         std::span<const Delivery> inbox) override {
    if (inbox.empty()) return;
    ++seen_;
    if (samples.size() < cap_) {
      samples.push_back({ctx.id, round, s, {inbox.begin(), inbox.end()}});
    } else {
      std::uint64_t j = rng_.uniform_int(0, seen_ - 1);
      if (j < cap_) samples[j] = {ctx.id, round, s, {inbox.begin(), inbox.end()}};
    }
  }
  std::vector<Sample> samples;

 private:
  std::size_t cap_;
  std::uint64_t seen_ = 0;
  RandomStream rng_;
};

bool is_subset(const std::vector<Delivery>& sub, const std::vector<Delivery>& sup) {
  for (const auto& d : sub)
    if (std::find(sup.begin(), sup.end(), d) == sup.end()) return false;
  return true;
}

}  // namespace

ContractReport verify_aggregation_contract(const Graph& g, const Program& prog, const AggregationContract& contract,
                                           const std::vector<Record>& inputs, std::size_t trials, std::uint64_t seed,
                                           std::uint64_t max_rounds) {
  ContractReport rep;
  if (prog.mode() != Mode::Bcongest) throw InvalidArgument("aggregation contracts apply to broadcast programs");
  RandomStream rs = RandomStream(seed).child("contract-check");
  Reservoir res(std::min<std::size_t>(std::max<std::size_t>(trials, 1), 1024), rs.child("reservoir"));
  run_bcongest(g, prog, inputs, max_rounds, seed, nullptr, &res);
  rep.samples = res.samples.size();
  if (res.samples.empty()) return rep;

  auto apply = [&](const Sample& s, const NodeContext& ctx, std::vector<Delivery> inbox) {
    canonicalize(inbox);
    State st = s.state;
    RandomStream rng = node_stream(seed, s.node, s.round);
    prog.transition(ctx, st, s.round, inbox, rng);
    return st;
  };
  auto agg = [&](const Sample& s, const NodeContext& ctx, const std::vector<Delivery>& part) {
    auto out = contract.aggregate(ctx, s.round, part);
    rep.max_words = std::max(rep.max_words, encoded_words(out));
    if (encoded_words(out) > contract.max_words())
      rep.violations.push_back("node " + std::to_string(s.node) + " round " + std::to_string(s.round) +
                               ": aggregate uses " + std::to_string(encoded_words(out)) + " words");
    if (!is_subset(out, part))
      rep.violations.push_back("node " + std::to_string(s.node) + " round " + std::to_string(s.round) +
                               ": aggregate is not a subset of its input");
    return out;
  };

  RandomStream pick = rs.child("trials");
  for (std::size_t t = 0; t < trials; ++t) {
    const Sample& s = res.samples[pick.uniform_int(0, res.samples.size() - 1)];
    NodeContext ctx = make_context(g, s.node);
    const State expect = apply(s, ctx, s.inbox);
    const std::size_t sz = s.inbox.size();
    const std::size_t kind = t % 3;
    const std::size_t k = pick.uniform_int(1, sz);
    std::vector<std::vector<Delivery>> parts(k);
    for (const auto& d : s.inbox) {
      parts[pick.uniform_int(0, k - 1)].push_back(d);
      if (kind == 1 && pick.bernoulli(0.3)) parts[pick.uniform_int(0, k - 1)].push_back(d);
    }
    std::vector<Delivery> merged;
    if (kind == 2 && k >= 2) {
      // agg(agg(P0) + P1) stands in for agg(P0 + P1).
      std::vector<Delivery> inner = agg(s, ctx, parts[0]);
      inner.insert(inner.end(), parts[1].begin(), parts[1].end());
      canonicalize(inner);
      auto outer = agg(s, ctx, inner);
      merged.insert(merged.end(), outer.begin(), outer.end());
      for (std::size_t i = 2; i < k; ++i) {
        auto a = agg(s, ctx, parts[i]);
        merged.insert(merged.end(), a.begin(), a.end());
      }
    } else {
      for (auto& p : parts) {
        canonicalize(p);
        auto a = agg(s, ctx, p);
        merged.insert(merged.end(), a.begin(), a.end());
      }
    }
    ++rep.checks;
    if (apply(s, ctx, merged) != expect)
      rep.violations.push_back("node " + std::to_string(s.node) + " round " + std::to_string(s.round) +
                               ": transition differs on aggregated inbox (" + std::to_string(k) + " parts)");
  }
  return rep;
}

}  // namespace congest
