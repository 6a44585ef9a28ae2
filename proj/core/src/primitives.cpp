#include "congest/primitives.hpp"

#include <algorithm>

#include "congest/errors.hpp"

namespace congest {

// Leader election state: [min, pending]

State LeaderElectionProgram::init(const NodeContext& ctx, const Record&, RandomStream&) const {
  return {static_cast<std::int64_t>(ctx.id), ctx.degree() > 0 ? 1 : 0};
}

std::optional<Message> LeaderElectionProgram::broadcast(const NodeContext&, const State& s, std::uint64_t) const {
  if (!s[1]) return std::nullopt;
  return Message::make(1, {s[0]});
}

void LeaderElectionProgram::transition(const NodeContext&, State& s, std::uint64_t, std::span<const Delivery> inbox,
                                       RandomStream&) const {
  s[1] = 0;
  for (const auto& d : inbox)
    if (d.msg.f[0] < s[0]) {
      s[0] = d.msg.f[0];
      s[1] = 1;
    }
}

Record LeaderElectionProgram::output(const NodeContext&, const State& s) const { return {s[0]}; }
bool LeaderElectionProgram::quiescent(const NodeContext&, const State& s) const { return s[1] == 0; }

// Tree BFS state: [dist, parent, pending, children...]

State TreeBfsProgram::init(const NodeContext& ctx, const Record&, RandomStream&) const {
  if (ctx.id == root_) return {0, -1, 1};
  return {-1, -1, 0};
}

std::optional<Message> TreeBfsProgram::broadcast(const NodeContext&, const State& s, std::uint64_t) const {
  if (!s[2]) return std::nullopt;
  return Message::make(1, {s[0], s[1]});
}

void TreeBfsProgram::transition(const NodeContext& ctx, State& s, std::uint64_t, std::span<const Delivery> inbox,
                                RandomStream&) const {
  s[2] = 0;
  for (const auto& d : inbox)
    if (d.msg.f[1] == static_cast<std::int64_t>(ctx.id)) s.push_back(d.from);
  if (s[0] >= 0) return;
  for (const auto& d : inbox) {
    if (s[0] < 0 || d.msg.f[0] + 1 < s[0]) {
      s[0] = d.msg.f[0] + 1;
      s[1] = d.from;
    }
  }
  if (s[0] >= 0) s[2] = 1;
}

Record TreeBfsProgram::output(const NodeContext&, const State& s) const {
  Record r{s[0], s[1]};
  r.insert(r.end(), s.begin() + 3, s.end());
  return r;
}

bool TreeBfsProgram::quiescent(const NodeContext&, const State& s) const { return s[2] == 0; }

// Convergecast state: [parent, acc, remaining, ready, sent, split]

State ConvergecastProgram::init(const NodeContext&, const Record& in, RandomStream&) const {
  State s{in.at(0), in.at(1), static_cast<std::int64_t>(in.size()) - 2, 0, 0, 0};
  if (s[2] == 0) finish(s);
  return s;
}

void ConvergecastProgram::finish(State& s) const {
  if (s[0] < 0) return;
  if (threshold_ >= 0 && s[1] >= threshold_) s[5] = 1;
  s[3] = 1;
}

void ConvergecastProgram::send(const NodeContext&, const State& s, std::uint64_t, Outbox& out) const {
  if (!s[3] || s[4]) return;
  out.push_back({static_cast<NodeId>(s[0]), Message::make(s[5] ? 2 : 1, {s[5] ? 0 : s[1]})});
}

void ConvergecastProgram::transition(const NodeContext&, State& s, std::uint64_t, std::span<const Delivery> inbox,
                                     RandomStream&) const {
  if (s[3] && !s[4]) s[4] = 1;
  if (inbox.empty()) return;
  for (const auto& d : inbox) {
    if (op_ == Op::Sum)
      s[1] += d.msg.f[0];
    else
      s[1] = std::max(s[1], d.msg.f[0]);
    --s[2];
  }
  if (s[2] == 0) finish(s);
}

Record ConvergecastProgram::output(const NodeContext&, const State& s) const { return {s[1], s[5]}; }

bool ConvergecastProgram::quiescent(const NodeContext&, const State& s) const {
  if (s[0] < 0) return true;
  return s[4] == 1;
}

// Tree cast state: [value, depth, pending, children...]

State TreeCastProgram::init(const NodeContext&, const Record& in, RandomStream&) const {
  State s{-1, -1, 0};
  if (in.at(0)) {
    s[0] = in.at(1);
    s[1] = 0;
    s[2] = in.size() > 2 ? 1 : 0;
  }
  s.insert(s.end(), in.begin() + 2, in.end());
  return s;
}

void TreeCastProgram::send(const NodeContext&, const State& s, std::uint64_t, Outbox& out) const {
  if (!s[2]) return;
  for (std::size_t i = 3; i < s.size(); ++i)
    out.push_back({static_cast<NodeId>(s[i]), Message::make(1, {s[0], s[1]})});
}

void TreeCastProgram::transition(const NodeContext&, State& s, std::uint64_t, std::span<const Delivery> inbox,
                                 RandomStream&) const {
  s[2] = 0;
  if (inbox.empty() || s[1] >= 0) return;
  s[0] = inbox.front().msg.f[0];
  s[1] = inbox.front().msg.f[1] + 1;
  s[2] = s.size() > 3 ? 1 : 0;
}

Record TreeCastProgram::output(const NodeContext&, const State& s) const { return {s[0], s[1]}; }
bool TreeCastProgram::quiescent(const NodeContext&, const State& s) const { return s[2] == 0; }

// Pipeline cast state: [is_root, W, received, carry, next_root_word, children...]

State PipelineCastProgram::init(const NodeContext&, const Record& in, RandomStream&) const {
  State s{in.at(0), in.at(1), in.at(0) ? in.at(1) : 0, -1, 0};
  s.insert(s.end(), in.begin() + 2, in.end());
  return s;
}

void PipelineCastProgram::send(const NodeContext&, const State& s, std::uint64_t round, Outbox& out) const {
  if (s.size() <= 5) return;
  std::int64_t word = -1;
  if (s[0]) {
    if (static_cast<std::int64_t>(round) <= s[1]) word = static_cast<std::int64_t>(round) - 1;
  } else {
    word = s[3];
  }
  if (word < 0) return;
  for (std::size_t i = 5; i < s.size(); ++i) out.push_back({static_cast<NodeId>(s[i]), Message::make(1, {word})});
}

void PipelineCastProgram::transition(const NodeContext&, State& s, std::uint64_t round,
                                     std::span<const Delivery> inbox, RandomStream&) const {
  if (s[0]) {
    s[4] = static_cast<std::int64_t>(round);
    return;
  }
  s[3] = -1;
  if (!inbox.empty()) {
    s[3] = inbox.front().msg.f[0];
    ++s[2];
  }
}

Record PipelineCastProgram::output(const NodeContext&, const State& s) const { return {s[2]}; }

bool PipelineCastProgram::quiescent(const NodeContext&, const State& s) const {
  if (s.size() <= 5) return true;
  if (s[0]) return s[4] >= s[1];
  return s[3] < 0;
}

// Neighbor exchange state: [pending, size, f0..f3, entries...]

State NeighborExchangeProgram::init(const NodeContext&, const Record& in, RandomStream&) const {
  State s(6, 0);
  if (!in.empty() && in[0]) {
    if (in.size() - 1 > kMaxFields) throw InvalidArgument("exchange payload too large");
    s[0] = 1;
    s[1] = static_cast<std::int64_t>(in.size() - 1);
    for (std::size_t i = 1; i < in.size(); ++i) s[1 + i] = in[i];
  }
  return s;
}

std::optional<Message> NeighborExchangeProgram::broadcast(const NodeContext&, const State& s, std::uint64_t) const {
  if (!s[0]) return std::nullopt;
  Message m;
  m.tag = 1;
  m.size = static_cast<std::uint8_t>(s[1]);
  for (std::size_t i = 0; i < m.size; ++i) m.f[i] = s[2 + i];
  return m;
}

void NeighborExchangeProgram::transition(const NodeContext&, State& s, std::uint64_t, std::span<const Delivery> inbox,
                                         RandomStream&) const {
  s[0] = 0;
  for (const auto& d : inbox) {
    s.push_back(d.from);
    s.push_back(d.msg.size);
    for (std::size_t i = 0; i < kMaxFields; ++i) s.push_back(i < d.msg.size ? d.msg.f[i] : 0);
  }
}

Record NeighborExchangeProgram::output(const NodeContext&, const State& s) const {
  return Record(s.begin() + 6, s.end());
}

bool NeighborExchangeProgram::quiescent(const NodeContext&, const State& s) const { return s[0] == 0; }

std::vector<std::vector<NeighborInfo>> decode_exchange(const std::vector<Record>& outputs) {
  std::vector<std::vector<NeighborInfo>> res(outputs.size());
  for (std::size_t v = 0; v < outputs.size(); ++v) {
    const auto& r = outputs[v];
    for (std::size_t i = 0; i + 6 <= r.size(); i += 6) {
      NeighborInfo ni;
      ni.from = static_cast<NodeId>(r[i]);
      ni.msg.tag = 1;
      ni.msg.size = static_cast<std::uint8_t>(r[i + 1]);
      for (std::size_t k = 0; k < kMaxFields; ++k) ni.msg.f[k] = r[i + 2 + k];
      res[v].push_back(ni);
    }
  }
  return res;
}

// Notify state: [target, pending, senders...]

State NotifyProgram::init(const NodeContext&, const Record& in, RandomStream&) const {
  std::int64_t t = in.empty() ? -1 : in[0];
  return {t, t >= 0 ? 1 : 0};
}

void NotifyProgram::send(const NodeContext&, const State& s, std::uint64_t, Outbox& out) const {
  if (s[1]) out.push_back({static_cast<NodeId>(s[0]), Message::make(1, {})});
}

void NotifyProgram::transition(const NodeContext&, State& s, std::uint64_t, std::span<const Delivery> inbox,
                               RandomStream&) const {
  s[1] = 0;
  for (const auto& d : inbox) s.push_back(d.from);
}

Record NotifyProgram::output(const NodeContext&, const State& s) const { return Record(s.begin() + 2, s.end()); }
bool NotifyProgram::quiescent(const NodeContext&, const State& s) const { return s[1] == 0; }

RunResult run_part(const std::string& part, const Graph& g, const Program& prog, const std::vector<Record>& inputs,
                   std::uint64_t max_rounds, std::uint64_t seed, SimMetrics& m) {
  RunResult r = prog.mode() == Mode::Bcongest ? run_bcongest(g, prog, inputs, max_rounds, seed, &m)
                                              : run_congest(g, prog, inputs, max_rounds, seed, &m);
  m.absorb_as(part, r.metrics);
  return r;
}

GlobalSetup global_setup(const Graph& g, std::uint64_t seed, SimMetrics& m) {
  require_undirected(g);
  require_connected(g);
  const std::size_t n = g.n();
  const std::uint64_t cap = 4 * n + 16;
  GlobalSetup s;
  auto le = run_part("setup.leader", g, LeaderElectionProgram{}, {}, cap, seed, m);
  s.leader = static_cast<NodeId>(le.outputs[0][0]);
  for (const auto& o : le.outputs)
    if (o[0] != s.leader) throw InvariantViolation("leader election did not converge");
  auto bfs = run_part("setup.tree", g, TreeBfsProgram{s.leader}, {}, cap, seed, m);
  s.parent.resize(n);
  s.depth.resize(n);
  s.children.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    s.depth[v] = bfs.outputs[v][0];
    s.parent[v] = bfs.outputs[v][1];
    for (std::size_t i = 2; i < bfs.outputs[v].size(); ++i) s.children[v].push_back(static_cast<NodeId>(bfs.outputs[v][i]));
    s.height = std::max<std::uint32_t>(s.height, static_cast<std::uint32_t>(s.depth[v]));
  }
  std::vector<Record> cin(n);
  for (NodeId v = 0; v < n; ++v) {
    cin[v] = {s.parent[v], 1};
    for (NodeId c : s.children[v]) cin[v].push_back(c);
  }
  auto cnt = run_part("setup.count", g, ConvergecastProgram{ConvergecastProgram::Op::Sum}, cin, cap, seed, m);
  s.counted_n = static_cast<std::size_t>(cnt.outputs[s.leader][0]);
  std::vector<Record> tin(n);
  for (NodeId v = 0; v < n; ++v) {
    tin[v] = {v == s.leader ? 1 : 0, static_cast<std::int64_t>(s.counted_n)};
    for (NodeId c : s.children[v]) tin[v].push_back(c);
  }
  auto cast = run_part("setup.announce", g, TreeCastProgram{}, tin, cap, seed, m);
  for (const auto& o : cast.outputs)
    if (o[0] != static_cast<std::int64_t>(n)) throw InvariantViolation("node count not disseminated");
  return s;
}

void charge_renaming(const Graph& g, const GlobalSetup& s, std::uint64_t seed, SimMetrics& m) {
  const std::size_t n = g.n();
  std::vector<Record> cin(n), tin(n);
  for (NodeId v = 0; v < n; ++v) {
    cin[v] = {s.parent[v], 1};
    tin[v] = {v == s.leader ? 1 : 0, 0};
    for (NodeId c : s.children[v]) {
      cin[v].push_back(c);
      tin[v].push_back(c);
    }
  }
  run_part("setup.rename", g, ConvergecastProgram{ConvergecastProgram::Op::Sum}, cin, 4 * n + 16, seed, m);
  run_part("setup.rename", g, TreeCastProgram{}, tin, 4 * n + 16, seed, m);
}

void charge_shared_randomness(const Graph& g, const GlobalSetup& s, std::size_t words, std::uint64_t seed,
                              SimMetrics& m) {
  const std::size_t n = g.n();
  std::vector<Record> in(n);
  for (NodeId v = 0; v < n; ++v) {
    in[v] = {v == s.leader ? 1 : 0, static_cast<std::int64_t>(words)};
    for (NodeId c : s.children[v]) in[v].push_back(c);
  }
  auto r = run_part("setup.shared_randomness", g, PipelineCastProgram{}, in, words + 4 * n + 16, seed, m);
  for (NodeId v = 0; v < n; ++v)
    if (r.outputs[v][0] != static_cast<std::int64_t>(words)) throw InvariantViolation("shared string incomplete");
}

}  // namespace congest
