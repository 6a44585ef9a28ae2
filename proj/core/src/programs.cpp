#include "congest/programs.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace congest {

// Flood state: [has, pending, round_received, k, senders...]

State FloodProgram::init(const NodeContext& ctx, const Record&, RandomStream&) const {
  const bool src = ctx.id == source_;
  return {src ? 1 : 0, (src && ctx.degree() > 0) ? 1 : 0, src ? 0 : -1, 0};
}

void FloodProgram::send(const NodeContext& ctx, const State& s, std::uint64_t, Outbox& out) const {
  if (!s[1]) return;
  const std::size_t k = static_cast<std::size_t>(s[3]);
  for (NodeId u : ctx.nbrs) {
    bool from = false;
    for (std::size_t i = 0; i < k; ++i)
      if (s[4 + i] == u) from = true;
    if (!from) out.push_back({u, Message::make(1, {})});
  }
}

void FloodProgram::transition(const NodeContext& ctx, State& s, std::uint64_t round,
                              std::span<const Delivery> inbox, RandomStream&) const {
  s[1] = 0;
  if (s[0] || inbox.empty()) return;
  s[0] = 1;
  s[2] = static_cast<std::int64_t>(round);
  s[3] = static_cast<std::int64_t>(inbox.size());
  for (const auto& d : inbox) s.push_back(d.from);
  s[1] = inbox.size() < ctx.degree() ? 1 : 0;
}

Record FloodProgram::output(const NodeContext&, const State& s) const { return {s[0], s[2]}; }
bool FloodProgram::quiescent(const NodeContext&, const State& s) const { return s[1] == 0; }

// Broadcast flood state: [has, pending, round_received]

State BroadcastFloodProgram::init(const NodeContext& ctx, const Record&, RandomStream&) const {
  const bool src = ctx.id == source_;
  return {src ? 1 : 0, src ? 1 : 0, src ? 0 : -1};
}

std::optional<Message> BroadcastFloodProgram::broadcast(const NodeContext&, const State& s, std::uint64_t) const {
  if (!s[1]) return std::nullopt;
  return Message::make(1, {static_cast<std::int64_t>(source_)});
}

void BroadcastFloodProgram::transition(const NodeContext&, State& s, std::uint64_t round,
                                       std::span<const Delivery> inbox, RandomStream&) const {
  s[1] = 0;
  if (s[0] || inbox.empty()) return;
  s[0] = 1;
  s[1] = 1;
  s[2] = static_cast<std::int64_t>(round);
}

Record BroadcastFloodProgram::output(const NodeContext&, const State& s) const { return {s[0], s[2]}; }
bool BroadcastFloodProgram::quiescent(const NodeContext&, const State& s) const { return s[1] == 0; }

// BFS state: [dist, parent, pending]

State BfsProgram::init(const NodeContext& ctx, const Record&, RandomStream&) const {
  if (ctx.id == source_) return {0, -1, limit_ == 0 ? 0 : 1};
  return {-1, -1, 0};
}

std::optional<Message> BfsProgram::broadcast(const NodeContext&, const State& s, std::uint64_t) const {
  if (!s[2]) return std::nullopt;
  return Message::make(1, {static_cast<std::int64_t>(source_), s[0]});
}

void BfsProgram::transition(const NodeContext&, State& s, std::uint64_t, std::span<const Delivery> inbox,
                            RandomStream&) const {
  s[2] = 0;
  if (s[0] >= 0) return;
  std::int64_t best = -1;
  NodeId parent = kNoNode;
  for (const auto& d : inbox) {
    if (d.msg.size < 2 || d.msg.f[0] != static_cast<std::int64_t>(source_)) continue;
    if (best < 0 || d.msg.f[1] < best || (d.msg.f[1] == best && d.from < parent)) {
      best = d.msg.f[1];
      parent = d.from;
    }
  }
  if (best < 0) return;
  s[0] = best + 1;
  s[1] = parent;
  s[2] = (limit_ < 0 || s[0] < limit_) ? 1 : 0;
}

Record BfsProgram::output(const NodeContext&, const State& s) const { return {s[0], s[1]}; }
bool BfsProgram::quiescent(const NodeContext&, const State& s) const { return s[2] == 0; }

std::vector<Delivery> MinDistanceContract::aggregate(const NodeContext&, std::uint64_t,
                                                     std::span<const Delivery> msgs) const {
  std::map<std::int64_t, Delivery> best;
  for (const auto& d : msgs) {
    auto it = best.find(d.msg.f[0]);
    if (it == best.end()) {
      best.emplace(d.msg.f[0], d);
    } else {
      const Delivery& b = it->second;
      if (d.msg.f[1] < b.msg.f[1] || (d.msg.f[1] == b.msg.f[1] && d.from < b.from)) it->second = d;
    }
  }
  std::vector<Delivery> out;
  out.reserve(best.size());
  for (auto& [k, d] : best) out.push_back(d);
  std::sort(out.begin(), out.end());
  return out;
}

// Bellman-Ford state: [pending_count, dist[n], pending[n]]; dist -1 = unknown.

namespace {
std::int64_t split_base(std::size_t n) { return std::int64_t{1} << (field_bits(n) - 1); }
}  // namespace

State BellmanFordApspProgram::init(const NodeContext& ctx, const Record&, RandomStream&) const {
  State s(1 + 2 * ctx.n, 0);
  for (std::size_t i = 0; i < ctx.n; ++i) s[1 + i] = -1;
  s[1 + ctx.id] = 0;
  s[1 + ctx.n + ctx.id] = 1;
  s[0] = 1;
  return s;
}

std::int64_t BellmanFordApspProgram::pick(const State& s, std::size_t n) {
  if (s[0] == 0) return -1;
  std::int64_t best = -1;
  for (std::size_t i = 0; i < n; ++i) {
    if (!s[1 + n + i]) continue;
    if (best < 0 || s[1 + i] < s[1 + best]) best = static_cast<std::int64_t>(i);
  }
  return best;
}

std::optional<Message> BellmanFordApspProgram::broadcast(const NodeContext& ctx, const State& s,
                                                         std::uint64_t) const {
  std::int64_t src = pick(s, ctx.n);
  if (src < 0) return std::nullopt;
  const std::int64_t b = split_base(ctx.n);
  const std::int64_t d = s[1 + src];
  return Message::make(1, {src, d / b, d % b});
}

void BellmanFordApspProgram::transition(const NodeContext& ctx, State& s, std::uint64_t,
                                        std::span<const Delivery> inbox, RandomStream&) const {
  const std::size_t n = ctx.n;
  std::int64_t sent = pick(s, n);
  if (sent >= 0) {
    s[1 + n + sent] = 0;
    --s[0];
  }
  const std::int64_t b = split_base(n);
  for (const auto& d : inbox) {
    const std::int64_t src = d.msg.f[0];
    const std::int64_t dist = d.msg.f[1] * b + d.msg.f[2];
    auto idx = ctx.index_of(d.from);
    if (idx < 0 || src < 0 || static_cast<std::size_t>(src) >= n) continue;
    const std::int64_t cand = dist + ctx.weights[idx];
    std::int64_t& cur = s[1 + src];
    if (cur < 0 || cand < cur) {
      cur = cand;
      if (!s[1 + n + src]) {
        s[1 + n + src] = 1;
        ++s[0];
      }
    }
  }
}

Record BellmanFordApspProgram::output(const NodeContext& ctx, const State& s) const {
  return Record(s.begin() + 1, s.begin() + 1 + static_cast<std::ptrdiff_t>(ctx.n));
}

bool BellmanFordApspProgram::quiescent(const NodeContext&, const State& s) const { return s[0] == 0; }

}  // namespace congest
