#include "congest/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "congest/errors.hpp"
#include "congest/programs.hpp"
#include "congest/retry.hpp"

namespace congest {

namespace {

constexpr std::size_t kHead = 3;

std::size_t dist_at(std::size_t, std::size_t j) { return kHead + j; }
std::size_t parent_at(std::size_t l, std::size_t j) { return kHead + l + j; }
std::size_t cur_at(std::size_t l, std::size_t k) { return kHead + 2 * l + k; }
std::size_t nxt_at(std::size_t l, std::size_t k) { return kHead + 3 * l + k; }

}  // namespace

ScheduledBfsProgram::ScheduledBfsProgram(std::vector<NodeId> sources, std::vector<std::uint32_t> delays,
                                         std::uint32_t slots, std::int64_t depth_limit)
    : sources_(std::move(sources)), delays_(std::move(delays)), slots_(slots), limit_(depth_limit) {
  if (sources_.size() != delays_.size()) throw InvalidArgument("one delay per BFS source required");
  if (slots_ == 0) throw InvalidArgument("at least one slot per logical round required");
  NodeId top = 0;
  for (NodeId s : sources_) top = std::max(top, s + 1);
  own_.resize(top);
  for (std::uint32_t j = 0; j < sources_.size(); ++j) {
    if (delays_[j] == 0) throw InvalidArgument("BFS delays start at 1");
    own_[sources_[j]].push_back(j);
  }
  for (auto& o : own_)
    std::stable_sort(o.begin(), o.end(), [&](std::uint32_t a, std::uint32_t b) { return delays_[a] < delays_[b]; });
}

// Queues the node's own runs whose delay equals the current logical round.
void ScheduledBfsProgram::start_own(const NodeContext& ctx, State& s) const {
  if (ctx.id >= own_.size()) return;
  const std::size_t l = sources_.size();
  for (std::uint32_t j : own_[ctx.id]) {
    if (delays_[j] != static_cast<std::uint64_t>(s[0])) continue;
    if (limit_ == 0) continue;
    s[cur_at(l, static_cast<std::size_t>(s[1]++))] = j;
  }
}

State ScheduledBfsProgram::init(const NodeContext& ctx, const Record&, RandomStream&) const {
  const std::size_t l = sources_.size();
  State s(kHead + 4 * l, -1);
  s[0] = 1;
  s[1] = 0;
  s[2] = 0;
  if (ctx.id < own_.size())
    for (std::uint32_t j : own_[ctx.id]) s[dist_at(l, j)] = 0;
  start_own(ctx, s);
  if (static_cast<std::uint64_t>(s[1]) > slots_)
    throw WhpFailure("schedule slots", "node " + std::to_string(ctx.id) + " starts too many runs at once");
  return s;
}

std::optional<Message> ScheduledBfsProgram::broadcast(const NodeContext&, const State& s, std::uint64_t round) const {
  const std::uint64_t slot = (round - 1) % slots_;
  if (logical_round(round) != static_cast<std::uint64_t>(s[0]) || slot >= static_cast<std::uint64_t>(s[1]))
    return std::nullopt;
  const std::size_t l = sources_.size();
  const std::int64_t j = s[cur_at(l, slot)];
  return Message::make(1, {j, s[dist_at(l, static_cast<std::size_t>(j))]});
}

void ScheduledBfsProgram::transition(const NodeContext& ctx, State& s, std::uint64_t round,
                                     std::span<const Delivery> inbox, RandomStream&) const {
  const std::size_t l = sources_.size();
  for (const auto& d : inbox) {
    if (d.msg.tag != 1 || d.msg.size < 2) continue;
    const auto j = static_cast<std::size_t>(d.msg.f[0]);
    if (j >= l || s[dist_at(l, j)] >= 0) continue;
    const std::int64_t dist = d.msg.f[1] + 1;
    s[dist_at(l, j)] = dist;
    s[parent_at(l, j)] = d.from;
    if (limit_ == kNoDepthLimit || dist < limit_) s[nxt_at(l, static_cast<std::size_t>(s[2]++))] = static_cast<std::int64_t>(j);
  }
  if ((round - 1) % slots_ != slots_ - 1) return;
  // End of the logical round: next round's broadcasts become current.
  for (std::int64_t k = 0; k < s[2]; ++k) s[cur_at(l, static_cast<std::size_t>(k))] = s[nxt_at(l, static_cast<std::size_t>(k))];
  s[1] = s[2];
  s[2] = 0;
  ++s[0];
  start_own(ctx, s);
  if (static_cast<std::uint64_t>(s[1]) > slots_)
    throw WhpFailure("schedule slots", "node " + std::to_string(ctx.id) + " has " + std::to_string(s[1]) +
                                           " broadcasts for " + std::to_string(slots_) + " slots in logical round " +
                                           std::to_string(s[0]));
}

Record ScheduledBfsProgram::output(const NodeContext&, const State& s) const {
  const std::size_t l = sources_.size();
  return Record(s.begin() + kHead, s.begin() + static_cast<std::ptrdiff_t>(kHead + 2 * l));
}

bool ScheduledBfsProgram::quiescent(const NodeContext& ctx, const State& s) const {
  if (s[1] != 0 || s[2] != 0) return false;
  if (ctx.id < own_.size())
    for (std::uint32_t j : own_[ctx.id])
      if (limit_ != 0 && delays_[j] > static_cast<std::uint64_t>(s[0])) return false;
  return true;
}

std::uint32_t schedule_slots(std::size_t n, const Constants& c) {
  const double s = std::ceil(c.slot_c * ceil_log2(std::max<std::size_t>(n, 2)) - 1e-9);
  return static_cast<std::uint32_t>(std::max(1.0, s));
}

double source_audit_bound(std::size_t n, const Constants& c) {
  return c.source_audit_c * std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
}

DecomposableAlgorithm schedule_bfs(std::size_t n, const std::vector<NodeId>& sources, std::int64_t depth_limit,
                                   std::uint64_t shared_seed, const Constants& c) {
  for (NodeId s : sources)
    if (s >= n) throw InvalidArgument("BFS source " + std::to_string(s) + " is not a node");
  const std::uint32_t l = static_cast<std::uint32_t>(std::max<std::size_t>(sources.size(), 1));
  RandomStream rs = RandomStream(shared_seed).child("bfs.delay");
  std::vector<std::uint32_t> delays(sources.size());
  for (std::size_t j = 0; j < sources.size(); ++j) delays[j] = static_cast<std::uint32_t>(rs.child("run", j).uniform_int(1, l));
  const std::uint32_t slots = schedule_slots(n, c);
  DecomposableAlgorithm a;
  a.program = std::make_shared<ScheduledBfsProgram>(sources, delays, slots, depth_limit);
  // (run, dist) plus the sender: three fields per distinct run heard.
  const auto runs = static_cast<std::size_t>(std::ceil(source_audit_bound(n, c)));
  a.contract = std::make_shared<MinDistanceContract>(std::max<std::size_t>(8, words_for_fields(3 * runs)));
  const std::uint64_t depth = depth_limit == kNoDepthLimit
                                  ? n
                                  : std::min<std::uint64_t>(n, static_cast<std::uint64_t>(depth_limit));
  a.round_bound = (static_cast<std::uint64_t>(l) + depth + 1) * slots;
  a.components = sources.size();
  return a;
}

void SourceAudit::before_transition(const NodeContext& ctx, std::uint64_t round, const State&,
                                    std::span<const Delivery> inbox) {
  const std::uint64_t lr = (round - 1) / slots_ + 1;
  auto& h = heard_[ctx.id];
  if (cur_[ctx.id] != lr) {
    cur_[ctx.id] = lr;
    h.clear();
  }
  for (const auto& d : inbox) {
    if (d.msg.size == 0) continue;
    auto it = std::lower_bound(h.begin(), h.end(), d.msg.f[0]);
    if (it == h.end() || *it != d.msg.f[0]) h.insert(it, d.msg.f[0]);
  }
  max_ = std::max(max_, h.size());
}

CentralSchedule central_schedule(const std::vector<const Trace*>& components, std::size_t n, std::uint64_t seed,
                                 const Constants& c) {
  CentralSchedule base;
  std::vector<std::uint64_t> load;
  std::vector<std::uint64_t> dil(components.size(), 0);
  std::size_t total = 0;
  for (std::size_t j = 0; j < components.size(); ++j) {
    const Trace& t = *components[j];
    dil[j] = t.last_round();
    base.dilation = std::max(base.dilation, dil[j]);
    total += t.size();
    for (std::size_t i = 0; i < t.slice_count(); ++i) {
      auto s = t.slice(i);
      for (const DirEdge* d = s.begin; d != s.end; ++d) {
        if (*d >= load.size()) load.resize(*d + 1, 0);
        base.congestion = std::max(base.congestion, ++load[*d]);
      }
    }
  }
  const double lg = log2n(n);
  const auto spread = static_cast<std::uint64_t>(std::ceil(static_cast<double>(base.congestion) / lg));
  const double bound = c.schedule_c * (static_cast<double>(base.congestion) + static_cast<double>(base.dilation) * lg);

  auto attempt = [&](std::uint64_t s) {
    CentralSchedule cs = base;
    RandomStream rs = RandomStream(s).child("central.delay");
    cs.delays.resize(components.size());
    std::uint64_t horizon = 0;
    for (std::size_t j = 0; j < components.size(); ++j) {
      cs.delays[j] = rs.child("component", j).uniform_int(0, spread);
      if (dil[j] > 0) horizon = std::max(horizon, cs.delays[j] + dil[j]);
    }
    // (global round, directed edge) pairs, sorted to count per-round loads.
    std::vector<std::uint64_t> keys;
    keys.reserve(total);
    for (std::size_t j = 0; j < components.size(); ++j) {
      const Trace& t = *components[j];
      for (std::size_t i = 0; i < t.slice_count(); ++i) {
        auto sl = t.slice(i);
        const std::uint64_t g = cs.delays[j] + sl.round;
        for (const DirEdge* d = sl.begin; d != sl.end; ++d) keys.push_back(g << 32 | *d);
      }
    }
    std::sort(keys.begin(), keys.end());
    std::uint64_t expanded = 0, busy = 0;
    for (std::size_t i = 0; i < keys.size();) {
      const std::uint64_t round = keys[i] >> 32;
      std::uint64_t worst = 0;
      while (i < keys.size() && keys[i] >> 32 == round) {
        std::size_t k = i;
        while (k < keys.size() && keys[k] == keys[i]) ++k;
        worst = std::max<std::uint64_t>(worst, k - i);
        i = k;
      }
      expanded += worst;
      ++busy;
    }
    cs.length = expanded + (horizon - busy);
    if (static_cast<double>(cs.length) > bound)
      throw WhpFailure("central schedule", "length " + std::to_string(cs.length) + " exceeds " + std::to_string(bound));
    return cs;
  };
  unsigned attempts = 1;
  CentralSchedule out = with_reseed(seed, c.max_reseeds, attempt, &attempts);
  out.attempts = attempts;
  return out;
}

}  // namespace congest
