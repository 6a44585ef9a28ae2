#include "congest/matching.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "congest/bcsim.hpp"
#include "congest/errors.hpp"
#include "congest/oracles.hpp"
#include "congest/primitives.hpp"
#include "congest/retry.hpp"

namespace congest {

namespace {

// Maximal matching state: [mate, proposal, accepted, pick, announce, matched neighbor flags...].
enum : std::size_t { kMate, kProposal, kAccepted, kPick, kAnnounce, kFlags };
enum : std::uint16_t { kPropose = 1, kAccept, kPick_, kMatched };

std::uint64_t step_of(std::uint64_t round) { return (round - 1) % 4 + 1; }

bool active(const NodeContext& ctx, const State& s) {
  if (s[kMate] >= 0) return false;
  for (std::size_t i = 0; i < ctx.degree(); ++i)
    if (!s[kFlags + i]) return true;
  return false;
}

void choose_proposal(const NodeContext& ctx, State& s, RandomStream& rng) {
  s[kProposal] = -1;
  if (!active(ctx, s)) return;
  std::vector<NodeId> free;
  for (std::size_t i = 0; i < ctx.degree(); ++i)
    if (!s[kFlags + i]) free.push_back(ctx.nbrs[i]);
  s[kProposal] = free[rng.uniform_int(0, free.size() - 1)];
}

}  // namespace

State MaximalMatchingProgram::init(const NodeContext& ctx, const Record&, RandomStream& rng) const {
  State s(kFlags + ctx.degree(), 0);
  s[kMate] = s[kAccepted] = s[kPick] = -1;
  choose_proposal(ctx, s, rng);
  return s;
}

std::optional<Message> MaximalMatchingProgram::broadcast(const NodeContext&, const State& s,
                                                         std::uint64_t round) const {
  switch (step_of(round)) {
    case 1:
      if (s[kProposal] >= 0) return Message::make(kPropose, {s[kProposal]});
      break;
    case 2:
      if (s[kAccepted] >= 0) return Message::make(kAccept, {s[kAccepted]});
      break;
    case 3:
      if (s[kPick] >= 0) return Message::make(kPick_, {s[kPick]});
      break;
    default:
      if (s[kAnnounce]) return Message::make(kMatched, {});
  }
  return std::nullopt;
}

void MaximalMatchingProgram::transition(const NodeContext& ctx, State& s, std::uint64_t round,
                                        std::span<const Delivery> inbox, RandomStream& rng) const {
  const auto me = static_cast<std::int64_t>(ctx.id);
  auto addressed = [&](const Delivery& d, std::uint16_t tag) { return d.msg.tag == tag && d.msg.f[0] == me; };
  switch (step_of(round)) {
    case 1: {
      s[kAccepted] = -1;
      if (!active(ctx, s)) break;
      std::vector<NodeId> proposers;
      for (const auto& d : inbox)
        if (addressed(d, kPropose)) proposers.push_back(d.from);
      if (!proposers.empty()) s[kAccepted] = proposers[rng.uniform_int(0, proposers.size() - 1)];
      break;
    }
    case 2: {
      s[kPick] = -1;
      if (!active(ctx, s)) break;
      std::vector<std::int64_t> options;
      for (const auto& d : inbox)
        if (addressed(d, kAccept) && static_cast<std::int64_t>(d.from) == s[kProposal]) options.push_back(d.from);
      if (s[kAccepted] >= 0 && (options.empty() || options[0] != s[kAccepted])) options.push_back(s[kAccepted]);
      if (!options.empty()) s[kPick] = options[rng.uniform_int(0, options.size() - 1)];
      break;
    }
    case 3:
      for (const auto& d : inbox)
        if (addressed(d, kPick_) && static_cast<std::int64_t>(d.from) == s[kPick]) {
          s[kMate] = s[kPick];
          s[kAnnounce] = 1;
        }
      break;
    default:
      s[kAnnounce] = 0;
      for (const auto& d : inbox) {
        if (d.msg.tag != kMatched) continue;
        auto i = ctx.index_of(d.from);
        if (i >= 0) s[kFlags + static_cast<std::size_t>(i)] = 1;
      }
      choose_proposal(ctx, s, rng);
  }
}

Record MaximalMatchingProgram::output(const NodeContext&, const State& s) const { return {s[kMate]}; }

bool MaximalMatchingProgram::quiescent(const NodeContext& ctx, const State& s) const {
  return !s[kAnnounce] && !active(ctx, s);
}

namespace {

// Augmentation state.
enum : std::size_t {
  aMate,
  aS,
  aD,
  aI,
  aR,
  aDoubled,
  aStart,
  aSrc,
  aParent,
  aSent,
  aLabel,  // three fields
  aBest = aLabel + 3,
  aDirty,
  aWin,  // three fields
  aConfirm = aWin + 3,
  aDone,
  aSuccesses,
  aPhases,
  aSize
};
enum : std::uint16_t { kSearch = 1, kBack, kFlood, kConfirm };

using Label = std::array<std::int64_t, 3>;

bool has_label(const State& s, std::size_t at) { return s[at] >= 0; }
Label label_at(const State& s, std::size_t at) { return {s[at], s[at + 1], s[at + 2]}; }
void put_label(State& s, std::size_t at, const Label& l) { std::copy(l.begin(), l.end(), s.begin() + static_cast<std::ptrdiff_t>(at)); }
bool better(const Label& l, const State& s, std::size_t at) { return !has_label(s, at) || l < label_at(s, at); }

}  // namespace

std::int64_t AugmentingPathProgram::search_budget(std::int64_t s, std::int64_t i) const {
  const double r = c_ * static_cast<double>(s) / static_cast<double>(std::max<std::int64_t>(1, s - i));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(r - 1e-9)));
}

std::uint64_t AugmentingPathProgram::round_bound(std::int64_t s, std::int64_t d) const {
  std::uint64_t t = 0;
  for (std::int64_t i = s / 2; i <= s; ++i) {
    const std::int64_t r = search_budget(s, i);
    t += static_cast<std::uint64_t>(phase_length(r, d) + phase_length(2 * r, d));
  }
  return t + 1;
}

void AugmentingPathProgram::start_phase(const NodeContext& ctx, State& s, std::uint64_t round) const {
  s[aStart] = static_cast<std::int64_t>(round);
  s[aSrc] = s[aParent] = s[aBest] = s[aConfirm] = -1;
  s[aSent] = s[aDirty] = 0;
  for (std::size_t k = 0; k < 3; ++k) s[aLabel + k] = s[aWin + k] = -1;
  if (s[aMate] < 0) {
    s[aSrc] = ctx.id;
    s[aSent] = 1;
  }
}

State AugmentingPathProgram::init(const NodeContext& ctx, const Record& input, RandomStream&) const {
  if (input.size() < 3) throw InvalidArgument("augmenting paths need [mate, s, D] inputs");
  State s(aSize, 0);
  s[aMate] = input[0];
  s[aS] = input[1];
  s[aD] = std::max<std::int64_t>(1, input[2]);
  s[aI] = s[aS] / 2;
  s[aR] = search_budget(s[aS], s[aI]);
  s[aDone] = s[aS] == 0;
  start_phase(ctx, s, 0);
  return s;
}

std::optional<Message> AugmentingPathProgram::broadcast(const NodeContext&, const State& s,
                                                        std::uint64_t round) const {
  if (s[aDone]) return std::nullopt;
  const std::int64_t q = static_cast<std::int64_t>(round) - s[aStart], r = s[aR], d = s[aD];
  if (q <= r) {
    if (s[aSent] == q) return Message::make(kSearch, {s[aSrc]});
  } else if (q <= 2 * r) {
    if (s[aDirty]) return Message::make(kBack, {s[aLabel], s[aLabel + 1], s[aLabel + 2], s[aParent]});
  } else if (q <= 2 * r + d) {
    if (s[aDirty]) return Message::make(kFlood, {s[aWin], s[aWin + 1], s[aWin + 2]});
  } else if (s[aConfirm] >= 0) {
    return Message::make(kConfirm, {s[aConfirm]});
  }
  return std::nullopt;
}

void AugmentingPathProgram::transition(const NodeContext& ctx, State& s, std::uint64_t round,
                                       std::span<const Delivery> inbox, RandomStream&) const {
  if (s[aDone]) return;
  const auto me = static_cast<std::int64_t>(ctx.id);
  const std::int64_t q = static_cast<std::int64_t>(round) - s[aStart], r = s[aR], d = s[aD];
  if (q <= r) {
    // Odd rounds use non-matching edges, even rounds the matching edge.
    auto right_kind = [&](NodeId from) { return (q % 2 == 1) == (static_cast<std::int64_t>(from) != s[aMate]); };
    if (s[aSent] == q) {
      for (const auto& m : inbox) {
        if (m.msg.tag != kSearch || !right_kind(m.from) || m.msg.f[0] == s[aSrc]) continue;
        const std::int64_t other = m.msg.f[0];
        const Label l{std::min(s[aSrc], other), std::max(s[aSrc], other), s[aSrc] < other ? me : m.from};
        if (better(l, s, aLabel)) {
          put_label(s, aLabel, l);
          s[aBest] = m.from;
        }
      }
    } else if (s[aSrc] < 0) {
      const Delivery* pick = nullptr;
      for (const auto& m : inbox)
        if (m.msg.tag == kSearch && right_kind(m.from) && (!pick || m.msg.f[0] < pick->msg.f[0])) pick = &m;
      if (pick) {
        s[aSrc] = pick->msg.f[0];
        s[aParent] = pick->from;
        if (q < r) s[aSent] = q + 1;
      }
    }
    if (q == r) s[aDirty] = has_label(s, aLabel);
  } else if (q <= 2 * r) {
    s[aDirty] = 0;
    for (const auto& m : inbox) {
      if (m.msg.tag != kBack || m.msg.f[3] != me) continue;
      const Label l{m.msg.f[0], m.msg.f[1], m.msg.f[2]};
      if (better(l, s, aLabel)) {
        put_label(s, aLabel, l);
        s[aBest] = m.from;
        s[aDirty] = 1;
      }
    }
    if (q == 2 * r) {
      const bool source = s[aSrc] == me && has_label(s, aLabel);
      if (source) put_label(s, aWin, label_at(s, aLabel));
      s[aDirty] = source;
    }
  } else if (q <= 2 * r + d) {
    s[aDirty] = 0;
    for (const auto& m : inbox) {
      if (m.msg.tag != kFlood) continue;
      const Label l{m.msg.f[0], m.msg.f[1], m.msg.f[2]};
      if (better(l, s, aWin)) {
        put_label(s, aWin, l);
        s[aDirty] = 1;
      }
    }
    if (q == 2 * r + d) {
      s[aDirty] = 0;
      if (has_label(s, aWin) && s[aSrc] == me && s[aWin] == me && label_at(s, aLabel) == label_at(s, aWin)) {
        s[aConfirm] = s[aBest];
        s[aMate] = s[aBest];
      }
    }
  } else {
    s[aConfirm] = -1;
    for (const auto& m : inbox) {
      if (m.msg.tag != kConfirm || m.msg.f[0] != me) continue;
      const std::int64_t from = m.from;
      const std::int64_t next = s[aSrc] == s[aWin] ? s[aBest] : s[aParent];
      s[aMate] = next < 0 || s[aMate] != from ? from : next;
      s[aConfirm] = next;
    }
    if (q == phase_length(r, d)) {
      ++s[aPhases];
      if (has_label(s, aWin)) {
        ++s[aSuccesses];
        ++s[aI];
        s[aR] = search_budget(s[aS], s[aI]);
        s[aDoubled] = 0;
      } else if (!s[aDoubled]) {
        s[aR] = 2 * r;
        s[aDoubled] = 1;
      } else {
        s[aDone] = 1;
        return;
      }
      start_phase(ctx, s, round);
    }
  }
}

Record AugmentingPathProgram::output(const NodeContext&, const State& s) const {
  return {s[aMate], s[aSuccesses], s[aPhases]};
}

bool AugmentingPathProgram::quiescent(const NodeContext&, const State& s) const { return s[aDone] != 0; }

MatchingResult bipartite_max_matching(const Graph& g, std::uint64_t seed, const Constants& c) {
  require_undirected(g);
  require_connected(g);
  if (!bipartition(g)) throw PreconditionError("graph is not bipartite");
  const std::size_t n = g.n();
  RandomStream root(seed);
  MatchingResult res;
  res.metrics = SimMetrics(g.m());
  BcSimBase base = prepare_base(g, root.child("base").key(), c);
  res.metrics.absorb_as("matching.base", base.metrics);
  const GlobalSetup& setup = base.setup;

  const auto iterations =
      static_cast<std::uint64_t>(std::ceil(c.maximal_iter_c * ceil_log2(std::max<std::size_t>(n, 2)) - 1e-9));
  std::vector<std::int64_t> mate0 = with_reseed(
      root.child("maximal").key(), c.max_reseeds,
      [&](std::uint64_t s) {
        SimMetrics sub = res.metrics.child();
        RunResult r;
        try {
          r = run_part("matching.maximal", g, MaximalMatchingProgram(), {}, 4 * iterations, s, sub);
        } catch (const TimeoutError&) {
          throw WhpFailure("maximal matching iterations", "not maximal after " + std::to_string(iterations));
        }
        res.metrics.absorb(sub);
        std::vector<std::int64_t> m(n);
        for (NodeId v = 0; v < n; ++v) m[v] = r.outputs[v][0];
        return m;
      },
      &res.attempts);

  // s = number of matched nodes, summed up the leader's tree and sent back down.
  std::vector<Record> up(n), down(n);
  for (NodeId v = 0; v < n; ++v) {
    up[v] = {setup.parent[v], mate0[v] >= 0 ? 1 : 0};
    down[v] = {v == setup.leader ? 1 : 0, 0};
    for (NodeId ch : setup.children[v]) {
      up[v].push_back(ch);
      down[v].push_back(ch);
    }
  }
  auto cc = run_part("matching.count", g, ConvergecastProgram(ConvergecastProgram::Op::Sum), up, 4 * n + 4,
                     root.child("count").key(), res.metrics);
  res.s = cc.outputs[setup.leader][0];
  down[setup.leader][1] = res.s;
  run_part("matching.announce", g, TreeCastProgram(), down, 4 * n + 4, root.child("announce").key(), res.metrics);
  res.maximal_size = static_cast<std::size_t>(res.s / 2);

  AugmentingPathProgram prog(c.matching_c);
  const std::int64_t d = 2 * static_cast<std::int64_t>(setup.height);
  std::vector<Record> in(n);
  for (NodeId v = 0; v < n; ++v) in[v] = {mate0[v], res.s, d};
  res.round_bound = prog.round_bound(res.s, d);
  BcSimResult r = simulate(g, prog, in, res.round_bound, root.child("augment").key(), base, c);
  res.metrics.absorb_as("matching.augment", r.metrics);

  res.mate.assign(n, kNoNode);
  for (NodeId v = 0; v < n; ++v)
    if (r.outputs[v][0] >= 0) res.mate[v] = static_cast<NodeId>(r.outputs[v][0]);
  res.augmentations = static_cast<std::size_t>(r.outputs[0][1]);
  res.phases = static_cast<std::size_t>(r.outputs[0][2]);
  res.size = matching_size(res.mate);
  return res;
}

}  // namespace congest
