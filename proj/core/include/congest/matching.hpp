#pragma once

#include <vector>

#include "congest/constants.hpp"
#include "congest/metrics.hpp"
#include "congest/program.hpp"

namespace congest {

// Randomized maximal matching in iterations of four broadcast rounds:
// unmatched nodes propose to a random unmatched neighbor, every node accepts
// one random proposer, every node picks one of its (at most two) accepted
// edges at random, and mutually picked edges join the matching and are
// announced. Nodes stop once matched or without unmatched neighbors.
// Output: [mate or -1].
class MaximalMatchingProgram final : public Program {
 public:
  Mode mode() const override { return Mode::Bcongest; }
  std::string name() const override { return "maximal_matching"; }
  State init(const NodeContext& ctx, const Record& input, RandomStream& rng) const override;
  std::optional<Message> broadcast(const NodeContext& ctx, const State& s, std::uint64_t round) const override;
  void transition(const NodeContext& ctx, State& s, std::uint64_t round, std::span<const Delivery> inbox,
                  RandomStream& rng) const override;
  Record output(const NodeContext& ctx, const State& s) const override;
  bool quiescent(const NodeContext& ctx, const State& s) const override;
};

// Augmentation phases on a bipartite graph. Input: [mate or -1, s, D] where
// s is twice the size of the starting (maximal) matching and D bounds the
// diameter. Phase i with search budget R = ceil(matching_c s / (s - i)):
//   search, R rounds: free nodes broadcast their id; a matched node adopts
//     the first broadcast it hears, over a non-matching edge in odd rounds
//     and over its matching edge in even rounds, smallest source first, and
//     forwards it in the next round. Two nodes of different trees that
//     broadcast to each other over an edge of the right kind close an
//     augmenting path labelled (smaller source, larger source, endpoint of
//     the smaller source's tree).
//   back, R rounds: labels climb the trees, every node keeping the smallest
//     and the child it came from.
//   flood, D rounds: the free nodes flood their labels; everyone learns the
//     smallest one.
//   confirm, 2R + 1 rounds: the winning path's smaller source walks down its
//     tree, across the meeting edge and up the other tree, flipping every
//     edge on the way.
// A phase without a path is repeated once with 2R; a second miss ends the
// program. Output: [mate or -1, successful phases, phases].
class AugmentingPathProgram final : public Program {
 public:
  explicit AugmentingPathProgram(double matching_c = 4) : c_(matching_c) {}
  Mode mode() const override { return Mode::Bcongest; }
  std::string name() const override { return "augmenting_paths"; }
  State init(const NodeContext& ctx, const Record& input, RandomStream& rng) const override;
  std::optional<Message> broadcast(const NodeContext& ctx, const State& s, std::uint64_t round) const override;
  void transition(const NodeContext& ctx, State& s, std::uint64_t round, std::span<const Delivery> inbox,
                  RandomStream& rng) const override;
  Record output(const NodeContext& ctx, const State& s) const override;
  bool quiescent(const NodeContext& ctx, const State& s) const override;

  std::int64_t search_budget(std::int64_t s, std::int64_t i) const;
  static std::int64_t phase_length(std::int64_t r, std::int64_t d) { return 4 * r + d + 1; }
  // Rounds for every phase the program can run, starting from |M| = s / 2.
  std::uint64_t round_bound(std::int64_t s, std::int64_t d) const;

 private:
  void start_phase(const NodeContext& ctx, State& s, std::uint64_t round) const;
  double c_;
};

struct MatchingResult {
  std::vector<NodeId> mate;
  std::size_t size = 0;
  std::size_t maximal_size = 0;
  std::int64_t s = 0;
  std::size_t phases = 0;
  std::size_t augmentations = 0;
  std::uint64_t round_bound = 0;
  unsigned attempts = 1;
  SimMetrics metrics;
};

// Maximum matching of a connected bipartite graph: a maximal matching run
// directly, s = 2 |maximal| counted over the leader's tree, then the
// augmentation phases under the broadcast simulation.
MatchingResult bipartite_max_matching(const Graph& g, std::uint64_t seed, const Constants& c = {});

}  // namespace congest
