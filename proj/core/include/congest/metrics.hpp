#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "congest/graph.hpp"

namespace congest {

// Per-round record of which directed edges carried a message, stored
// compactly. Rounds must be appended in nondecreasing order.
class Trace {
 public:
  void add(std::uint64_t round, DirEdge d);
  std::size_t size() const { return edges_.size(); }
  std::uint64_t last_round() const { return marks_.empty() ? 0 : marks_.back().round; }

  struct Slice {
    std::uint64_t round;
    const DirEdge* begin;
    const DirEdge* end;
  };
  std::size_t slice_count() const { return marks_.size(); }
  Slice slice(std::size_t i) const;

 private:
  struct Mark {
    std::uint64_t round;
    std::size_t start;
  };
  std::vector<DirEdge> edges_;
  std::vector<Mark> marks_;
};

struct PhaseStat {
  std::uint64_t p = 0;
  std::uint64_t messages_step1 = 0;
  std::uint64_t messages_step2 = 0;
  std::uint64_t broadcasters = 0;
  std::uint64_t rounds = 0;
};

struct SimMetrics {
  std::uint64_t rounds = 0;
  std::uint64_t messages = 0;
  std::uint64_t broadcasts = 0;
  std::uint64_t dilation = 0;
  std::uint64_t in_bits = 0;
  std::uint64_t out_bits = 0;
  std::vector<std::uint64_t> edge_congestion;
  std::vector<PhaseStat> per_phase;
  std::map<std::string, std::uint64_t> counters;

  // Optional message trace shared with children; rounds are absolute.
  std::shared_ptr<Trace> trace;
  std::uint64_t trace_offset = 0;

  SimMetrics() = default;
  explicit SimMetrics(std::size_t m) : edge_congestion(m, 0) {}

  // One message over directed edge d during round `local_round` (1-based)
  // of the step that starts after the current `rounds`.
  void charge(DirEdge d, std::uint64_t local_round) {
    ++messages;
    ++edge_congestion[d >> 1];
    if (trace) trace->add(trace_offset + rounds + local_round, d);
  }

  // Fresh metrics for a sub-step that starts now; shares the trace.
  SimMetrics child() const;
  // Sequential composition: the child ran after everything recorded here.
  void absorb(const SimMetrics& c);
  // Adds the child's totals under a counter prefix before absorbing.
  void absorb_as(const std::string& part, const SimMetrics& c);

  std::uint64_t max_edge_congestion() const;
  std::uint64_t total_edge_congestion() const;
  std::string to_json() const;
};

}  // namespace congest
