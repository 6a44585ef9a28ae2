#include "congest/metrics.hpp"

#include <algorithm>
#include <json.hpp>
#include <numeric>

#include "congest/errors.hpp"

namespace congest {

void Trace::add(std::uint64_t round, DirEdge d) {
  if (marks_.empty() || marks_.back().round != round) {
    if (!marks_.empty() && round < marks_.back().round)
      throw InvariantViolation("trace rounds must be nondecreasing");
    marks_.push_back({round, edges_.size()});
  }
  edges_.push_back(d);
}

Trace::Slice Trace::slice(std::size_t i) const {
  std::size_t b = marks_[i].start;
  std::size_t e = i + 1 < marks_.size() ? marks_[i + 1].start : edges_.size();
  return {marks_[i].round, edges_.data() + b, edges_.data() + e};
}

SimMetrics SimMetrics::child() const {
  SimMetrics c(edge_congestion.size());
  c.trace = trace;
  c.trace_offset = trace_offset + rounds;
  return c;
}

void SimMetrics::absorb(const SimMetrics& c) {
  rounds += c.rounds;
  messages += c.messages;
  broadcasts += c.broadcasts;
  in_bits = std::max(in_bits, c.in_bits);
  out_bits = std::max(out_bits, c.out_bits);
  if (edge_congestion.size() < c.edge_congestion.size()) edge_congestion.resize(c.edge_congestion.size(), 0);
  for (std::size_t i = 0; i < c.edge_congestion.size(); ++i) edge_congestion[i] += c.edge_congestion[i];
  per_phase.insert(per_phase.end(), c.per_phase.begin(), c.per_phase.end());
  for (const auto& [k, v] : c.counters) counters[k] += v;
  dilation = rounds;
}

void SimMetrics::absorb_as(const std::string& part, const SimMetrics& c) {
  counters[part + ".rounds"] += c.rounds;
  counters[part + ".messages"] += c.messages;
  absorb(c);
}

std::uint64_t SimMetrics::max_edge_congestion() const {
  return edge_congestion.empty() ? 0 : *std::max_element(edge_congestion.begin(), edge_congestion.end());
}

std::uint64_t SimMetrics::total_edge_congestion() const {
  return std::accumulate(edge_congestion.begin(), edge_congestion.end(), std::uint64_t{0});
}

std::string SimMetrics::to_json() const {
  nlohmann::ordered_json j;
  j["rounds"] = rounds;
  j["messages"] = messages;
  j["broadcasts"] = broadcasts;
  j["dilation"] = dilation;
  j["max_edge_congestion"] = max_edge_congestion();
  j["in_bits"] = in_bits;
  j["out_bits"] = out_bits;
  auto phases = nlohmann::ordered_json::array();
  for (const auto& p : per_phase) {
    phases.push_back({{"p", p.p},
                      {"messages_step1", p.messages_step1},
                      {"messages_step2", p.messages_step2},
                      {"broadcasters", p.broadcasters},
                      {"rounds", p.rounds}});
  }
  j["per_phase"] = std::move(phases);
  nlohmann::ordered_json cs = nlohmann::ordered_json::object();
  for (const auto& [k, v] : counters) cs[k] = v;
  j["counters"] = std::move(cs);
  return j.dump();
}

}  // namespace congest
