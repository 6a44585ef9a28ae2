#pragma once

#include <string>
#include <vector>

#include "congest/constants.hpp"
#include "congest/graph.hpp"
#include "congest/metrics.hpp"

namespace congest {

struct CoverTree {
  NodeId center = 0;
  unsigned phase = 0;
  std::int64_t radius = 0;
  std::vector<NodeId> members;       // ascending
  std::vector<std::int64_t> parent;  // aligned with members, -1 at the center
  std::vector<std::int64_t> depth;   // aligned with members
};

struct Cover {
  unsigned k = 1;
  std::int64_t w = 1;
  std::vector<CoverTree> trees;
};

struct CoverReport {
  std::int64_t max_depth = 0;
  std::size_t max_membership = 0;
  double depth_bound = 0;
  double membership_bound = 0;
  bool trees_valid = true;
  bool depth_ok = true;
  bool membership_ok = true;
  bool neighborhoods_ok = true;
  std::vector<std::string> problems;
  bool ok() const { return trees_valid && depth_ok && membership_ok && neighborhoods_ok; }
};

// Tree shape (parent edges, depths), depth <= cover_depth_c k W, membership
// <= cover_membership_c k n^(1/k) ln n, and every W-neighborhood inside one
// tree.
CoverReport check_cover(const Graph& g, const Cover& cover, const Constants& c = {});

// Exploration radius of phase j (1-based): (2(k - j) + 1) W.
std::int64_t cover_radius(unsigned k, std::int64_t w, unsigned phase);

struct CoverResult {
  Cover cover;
  CoverReport report;
  SimMetrics metrics;
  unsigned attempts = 1;
  std::vector<std::size_t> centers_per_phase;
};

// k phases; phase j samples every uncovered node with probability n^(j/k - 1)
// and runs depth-limited BFS explorations of radius cover_radius from the
// sampled nodes under the broadcast simulation. A node at distance d from a
// center is covered when d + W <= radius. The finished cover is checked and
// the construction is redrawn on failure.
CoverResult neighborhood_cover(const Graph& g, unsigned k, std::int64_t w, std::uint64_t seed,
                               const Constants& c = {});

}  // namespace congest
