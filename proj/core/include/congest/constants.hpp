#pragma once

#include <string>

namespace congest {

// Every tunable constant used by constructions, simulations and validators.
// Values are loaded from a versioned JSON file; defaults match version 1.
struct Constants {
  int version = 1;

  // Exponential-shift decomposition.
  double ldc_beta = 0.5;
  double ldc_diameter_c = 16;  // strong diameter <= c * log2 n
  double ldc_degree_c = 16;    // F out-degree <= c * log2 n

  // Cluster hierarchies.
  double bs_degree_c = 4;  // F_i degree <= c * n^eps * ln n
  double rarity_c = 4;     // P[cluster edge] <= c * kappa * n^-eps
  double smoothing_c = 6;  // hierarchies per cluster edge <= c * ln n

  // Phase budgets, in units of n log2 n (general, star: n^(1-eps) log2 n).
  double c1 = 8;
  double c2 = 8;
  double c3 = 8;
  // Simulation message bound: messages <= C (In + Out + B) log2^2 n.
  double sim_message_c = 64;

  // Schedulers.
  double slot_c = 2;            // slots per scheduled round: c * ceil(log2 n)
  double source_audit_c = 4;    // distinct sources per node per round <= c ln n
  double schedule_c = 4;        // central schedule length <= c (congestion + dilation log2 n)

  // Unweighted APSP.
  double depth_c = 4;     // L = c n^(1-eps) log2 n
  double landmark_c = 4;  // p = c ln n n^(eps-1)

  // Matching.
  double matching_c = 4;       // phase budget c ceil(s / (s - i))
  double maximal_iter_c = 4;   // maximal matching iterations c ceil(log2 n)

  // Neighborhood covers.
  double cover_depth_c = 2;       // depth <= c k W
  double cover_membership_c = 2;  // membership <= c k n^(1/k) ln n

  unsigned max_reseeds = 3;
};

Constants default_constants();
Constants parse_constants(const std::string& json_text);
Constants load_constants(const std::string& path);
std::string constants_to_json(const Constants& c);

}  // namespace congest
