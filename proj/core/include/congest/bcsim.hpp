#pragma once

#include <map>
#include <memory>
#include <vector>

#include "congest/constants.hpp"
#include "congest/engine.hpp"
#include "congest/ldc.hpp"
#include "congest/primitives.hpp"

namespace congest {

// What every cluster center knows about its members: replicated program
// states, inputs and incident-edge lists. States are stored by node id but
// each entry is read and written only on behalf of center(v).
struct CenterLedger {
  std::map<NodeId, std::vector<NodeId>> members;
  std::vector<State> state;
  std::vector<Record> input;
  std::vector<NodeContext> ctx;
  // Next simulated round.
  std::uint64_t round = 1;
  bool finished = false;
};

// Leader setup and decomposition shared by several simulated programs.
struct BcSimBase {
  GlobalSetup setup;
  LdcDecomposition ldc;
  SimMetrics metrics;
  unsigned ldc_attempts = 1;
};

BcSimBase prepare_base(const Graph& g, std::uint64_t seed, const Constants& c = {});

struct Preprocessing {
  GlobalSetup setup;
  LdcDecomposition ldc;
  CenterLedger ledger;
  SimMetrics metrics;
  unsigned ldc_attempts = 1;
};

// Leader and node count over a BFS tree, LDC decomposition with reseeding,
// then every node upcasts its input record and edge list to its center.
// The ledger states are initialised with the program's round-0 stream.
Preprocessing preprocess(const Graph& g, const Program& prog, const std::vector<Record>& inputs, std::uint64_t seed,
                         const Constants& c = {});
// Same with a prepared base; only the upcast is charged.
Preprocessing preprocess(const Graph& g, const Program& prog, const std::vector<Record>& inputs, std::uint64_t seed,
                         const BcSimBase& base);

struct BcSimOptions {
  // Compare the ledger with a lockstep direct run after every phase.
  bool shadow_check = false;
  // Record a trace of the phase traffic and check that every message
  // between clusters uses an F edge.
  bool check_f_edges = false;
};

struct BcSimResult {
  std::vector<Record> outputs;
  SimMetrics metrics;
  LdcDecomposition ldc;
  // Simulated rounds until quiescence; later phases are idle.
  std::uint64_t simulated_rounds = 0;
  std::uint64_t phase_budget = 0;
  std::uint64_t preprocessing_messages = 0;
  std::uint64_t inter_cluster_messages = 0;
};

// Rounds allotted to each step of a phase: ceil(c1 n log2 n).
std::uint64_t phase_budget(std::size_t n, const Constants& c);

// Simulated round p in one phase: broadcasts leave each cluster through its
// F edges after a downcast from the center, receipts are upcast and every
// center applies the round's transitions for its members. Returns the
// phase statistics; throws BudgetError when a step overruns `budget`.
PhaseStat run_phase(const Graph& g, const Program& prog, const LdcDecomposition& ldc, CenterLedger& ledger,
                    std::uint64_t seed, std::uint64_t budget, SimMetrics& m);

// CONGEST simulation of a broadcast program over an LDC decomposition.
// `max_rounds` bounds the program's round complexity.
BcSimResult simulate(const Graph& g, const Program& prog, const std::vector<Record>& inputs,
                     std::uint64_t max_rounds, std::uint64_t seed, const Constants& c = {},
                     const BcSimOptions& opt = {});
// Simulation over a prepared base, whose cost the caller has already charged.
BcSimResult simulate(const Graph& g, const Program& prog, const std::vector<Record>& inputs,
                     std::uint64_t max_rounds, std::uint64_t seed, const BcSimBase& base, const Constants& c = {},
                     const BcSimOptions& opt = {});

// C (In + Out + B) log2^2 n, with In and Out counted in payload fields.
double simulation_message_bound(std::size_t n, std::uint64_t in_bits, std::uint64_t out_bits,
                                std::uint64_t broadcasts, double C);

// Counts messages in `t` that cross between clusters; throws
// InvariantViolation on one that does not use an F edge.
std::uint64_t check_inter_cluster_traffic(const Graph& g, const LdcDecomposition& ldc, const Trace& t);

}  // namespace congest
