// Traces along paths of a cyclic pre-proof and the global trace condition.
//
// A trace follows inductive antecedent atoms from conclusions to premises;
// it progresses exactly when a case analysis replaces the principal atom by
// one of its instantiated inductive assumptions. The global trace condition
// asks that every infinite path through the proof graph has a tail followed
// by an infinitely progressing trace; it is decided here by composing
// per-edge trace matrices to closure and inspecting idempotent loops.
#ifndef CYCLO_TRACE_HPP_
#define CYCLO_TRACE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cyclo/proofgraph.hpp"
#include "cyclo/syntax.hpp"

namespace cyclo {

// ----------------------------------------------------------- edge relation

struct TracePair {
  Formula from;   // inductive atom in the conclusion's antecedent
  Formula to;     // inductive atom in the premise's antecedent
  bool progress = false;
};

// The trace pairs across the edge from inner node `a` to its child `i`
// (bud children contribute the identity relation on the companion, which
// has the same sequent). Pairs are returned sorted and duplicate-free.
std::vector<TracePair> edge_trace_pairs(const InductiveSystem& system,
                                        const PreProof& p,
                                        const NodeAddress& a, int i);

// ------------------------------------------------------------ verification

struct TraceCheckResult {
  bool ok = true;
  int error_position = -1;   // first offending index into the trace
  std::string detail;
  std::vector<int> progress_positions;  // indices i where step i -> i+1 progresses
};

// Verifies clause by clause that `formulas` is a trace along `path`, a
// sequence of unfolding addresses each of which extends the previous by one
// child index. Reports the first violated position.
TraceCheckResult verify_trace(const InductiveSystem& system, const PreProof& p,
                              const std::vector<NodeAddress>& path,
                              const std::vector<Formula>& formulas);

// ------------------------------------------------------------------- GTC

// A lasso witnessing a failure: stem from the root to the cycle entry, then
// the cycle itself (inner addresses; last cycle node loops to the first).
struct Lasso {
  std::vector<NodeAddress> stem;
  std::vector<NodeAddress> cycle;

  std::string render() const;
};

struct GtcStats {
  long matrices_explored = 0;
  long compositions = 0;
  int graph_nodes = 0;
  int graph_edges = 0;
};

struct GtcVerdict {
  bool holds = true;
  std::optional<Lasso> counterexample;
  GtcStats stats;
};

// Decides the global trace condition for a structurally valid pre-proof by
// saturating trace matrices under composition: the condition holds iff every
// idempotent matrix looping on a node carries progress on its diagonal. On
// failure the provenance of the offending matrix is unwound into a concrete
// lasso. Bud-free trees hold vacuously.
GtcVerdict check_gtc(const InductiveSystem& system, const PreProof& p);

// Independent reference decision: enumerates all closed walks through the
// proof graph up to `max_walk_len` edges (default 3 * number of inner nodes)
// and checks each for a cyclic progressing trace; agrees with check_gtc on
// graphs whose failures are witnessed by walks within the cap.
bool naive_gtc_oracle(const InductiveSystem& system, const PreProof& p,
                      int max_walk_len = -1);

// ------------------------------------------------------------ normal form

// Rewrites a valid pre-proof into cycle-normal form (every companion a
// strict ancestor of its buds) with the same unfolding: nodes are grouped
// by bisimilarity of their unfolded subtrees, and the unfolding is replayed
// until a class repeats along the current branch, where a bud is formed.
PreProof cycle_normalize(const InductiveSystem& system, const PreProof& p);

}  // namespace cyclo

#endif  // CYCLO_TRACE_HPP_
