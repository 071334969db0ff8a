// Path analysis for cut-free proofs in the counterexample fragment:
// switching points, unfinished and rightmost paths, the index-transition
// lemma, and the mechanical refutation of cut-free candidate proofs of the
// sequent tef(start) |- fst(end).
#ifndef CYCLO_ANALYSIS_HPP_
#define CYCLO_ANALYSIS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "cyclo/congruence.hpp"
#include "cyclo/proofgraph.hpp"
#include "cyclo/syntax.hpp"
#include "cyclo/trace.hpp"

namespace cyclo {

// A switching point is a Case node on the tef predicate whose principal
// argument has index bot in the conclusion, i.e. the argument is not
// connected to the start constant by the antecedent congruence.
bool is_switching_point(const InductiveSystem& system, const PreProof& p,
                        const NodeAddress& inner);
std::vector<NodeAddress> switching_points(const InductiveSystem& system,
                                          const PreProof& p);

// ---------------------------------------------------------------- paths

struct InvalidPath : Error { using Error::Error; };

struct PathCheck {
  bool ok = true;
  int position = -1;
  std::string detail;
};

// A path (of unfolding addresses, each extending the previous by one child
// index) is unfinished when it starts at a root-like sequent and enters a
// left case assumption only at switching points.
PathCheck is_unfinished_path(const InductiveSystem& system, const PreProof& p,
                             const std::vector<NodeAddress>& path);

// The rightmost path from `start`: the right assumption at Case nodes, the
// unique assumption elsewhere, following buds through their companions.
// Stops after max_len nodes or at a zero-premise rule; throws OutOfFragment
// when a premise-bearing rule outside the fragment shows up.
std::vector<NodeAddress> rightmost_path(const InductiveSystem& system,
                                        const PreProof& p,
                                        const NodeAddress& start, int max_len);

// ------------------------------------------------------ index transitions

// Checks the index-transition table along a trace: bot is absorbing;
// weakening and substitution map d to d or bot; equality rewriting and the
// fst unfolding preserve d; a case step preserves d except at progress
// points, where d increments. Undefined and cap-exceeded index values are
// reported distinctly.
struct IndexTransitionReport {
  bool ok = true;
  int position = -1;
  std::string clause;  // which table clause was violated, or diagnostics
  std::string detail;
  std::vector<IndexValue> indices;

  std::string render() const;
};

IndexTransitionReport check_index_transitions(const InductiveSystem& system,
                                              const PreProof& p,
                                              const std::vector<NodeAddress>& path,
                                              const std::vector<Formula>& trace);

// --------------------------------------------------------------- refutation

struct NotCutFree : Error { using Error::Error; };
struct NotCycleNormal : Error { using Error::Error; };
struct WrongRoot : Error { using Error::Error; };

enum class RefutationOutcome { ContradictionFound, InputInvalid, GtcFailed };

struct RefutationReport {
  RefutationOutcome outcome = RefutationOutcome::InputInvalid;
  // The switching points located, in construction order (strictly
  // increasing heights). On ContradictionFound it has |nodes|+1 entries.
  std::vector<NodeAddress> sigma_tildes;
  std::optional<Lasso> lasso;  // set on GtcFailed
  std::string reason;          // set on InputInvalid

  std::string render() const;
};

// Mechanically replays the refutation construction on a candidate cut-free
// cycle-normal pre-proof of tef(start) |- fst(end): follow the rightmost
// path until it loops, pick the least-height switching point seen, descend
// into its left assumption, and repeat. Producing |nodes|+1 distinct
// switching points of strictly increasing heights is impossible, so on
// actual inputs the walk eventually yields a lasso without switching points
// (GtcFailed) or a prerequisite fails (InputInvalid).
RefutationReport refute_cut_free_candidate(const InductiveSystem& system,
                                           const PreProof& p);

}  // namespace cyclo

#endif  // CYCLO_ANALYSIS_HPP_
