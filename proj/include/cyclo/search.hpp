// Bounded iterative-deepening proof search for cyclic proofs.
//
// The search works goal-directed from the conclusion: at each open goal it
// tries, in a fixed order, zero-premise closures, bud formation against
// path ancestors (a Weak/Subst/Bud chain making the goal literally an
// instance of the ancestor, accepted only when the partial proof still
// satisfies the global trace condition), case analysis, right unfolding,
// single-position equality rewrites, and optionally cuts drawn from an
// instantiated formula pool. Weakening is otherwise applied only below cut
// premises (dropping antecedent formulas), never speculatively.
#ifndef CYCLO_SEARCH_HPP_
#define CYCLO_SEARCH_HPP_

#include <optional>
#include <string>
#include <vector>

#include "cyclo/proofgraph.hpp"
#include "cyclo/syntax.hpp"

namespace cyclo {

struct BoundsTooSmall : Error { using Error::Error; };

struct SearchBounds {
  int max_tree_depth = 8;   // nodes on a root-to-leaf path
  int max_term_depth = 6;   // cap on generated term depth
  long max_nodes = 5'000'000;
  bool allow_cut = false;
  std::vector<Formula> cut_formula_pool;  // patterns; variables are instantiated
};

struct SearchStats {
  long expansions = 0;
  long bud_candidates = 0;
  long buds_rejected_gtc = 0;
  int depth_reached = 0;
  bool budget_exhausted = false;
  // In fragment-restricted (cut-free) mode every visited goal is checked
  // against the fragment shape discipline; a nonzero count indicates a
  // search bug, not a property of the input.
  long shape_violations = 0;

  std::string render() const;
};

enum class SearchStatus { ProofFound, Exhausted };

struct SearchResult {
  SearchStatus status = SearchStatus::Exhausted;
  std::optional<PreProof> proof;
  SearchStats stats;
};

// The cut formulas suggested for the counterexample goal: tef(f x),
// tef(f f x), fst(f x) over the identified fragment.
std::vector<Formula> default_cut_pool(const InductiveSystem& system);

// Deterministic bounded search. Within the fragment (and without cut) the
// move set follows the cut-free rule inventory; otherwise the full rule set
// is used. Throws BoundsTooSmall when the goal itself violates the caps.
SearchResult search_cut_free(const InductiveSystem& system, const Sequent& goal,
                             const SearchBounds& bounds);

}  // namespace cyclo

#endif  // CYCLO_SEARCH_HPP_
