// Shared example systems and hand-built pre-proofs used by the test suite,
// the embedded self-test, and the shipped example files.
#ifndef CYCLO_FIXTURES_HPP_
#define CYCLO_FIXTURES_HPP_

#include "cyclo/proofgraph.hpp"
#include "cyclo/syntax.hpp"

namespace cyclo::fixtures {

// The two-predicate system over constants s, e and the unary function nx:
//   TeF: { => TeF(e);  TeF(nx(x)) => TeF(x) }
//   FsT: { => FsT(s);  FsT(x) => FsT(nx(x)) }
extern const char* const kTefDefinitions;

// Even/odd naturals over z and sc, a three-predicate general-mode system.
extern const char* const kEvenOddDefinitions;

InductiveSystem tef_system();
InductiveSystem even_odd_system();

// The target sequent TeF(s) |- FsT(e).
Sequent counterexample_goal(const InductiveSystem& system);

// A valid cyclic proof of TeF(s) |- FsT(e) that uses Cut twice (18 nodes,
// one bud). It satisfies the global trace condition: the inner case node
// progresses on the TeF atom once per lap.
PreProof counterexample_proof(const InductiveSystem& system);

// Two nodes: a Weak whose premise repeats the conclusion, closed by a bud.
// Valid pre-proof, fails the global trace condition.
PreProof gtc_fail_weak(const InductiveSystem& system);

// Three nodes: a Cut on a formula already present on both sides makes both
// children repeat the root sequent; the right child is a bud pointing at
// its left sibling. Valid but not cycle-normal (and trivially satisfies
// the trace condition since no infinite path exists).
PreProof nonancestor_companion(const InductiveSystem& system);

// s = y, TeF(x) |- FsT(y): provable without cut and without cycles.
Sequent provable_variant_goal(const InductiveSystem& system);
PreProof provable_variant(const InductiveSystem& system);

// N(x) |- Ev(x), Od(x) in the even/odd system: a cut-free cyclic proof
// with a progressing trace on the N atom (12 nodes, one bud).
Sequent even_odd_goal(const InductiveSystem& system);
PreProof even_odd_proof(const InductiveSystem& system);

// Refutation-construction inputs, all with root TeF(s) |- FsT(e):
//  - simple: an equality ping-pong cycle with no switching point.
//  - switching: a substituted case node off the congruence of s, followed
//    by ping-pong cycles in both branches.
//  - noncyclenormal: a bud whose companion sits in the sibling branch.
PreProof refute_candidate_simple(const InductiveSystem& system);
PreProof refute_candidate_switching(const InductiveSystem& system);
PreProof refute_candidate_noncyclenormal(const InductiveSystem& system);

}  // namespace cyclo::fixtures

#endif  // CYCLO_FIXTURES_HPP_
