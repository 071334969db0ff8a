// Finite derivation trees with bud/companion links (cyclic pre-proofs),
// rule instance checking with explicit witnesses, and resolution of the
// possibly infinite tree unfolding.
#ifndef CYCLO_PROOFGRAPH_HPP_
#define CYCLO_PROOFGRAPH_HPP_

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cyclo/syntax.hpp"

namespace cyclo {

// ------------------------------------------------------------- addresses

// Tree addresses: the root is the empty sequence, children are numbered
// from 0. Rendered dot-joined ("1.0.2"), root as "".
using NodeAddress = std::vector<int>;

std::string render_address(const NodeAddress& a);
NodeAddress parse_address(const std::string& text);
bool is_prefix(const NodeAddress& prefix, const NodeAddress& a);
bool is_strict_prefix(const NodeAddress& prefix, const NodeAddress& a);

// ------------------------------------------------------------------ rules

enum class RuleKind { Axiom, Weak, Cut, Subst, EqLa, EqR, UnfoldRight, Case, Bud };

std::string rule_kind_name(RuleKind k);

struct AxiomArgs {};
struct WeakArgs {};
struct EqRArgs {};
struct BudArgs {};
struct CutArgs { Formula formula; };
struct SubstArgs { Substitution theta; };
// The equality-left rule carries the full decomposition witness: the
// conclusion is template[x:=t, y:=u] plus the principal t = u, the premise
// is template[x:=u, y:=t] plus t = u.
struct EqLaArgs {
  std::string x, y;
  Term t, u;
  std::vector<Formula> ante_template, succ_template;
};
struct UnfoldRightArgs {
  std::string pred;
  int production = 0;
  Formula principal;   // the succedent atom being unfolded
  Substitution inst;   // instantiation of the production's variables
};
struct CaseArgs {
  std::string pred;
  Formula principal;                           // the antecedent atom
  std::vector<std::vector<std::string>> fresh; // per production
};

using RuleArgs = std::variant<AxiomArgs, WeakArgs, CutArgs, SubstArgs,
                              EqLaArgs, EqRArgs, UnfoldRightArgs, CaseArgs,
                              BudArgs>;

struct RuleApplication {
  RuleArgs args;

  RuleKind kind() const;
  std::string name() const;  // rule name with pred/production qualifiers

  template <typename T>
  const T& as() const { return std::get<T>(args); }
};

RuleApplication make_axiom();
RuleApplication make_weak();
RuleApplication make_eqr();
RuleApplication make_bud();
RuleApplication make_cut(Formula f);
RuleApplication make_subst(Substitution theta);
RuleApplication make_eqla(std::string x, std::string y, Term t, Term u,
                          std::vector<Formula> ante_template,
                          std::vector<Formula> succ_template);
RuleApplication make_unfold_right(std::string pred, int production,
                                  Formula principal, Substitution inst);
RuleApplication make_case(std::string pred, Formula principal,
                          std::vector<std::vector<std::string>> fresh);

// ------------------------------------------------------------------ trees

struct Node {
  Sequent sequent;
  RuleApplication rule;
};

struct DerivationTree {
  std::map<NodeAddress, Node> nodes;

  bool contains(const NodeAddress& a) const { return nodes.count(a) > 0; }
  const Node& at(const NodeAddress& a) const;
  int child_count(const NodeAddress& a) const;
};

// A pre-proof: a derivation tree plus a companion for every bud. The global
// trace condition is checked separately (trace module).
struct PreProof {
  DerivationTree tree;
  std::map<NodeAddress, NodeAddress> companions;

  bool is_bud(const NodeAddress& a) const { return companions.count(a) > 0; }
};

// ------------------------------------------------------------ rule checks

// Result of checking one rule instance. Codes: WrongChildCount,
// SideConditionFailed, FreshnessViolation, TemplateMismatch,
// PrincipalMissing.
struct RuleCheck {
  bool ok = true;
  std::string code;
  std::string detail;

  static RuleCheck pass() { return {}; }
  static RuleCheck fail(std::string code, std::string detail) {
    return {false, std::move(code), std::move(detail)};
  }
};

RuleCheck check_rule_instance(const InductiveSystem& system, const Node& node,
                              const std::vector<Sequent>& children);

// One case distinction of Γ, P(u) ⊢ Δ for a production: the child sequent
// plus the instantiated inductive assumptions (the case-descendants of the
// principal, i.e. the trace progress targets).
struct CaseChild {
  Sequent sequent;
  std::vector<Formula> descendants;
};

// All case distinctions in production order; throws on arity/shape errors,
// FreshnessViolation reported via RuleCheck by the caller.
std::vector<CaseChild> case_distinctions(const InductiveSystem& system,
                                         const Sequent& conclusion,
                                         const Formula& principal,
                                         const std::vector<std::vector<std::string>>& fresh);

// --------------------------------------------------------------- validity

struct Issue {
  NodeAddress address;
  std::string code;
  std::string detail;
};

struct ValidityReport {
  bool valid = true;
  bool cut_free = true;
  bool cycle_normal = true;
  std::vector<Issue> issues;

  std::string render() const;
};

// Checks the complete pre-proof: address closure, well-formed formulas,
// every rule instance, bud/companion discipline. Reports all failures, not
// just the first.
ValidityReport check_pre_proof(const InductiveSystem& system, const PreProof& p);

// Remark-style shape discipline for cut-free proofs in the counterexample
// fragment: antecedents contain only equalities and tef-atoms, succedents
// only fst-atoms, all terms linear, and the only rules are Weak, Subst,
// EqLa, the two fst unfoldings, Case on tef, and buds.
std::vector<Issue> fragment_shape_violations(const InductiveSystem& system,
                                             const PreProof& p);

// -------------------------------------------------------------- unfolding

struct Unresolvable : Error { using Error::Error; };

// Resolves an address of the (possibly infinite) unfolding to the inner
// node of the finite tree representing it: while the address is not an
// inner address, the unique bud prefix is replaced by its companion.
// Returns nullopt when the address leaves the tree domain.
std::optional<NodeAddress> try_resolve_unfolding(const PreProof& p,
                                                 const NodeAddress& a);
NodeAddress resolve_unfolding(const PreProof& p, const NodeAddress& a);

// The inner address reached by stepping from inner address `a` to its
// child `i`, jumping bud -> companion; nullopt when out of range.
std::optional<NodeAddress> resolved_child(const PreProof& p,
                                          const NodeAddress& a, int i);

// Node-by-node comparison of the two unfoldings on all addresses of length
// <= depth: same domain, same sequents, same rule names.
bool unfoldings_equal_to_depth(const PreProof& p1, const PreProof& p2,
                               int depth);

}  // namespace cyclo

#endif  // CYCLO_PROOFGRAPH_HPP_
