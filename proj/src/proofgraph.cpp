#include "cyclo/proofgraph.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

#include "cyclo/congruence.hpp"

namespace cyclo {

// ------------------------------------------------------------- addresses

std::string render_address(const NodeAddress& a) {
  std::string out;
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(a[i]);
  }
  return out;
}

NodeAddress parse_address(const std::string& text) {
  NodeAddress out;
  if (text.empty()) return out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t dot = text.find('.', pos);
    std::string part = text.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      throw Error("bad node address '" + text + "'");
    }
    out.push_back(std::stoi(part));
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  return out;
}

bool is_prefix(const NodeAddress& prefix, const NodeAddress& a) {
  if (prefix.size() > a.size()) return false;
  return std::equal(prefix.begin(), prefix.end(), a.begin());
}

bool is_strict_prefix(const NodeAddress& prefix, const NodeAddress& a) {
  return prefix.size() < a.size() && is_prefix(prefix, a);
}

// ------------------------------------------------------------------ rules

RuleKind RuleApplication::kind() const {
  return static_cast<RuleKind>(args.index());
}

std::string rule_kind_name(RuleKind k) {
  switch (k) {
    case RuleKind::Axiom: return "Axiom";
    case RuleKind::Weak: return "Weak";
    case RuleKind::Cut: return "Cut";
    case RuleKind::Subst: return "Subst";
    case RuleKind::EqLa: return "EqLa";
    case RuleKind::EqR: return "EqR";
    case RuleKind::UnfoldRight: return "UnfoldRight";
    case RuleKind::Case: return "Case";
    case RuleKind::Bud: return "Bud";
  }
  return "?";
}

std::string RuleApplication::name() const {
  switch (kind()) {
    case RuleKind::UnfoldRight: {
      const auto& a = as<UnfoldRightArgs>();
      return "UnfoldRight(" + a.pred + "," + std::to_string(a.production) + ")";
    }
    case RuleKind::Case:
      return "Case(" + as<CaseArgs>().pred + ")";
    default:
      return rule_kind_name(kind());
  }
}

RuleApplication make_axiom() { return {AxiomArgs{}}; }
RuleApplication make_weak() { return {WeakArgs{}}; }
RuleApplication make_eqr() { return {EqRArgs{}}; }
RuleApplication make_bud() { return {BudArgs{}}; }
RuleApplication make_cut(Formula f) { return {CutArgs{std::move(f)}}; }
RuleApplication make_subst(Substitution theta) { return {SubstArgs{std::move(theta)}}; }
RuleApplication make_eqla(std::string x, std::string y, Term t, Term u,
                          std::vector<Formula> ante_template,
                          std::vector<Formula> succ_template) {
  return {EqLaArgs{std::move(x), std::move(y), std::move(t), std::move(u),
                   std::move(ante_template), std::move(succ_template)}};
}
RuleApplication make_unfold_right(std::string pred, int production,
                                  Formula principal, Substitution inst) {
  return {UnfoldRightArgs{std::move(pred), production, std::move(principal),
                          std::move(inst)}};
}
RuleApplication make_case(std::string pred, Formula principal,
                          std::vector<std::vector<std::string>> fresh) {
  return {CaseArgs{std::move(pred), std::move(principal), std::move(fresh)}};
}

// ------------------------------------------------------------------ trees

const Node& DerivationTree::at(const NodeAddress& a) const {
  auto it = nodes.find(a);
  if (it == nodes.end()) throw Error("no node at address '" + render_address(a) + "'");
  return it->second;
}

int DerivationTree::child_count(const NodeAddress& a) const {
  NodeAddress child = a;
  child.push_back(0);
  int n = 0;
  while (nodes.count(child)) {
    ++n;
    child.back() = n;
  }
  return n;
}

// ------------------------------------------------------------ rule checks

namespace {

bool seq_eq(const Sequent& a, const Sequent& b) {
  return a.ante == b.ante && a.succ == b.succ;
}

bool formula_subset(const std::vector<Formula>& small, const std::vector<Formula>& big) {
  for (const auto& f : small) {
    if (!std::binary_search(big.begin(), big.end(), f)) return false;
  }
  return true;
}

bool contains_formula(const std::vector<Formula>& fs, const Formula& f) {
  return std::binary_search(fs.begin(), fs.end(), f);
}

std::string wrong_children(size_t want, size_t got) {
  return "expected " + std::to_string(want) + " premises, found " + std::to_string(got);
}

// Checks that a term only uses declared function symbols with correct
// arities; anything not declared as a function is a variable and must be
// used without arguments.
void validate_term(const Signature& sig, const Term& t, std::string& problem) {
  if (!problem.empty()) return;
  if (t.kind == Term::Kind::Var) {
    if (sig.function_arity(t.name).has_value()) {
      problem = "'" + t.name + "' is a declared function symbol used as a variable";
    }
    return;
  }
  auto arity = sig.function_arity(t.name);
  if (!arity) {
    problem = "undeclared function symbol '" + t.name + "'";
    return;
  }
  if (static_cast<size_t>(*arity) != t.args.size()) {
    problem = "function '" + t.name + "' expects " + std::to_string(*arity) +
              " arguments, found " + std::to_string(t.args.size());
    return;
  }
  for (const auto& a : t.args) validate_term(sig, a, problem);
}

std::string validate_formula(const InductiveSystem& system, const Formula& f) {
  std::string problem;
  if (f.kind == Formula::Kind::Equality) {
    validate_term(system.signature, f.lhs(), problem);
    validate_term(system.signature, f.rhs(), problem);
    return problem;
  }
  auto ind = system.signature.inductive_arity(f.pred);
  auto ord = system.signature.ordinary_arity(f.pred);
  if (!ind && !ord) return "undeclared predicate '" + f.pred + "'";
  size_t arity = static_cast<size_t>(ind ? *ind : *ord);
  if (arity != f.args.size()) {
    return "predicate '" + f.pred + "' expects " + std::to_string(arity) +
           " arguments, found " + std::to_string(f.args.size());
  }
  for (const auto& a : f.args) validate_term(system.signature, a, problem);
  return problem;
}

}  // namespace

std::vector<CaseChild> case_distinctions(
    const InductiveSystem& system, const Sequent& conclusion,
    const Formula& principal, const std::vector<std::vector<std::string>>& fresh) {
  if (principal.kind != Formula::Kind::Atom ||
      !system.is_inductive_atom(principal)) {
    throw Error("case principal must be an inductive atom, got '" +
                principal.text() + "'");
  }
  const auto& productions = system.productions_of(principal.pred);
  if (fresh.size() != productions.size()) {
    throw Error("case on '" + principal.pred + "' needs " +
                std::to_string(productions.size()) + " fresh-variable lists");
  }
  Sequent base = conclusion.without_ante(principal);
  std::vector<CaseChild> out;
  for (size_t k = 0; k < productions.size(); ++k) {
    const Production& prod = productions[k];
    std::vector<std::string> vars = prod.variables();
    if (fresh[k].size() != vars.size()) {
      throw Error("production " + std::to_string(k) + " of '" + principal.pred +
                  "' has " + std::to_string(vars.size()) + " variables, got " +
                  std::to_string(fresh[k].size()) + " fresh names");
    }
    Substitution rename;
    for (size_t i = 0; i < vars.size(); ++i) rename[vars[i]] = Term::var(fresh[k][i]);

    CaseChild child;
    child.sequent = base;
    const Formula head = substitute(prod.conclusion, rename);
    for (size_t j = 0; j < principal.args.size(); ++j) {
      child.sequent = child.sequent.with_ante(
          Formula::equality(principal.args[j], head.args[j]));
    }
    for (const Formula& asm_f : prod.assumptions) {
      Formula inst = substitute(asm_f, rename);
      child.sequent = child.sequent.with_ante(inst);
      if (system.is_inductive_atom(inst)) child.descendants.push_back(inst);
    }
    out.push_back(std::move(child));
  }
  return out;
}

RuleCheck check_rule_instance(const InductiveSystem& system, const Node& node,
                              const std::vector<Sequent>& children) {
  const Sequent& seq = node.sequent;
  switch (node.rule.kind()) {
    case RuleKind::Axiom: {
      if (!children.empty()) return RuleCheck::fail("WrongChildCount", wrong_children(0, children.size()));
      for (const auto& f : seq.ante) {
        if (contains_formula(seq.succ, f)) return RuleCheck::pass();
      }
      return RuleCheck::fail("SideConditionFailed",
                             "axiom needs a formula on both sides of the sequent");
    }
    case RuleKind::Weak: {
      if (children.size() != 1) return RuleCheck::fail("WrongChildCount", wrong_children(1, children.size()));
      if (!formula_subset(children[0].ante, seq.ante) ||
          !formula_subset(children[0].succ, seq.succ)) {
        return RuleCheck::fail("SideConditionFailed",
                               "weakening premise must be a sub-sequent of the conclusion");
      }
      return RuleCheck::pass();
    }
    case RuleKind::Cut: {
      if (children.size() != 2) return RuleCheck::fail("WrongChildCount", wrong_children(2, children.size()));
      const Formula& phi = node.rule.as<CutArgs>().formula;
      Sequent left = seq.with_succ(phi);
      Sequent right = seq.with_ante(phi);
      if (!seq_eq(children[0], left)) {
        return RuleCheck::fail("TemplateMismatch",
                               "first cut premise should be '" + left.render() + "'");
      }
      if (!seq_eq(children[1], right)) {
        return RuleCheck::fail("TemplateMismatch",
                               "second cut premise should be '" + right.render() + "'");
      }
      return RuleCheck::pass();
    }
    case RuleKind::Subst: {
      if (children.size() != 1) return RuleCheck::fail("WrongChildCount", wrong_children(1, children.size()));
      Sequent expected = substitute(children[0], node.rule.as<SubstArgs>().theta);
      if (!seq_eq(expected, seq)) {
        return RuleCheck::fail("TemplateMismatch",
                               "substituted premise yields '" + expected.render() +
                               "', conclusion is '" + seq.render() + "'");
      }
      return RuleCheck::pass();
    }
    case RuleKind::EqLa: {
      if (children.size() != 1) return RuleCheck::fail("WrongChildCount", wrong_children(1, children.size()));
      const auto& a = node.rule.as<EqLaArgs>();
      if (a.x == a.y) {
        return RuleCheck::fail("SideConditionFailed",
                               "equality-left witness variables must be distinct");
      }
      Substitution to_conc{{a.x, a.t}, {a.y, a.u}};
      Substitution to_prem{{a.x, a.u}, {a.y, a.t}};
      const Formula principal = Formula::equality(a.t, a.u);
      Sequent conc, prem;
      for (const auto& f : a.ante_template) {
        conc = conc.with_ante(substitute(f, to_conc));
        prem = prem.with_ante(substitute(f, to_prem));
      }
      conc = conc.with_ante(principal);
      prem = prem.with_ante(principal);
      for (const auto& f : a.succ_template) {
        conc = conc.with_succ(substitute(f, to_conc));
        prem = prem.with_succ(substitute(f, to_prem));
      }
      if (!seq_eq(conc, seq)) {
        return RuleCheck::fail("TemplateMismatch",
                               "witness template instantiates conclusion to '" +
                               conc.render() + "', node has '" + seq.render() + "'");
      }
      if (!seq_eq(prem, children[0])) {
        return RuleCheck::fail("TemplateMismatch",
                               "witness template instantiates premise to '" +
                               prem.render() + "', child has '" + children[0].render() + "'");
      }
      return RuleCheck::pass();
    }
    case RuleKind::EqR: {
      if (!children.empty()) return RuleCheck::fail("WrongChildCount", wrong_children(0, children.size()));
      for (const auto& f : seq.succ) {
        if (f.kind == Formula::Kind::Equality && f.lhs() == f.rhs()) return RuleCheck::pass();
      }
      return RuleCheck::fail("SideConditionFailed",
                             "reflexivity needs some 't = t' in the succedent");
    }
    case RuleKind::UnfoldRight: {
      const auto& a = node.rule.as<UnfoldRightArgs>();
      if (!system.signature.inductive_arity(a.pred)) {
        return RuleCheck::fail("SideConditionFailed", "'" + a.pred + "' is not an inductive predicate");
      }
      const auto& productions = system.productions_of(a.pred);
      if (a.production < 0 || static_cast<size_t>(a.production) >= productions.size()) {
        return RuleCheck::fail("SideConditionFailed",
                               "production index " + std::to_string(a.production) + " out of range");
      }
      if (a.principal.kind != Formula::Kind::Atom || a.principal.pred != a.pred) {
        return RuleCheck::fail("SideConditionFailed",
                               "principal '" + a.principal.text() + "' is not a '" + a.pred + "' atom");
      }
      if (!contains_formula(seq.succ, a.principal)) {
        return RuleCheck::fail("PrincipalMissing",
                               "'" + a.principal.text() + "' not in the succedent");
      }
      const Production& prod = productions[a.production];
      if (substitute(prod.conclusion, a.inst) != a.principal) {
        return RuleCheck::fail("TemplateMismatch",
                               "production conclusion instantiates to '" +
                               substitute(prod.conclusion, a.inst).text() +
                               "', principal is '" + a.principal.text() + "'");
      }
      if (children.size() != prod.assumptions.size()) {
        return RuleCheck::fail("WrongChildCount",
                               wrong_children(prod.assumptions.size(), children.size()));
      }
      Sequent base = seq.without_succ(a.principal);
      for (size_t i = 0; i < children.size(); ++i) {
        Sequent expected = base.with_succ(substitute(prod.assumptions[i], a.inst));
        if (!seq_eq(children[i], expected)) {
          return RuleCheck::fail("TemplateMismatch",
                                 "premise " + std::to_string(i) + " should be '" +
                                 expected.render() + "'");
        }
      }
      return RuleCheck::pass();
    }
    case RuleKind::Case: {
      const auto& a = node.rule.as<CaseArgs>();
      if (!system.signature.inductive_arity(a.pred)) {
        return RuleCheck::fail("SideConditionFailed", "'" + a.pred + "' is not an inductive predicate");
      }
      if (a.principal.kind != Formula::Kind::Atom || a.principal.pred != a.pred) {
        return RuleCheck::fail("SideConditionFailed",
                               "principal '" + a.principal.text() + "' is not a '" + a.pred + "' atom");
      }
      if (!contains_formula(seq.ante, a.principal)) {
        return RuleCheck::fail("PrincipalMissing",
                               "'" + a.principal.text() + "' not in the antecedent");
      }
      const auto& productions = system.productions_of(a.pred);
      if (a.fresh.size() != productions.size()) {
        return RuleCheck::fail("SideConditionFailed",
                               "need fresh variables for all " +
                               std::to_string(productions.size()) + " productions");
      }
      std::set<std::string> avoid = free_vars(seq);
      for (size_t k = 0; k < productions.size(); ++k) {
        if (a.fresh[k].size() != productions[k].variables().size()) {
          return RuleCheck::fail("SideConditionFailed",
                                 "production " + std::to_string(k) + " needs " +
                                 std::to_string(productions[k].variables().size()) +
                                 " fresh variables");
        }
        std::set<std::string> seen;
        for (const auto& v : a.fresh[k]) {
          if (!seen.insert(v).second) {
            return RuleCheck::fail("FreshnessViolation",
                                   "fresh variable '" + v + "' repeated in one case");
          }
          if (avoid.count(v)) {
            return RuleCheck::fail("FreshnessViolation",
                                   "fresh variable '" + v + "' occurs in the conclusion");
          }
        }
      }
      std::vector<CaseChild> cases = case_distinctions(system, seq, a.principal, a.fresh);
      if (children.size() != cases.size()) {
        return RuleCheck::fail("WrongChildCount", wrong_children(cases.size(), children.size()));
      }
      for (size_t k = 0; k < cases.size(); ++k) {
        if (!seq_eq(children[k], cases[k].sequent)) {
          return RuleCheck::fail("TemplateMismatch",
                                 "case " + std::to_string(k) + " should be '" +
                                 cases[k].sequent.render() + "', child has '" +
                                 children[k].render() + "'");
        }
      }
      return RuleCheck::pass();
    }
    case RuleKind::Bud: {
      if (!children.empty()) return RuleCheck::fail("WrongChildCount", wrong_children(0, children.size()));
      return RuleCheck::pass();
    }
  }
  return RuleCheck::fail("SideConditionFailed", "unknown rule");
}

// --------------------------------------------------------------- validity

std::string ValidityReport::render() const {
  std::ostringstream out;
  out << "valid: " << (valid ? "yes" : "no") << "\n";
  out << "cut-free: " << (cut_free ? "yes" : "no") << "\n";
  out << "cycle-normal: " << (cycle_normal ? "yes" : "no") << "\n";
  for (const auto& issue : issues) {
    out << "  [" << issue.code << "] at '" << render_address(issue.address)
        << "': " << issue.detail << "\n";
  }
  return out.str();
}

ValidityReport check_pre_proof(const InductiveSystem& system, const PreProof& p) {
  ValidityReport report;
  auto add = [&](const NodeAddress& a, std::string code, std::string detail) {
    report.issues.push_back({a, std::move(code), std::move(detail)});
  };

  if (p.tree.nodes.empty() || !p.tree.contains({})) {
    add({}, "MissingRoot", "derivation tree must contain the root node");
    report.valid = false;
    return report;
  }

  for (const auto& [addr, node] : p.tree.nodes) {
    if (!addr.empty()) {
      NodeAddress parent(addr.begin(), addr.end() - 1);
      if (!p.tree.contains(parent)) {
        add(addr, "OrphanAddress", "parent node is missing");
        continue;
      }
      if (addr.back() > 0) {
        NodeAddress sibling = addr;
        sibling.back() -= 1;
        if (!p.tree.contains(sibling)) {
          add(addr, "NonContiguousChildren", "child indices must be contiguous from 0");
        }
      }
    }
    for (const auto& f : node.sequent.ante) {
      std::string problem = validate_formula(system, f);
      if (!problem.empty()) add(addr, "IllFormedFormula", problem);
    }
    for (const auto& f : node.sequent.succ) {
      std::string problem = validate_formula(system, f);
      if (!problem.empty()) add(addr, "IllFormedFormula", problem);
    }
  }

  for (const auto& [addr, node] : p.tree.nodes) {
    const bool declared_bud = node.rule.kind() == RuleKind::Bud;
    const bool mapped_bud = p.companions.count(addr) > 0;
    if (declared_bud != mapped_bud) {
      add(addr, mapped_bud ? "UnexpectedCompanion" : "MissingCompanion",
          mapped_bud ? "companion registered for a non-bud node"
                     : "bud has no registered companion");
      continue;
    }
    int n = p.tree.child_count(addr);
    if (declared_bud) {
      if (n != 0) {
        add(addr, "BudNotLeaf", "buds must be leaves");
        continue;
      }
      const NodeAddress& comp = p.companions.at(addr);
      if (!p.tree.contains(comp)) {
        add(addr, "DanglingCompanion", "companion address '" + render_address(comp) + "' not in tree");
        continue;
      }
      if (p.is_bud(comp)) {
        add(addr, "CompanionIsBud", "companion must be an inner node");
        continue;
      }
      if (!seq_eq(p.tree.at(comp).sequent, node.sequent)) {
        add(addr, "CompanionMismatch",
            "companion sequent '" + p.tree.at(comp).sequent.render() +
            "' differs from bud sequent '" + node.sequent.render() + "'");
      }
      continue;
    }
    std::vector<Sequent> children;
    for (int i = 0; i < n; ++i) {
      NodeAddress child = addr;
      child.push_back(i);
      children.push_back(p.tree.at(child).sequent);
    }
    RuleCheck check = check_rule_instance(system, node, children);
    if (!check.ok) add(addr, check.code, check.detail);
    if (node.rule.kind() == RuleKind::Cut) report.cut_free = false;
  }

  for (const auto& [bud, comp] : p.companions) {
    if (p.tree.contains(bud) && p.tree.contains(comp) &&
        !is_strict_prefix(comp, bud)) {
      report.cycle_normal = false;
    }
    if (!p.tree.contains(bud)) {
      add(bud, "DanglingBud", "companion map mentions an address outside the tree");
    }
  }

  report.valid = report.issues.empty();
  return report;
}

std::vector<Issue> fragment_shape_violations(const InductiveSystem& system,
                                             const PreProof& p) {
  const Fragment frag = require_fragment(system);
  std::vector<Issue> out;
  auto linear_with_frag_fn = [&](const Term& t) {
    auto lin = atom_and_depth(t);
    return lin && (lin->depth == 0 || lin->fn == frag.fn);
  };
  for (const auto& [addr, node] : p.tree.nodes) {
    for (const auto& f : node.sequent.ante) {
      if (f.kind == Formula::Kind::Equality) {
        if (!linear_with_frag_fn(f.lhs()) || !linear_with_frag_fn(f.rhs())) {
          out.push_back({addr, "OutsideFragment",
                         "non-linear equality '" + f.text() + "' in antecedent"});
        }
      } else if (f.pred == frag.tef && f.args.size() == 1 && linear_with_frag_fn(f.args[0])) {
        // fine
      } else {
        out.push_back({addr, "OutsideFragment",
                       "antecedent formula '" + f.text() + "' outside the fragment"});
      }
    }
    for (const auto& f : node.sequent.succ) {
      if (f.kind == Formula::Kind::Atom && f.pred == frag.fst && f.args.size() == 1 &&
          linear_with_frag_fn(f.args[0])) {
        continue;
      }
      out.push_back({addr, "OutsideFragment",
                     "succedent formula '" + f.text() + "' outside the fragment"});
    }
    switch (node.rule.kind()) {
      case RuleKind::Weak:
      case RuleKind::Subst:
      case RuleKind::EqLa:
      case RuleKind::Bud:
        break;
      case RuleKind::UnfoldRight:
        if (node.rule.as<UnfoldRightArgs>().pred != frag.fst) {
          out.push_back({addr, "OutsideFragment",
                         "only '" + frag.fst + "' may be unfolded on the right"});
        }
        break;
      case RuleKind::Case:
        if (node.rule.as<CaseArgs>().pred != frag.tef) {
          out.push_back({addr, "OutsideFragment",
                         "only '" + frag.tef + "' admits case analysis here"});
        }
        break;
      default:
        out.push_back({addr, "OutsideFragment",
                       "rule '" + node.rule.name() + "' outside the fragment"});
    }
  }
  return out;
}

// -------------------------------------------------------------- unfolding

std::optional<NodeAddress> try_resolve_unfolding(const PreProof& p,
                                                 const NodeAddress& a) {
  NodeAddress cur = a;
  size_t budget = a.size() + 2 * p.companions.size() + 8;
  for (size_t iter = 0; iter <= budget; ++iter) {
    if (p.tree.contains(cur)) {
      if (!p.is_bud(cur)) return cur;
      cur = p.companions.at(cur);
      continue;
    }
    // Find the deepest tree prefix of cur; if it is a bud, splice in the
    // companion and keep going, otherwise the address is outside the
    // unfolding.
    size_t depth = 0;
    while (depth < cur.size()) {
      NodeAddress prefix(cur.begin(), cur.begin() + depth + 1);
      if (!p.tree.contains(prefix)) break;
      ++depth;
    }
    NodeAddress prefix(cur.begin(), cur.begin() + depth);
    if (!p.tree.contains(prefix) || !p.is_bud(prefix)) return std::nullopt;
    NodeAddress next = p.companions.at(prefix);
    next.insert(next.end(), cur.begin() + depth, cur.end());
    cur = std::move(next);
  }
  throw Unresolvable("unfolding resolution did not terminate for '" +
                     render_address(a) + "'");
}

NodeAddress resolve_unfolding(const PreProof& p, const NodeAddress& a) {
  auto r = try_resolve_unfolding(p, a);
  if (!r) {
    throw Unresolvable("address '" + render_address(a) +
                       "' is outside the unfolding");
  }
  return *r;
}

std::optional<NodeAddress> resolved_child(const PreProof& p,
                                          const NodeAddress& a, int i) {
  NodeAddress child = a;
  child.push_back(i);
  if (!p.tree.contains(child)) return std::nullopt;
  return try_resolve_unfolding(p, child);
}

namespace {

// Memoized on (inner pair, remaining depth): the unfoldings are generated by
// finitely many inner-node pairs, so without the cache a cyclic pair whose
// branches both loop would be re-compared exponentially often.
using EqualMemo = std::map<std::tuple<NodeAddress, NodeAddress, int>, bool>;

bool unfoldings_equal_rec(const PreProof& p1, const NodeAddress& a1,
                          const PreProof& p2, const NodeAddress& a2,
                          int depth, EqualMemo& memo) {
  auto key = std::make_tuple(a1, a2, depth);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  bool& result = memo[key];
  result = true;
  const Node& n1 = p1.tree.at(a1);
  const Node& n2 = p2.tree.at(a2);
  if (!seq_eq(n1.sequent, n2.sequent)) return result = false;
  if (n1.rule.name() != n2.rule.name()) return result = false;
  if (depth == 0) return true;
  int c1 = p1.tree.child_count(a1);
  int c2 = p2.tree.child_count(a2);
  if (c1 != c2) return result = false;
  for (int i = 0; i < c1; ++i) {
    auto r1 = resolved_child(p1, a1, i);
    auto r2 = resolved_child(p2, a2, i);
    if (!r1 || !r2) return result = false;
    if (!unfoldings_equal_rec(p1, *r1, p2, *r2, depth - 1, memo)) {
      return result = false;
    }
  }
  return true;
}

}  // namespace

bool unfoldings_equal_to_depth(const PreProof& p1, const PreProof& p2, int depth) {
  NodeAddress r1 = resolve_unfolding(p1, {});
  NodeAddress r2 = resolve_unfolding(p2, {});
  EqualMemo memo;
  return unfoldings_equal_rec(p1, r1, p2, r2, depth, memo);
}

}  // namespace cyclo
