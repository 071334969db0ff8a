// Shared test infrastructure: deterministic random generators for terms,
// equality sets, substitutions and structurally valid pre-proofs, plus the
// randomized suites that both the per-module tests and the acceptance
// binary run (with different case counts).
#ifndef CYCLO_TESTS_SUPPORT_HPP_
#define CYCLO_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cyclo/analysis.hpp"
#include "cyclo/congruence.hpp"
#include "cyclo/fixtures.hpp"
#include "cyclo/proofgraph.hpp"
#include "cyclo/syntax.hpp"
#include "cyclo/trace.hpp"

namespace cyclo::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(CYCLO_FIXTURE_DIR) + "/" + name;
}

// ------------------------------------------------------------ term helpers

inline Term ts() { return Term::app("s"); }
inline Term te() { return Term::app("e"); }
inline Term tv(const std::string& n) { return Term::var(n); }
inline Term nx(Term t) { return Term::app("nx", {std::move(t)}); }
inline Term nxn(int k, Term t) { return linear_term("nx", k, t); }
inline Formula tef(Term t) { return Formula::atom("TeF", {std::move(t)}); }
inline Formula fst(Term t) { return Formula::atom("FsT", {std::move(t)}); }
inline Formula eq(Term a, Term b) {
  return Formula::equality(std::move(a), std::move(b));
}

// --------------------------------------------------------------- generator

class Gen {
 public:
  explicit Gen(unsigned seed) : eng_(seed) {}

  int below(int n) {  // uniform in [0, n)
    return n <= 1 ? 0 : static_cast<int>(eng_() % static_cast<unsigned>(n));
  }
  bool chance(int percent) { return below(100) < percent; }

  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<size_t>(below(static_cast<int>(xs.size())))];
  }

 private:
  std::mt19937 eng_;
};

inline const std::vector<std::string>& default_var_pool() {
  static const std::vector<std::string> pool{"x", "y", "z", "w"};
  return pool;
}

// A random linear term nx^k(atom) with k <= max_depth; atoms are the two
// constants plus the given variables.
inline Term random_linear_term(Gen& g, const std::vector<std::string>& vars,
                               int max_depth) {
  int atom_choices = 2 + static_cast<int>(vars.size());
  int c = g.below(atom_choices);
  Term atom = c == 0 ? ts() : c == 1 ? te() : tv(vars[static_cast<size_t>(c - 2)]);
  return nxn(g.below(max_depth + 1), std::move(atom));
}

inline std::vector<Formula> random_gamma(Gen& g, int max_eqs, int max_depth,
                                         const std::vector<std::string>& vars) {
  std::vector<Formula> out;
  int n = g.below(max_eqs + 1);
  for (int i = 0; i < n; ++i) {
    out.push_back(eq(random_linear_term(g, vars, max_depth),
                     random_linear_term(g, vars, max_depth)));
  }
  return sorted_unique(std::move(out));
}

inline Substitution random_subst(Gen& g, const std::vector<std::string>& vars,
                                 int max_depth) {
  Substitution theta;
  for (const auto& v : vars) {
    if (g.chance(50)) theta[v] = random_linear_term(g, vars, max_depth);
  }
  return theta;
}

// A term guaranteed related to `t` in the congruence of `gamma`: lift t by a
// few nx prefixes, walk whole-term rewrite steps by shifted gamma equalities,
// then strip a few prefixes. Every step stays inside the congruence, so
// related(t, result) holds by construction.
inline Term related_partner(Gen& g, const std::vector<Formula>& gamma,
                            const Term& t, int depth_cap) {
  Term cur = nxn(g.below(3), t);
  for (int step = 0, steps = g.below(4); step < steps; ++step) {
    std::vector<Term> candidates;
    for (const Formula& f : gamma) {
      if (!f.is_equality()) continue;
      for (int dir = 0; dir < 2; ++dir) {
        const Term& from = dir ? f.rhs() : f.lhs();
        const Term& to = dir ? f.lhs() : f.rhs();
        // cur == nx^k(from) for some k?
        const Term* probe = &cur;
        for (int k = 0;; ++k) {
          if (*probe == from) {
            Term rewritten = nxn(k, to);
            auto lin = atom_and_depth(rewritten);
            if (lin && lin->depth <= depth_cap) candidates.push_back(rewritten);
            break;
          }
          if (probe->is_var() || probe->args.size() != 1) break;
          probe = &probe->args[0];
        }
      }
    }
    if (candidates.empty()) break;
    cur = g.pick(candidates);
  }
  auto lin = atom_and_depth(cur);
  int strip = std::min(g.below(3), lin ? lin->depth : 0);
  if (lin && strip > 0) {
    return nxn(lin->depth - strip,
               lin->atom_is_var ? tv(lin->atom) : Term::app(lin->atom));
  }
  return cur;
}

// -------------------------------------------------------- random pre-proofs

struct ProofGenOptions {
  int max_nodes = 12;
  bool allow_buds = true;
  bool allow_nonancestor_buds = false;
};

// Builds a structurally valid pre-proof over the TeF/FsT system by forward
// rule construction. Every generated sequent keeps one pivot formula on both
// sides, so Axiom is always available as a closure; cycles are formed by
// identity-weakening gadgets (never progressing) and by case-analysis
// gadgets on a variable TeF atom (always progressing), giving the global
// trace condition both outcomes on this distribution.
class RandomProofBuilder {
 public:
  RandomProofBuilder(const InductiveSystem& sys, Gen& g, ProofGenOptions opt)
      : sys_(sys), g_(g), opt_(opt) {}

  PreProof build() {
    pivot_ = g_.pick(std::vector<Formula>{fst(te()), fst(ts()), fst(nx(ts()))});
    Sequent root;
    root = root.with_ante(pivot_).with_succ(pivot_);
    if (g_.chance(60)) root = root.with_ante(tef(tv("u0")));
    if (g_.chance(40)) root = root.with_ante(tef(nxn(g_.below(2), ts())));
    if (g_.chance(40)) {
      root = root.with_ante(eq(random_linear_term(g_, {"x"}, 2),
                               random_linear_term(g_, {"x"}, 2)));
    }
    if (g_.chance(30)) root = root.with_succ(fst(nxn(1 + g_.below(2), te())));

    open_.push_back({{}, root});
    while (!open_.empty()) {
      OpenLeaf leaf = open_.back();
      open_.pop_back();
      expand(leaf);
    }
    return out_;
  }

 private:
  struct OpenLeaf {
    NodeAddress addr;
    Sequent seq;
  };

  // Nodes still spendable beyond the leaf being expanded: every pending leaf
  // (including the current one) will place at least one node.
  int remaining() const {
    return opt_.max_nodes - static_cast<int>(out_.tree.nodes.size()) -
           static_cast<int>(open_.size()) - 1;
  }

  void place(const NodeAddress& addr, const Sequent& seq, RuleApplication rule,
             int children) {
    out_.tree.nodes[addr] = Node{seq, std::move(rule)};
    if (children > 0) inner_by_sequent_[seq.render()].push_back(addr);
  }

  void push_child(const NodeAddress& parent, int i, Sequent seq) {
    NodeAddress child = parent;
    child.push_back(i);
    open_.push_back({std::move(child), std::move(seq)});
  }

  std::string fresh_var() { return "g" + std::to_string(fresh_counter_++); }

  // The closers; Axiom is always applicable thanks to the pivot.
  void close(const OpenLeaf& leaf) {
    for (const Formula& f : leaf.seq.succ) {
      if (!g_.chance(50)) continue;
      if (f == fst(ts())) {
        place(leaf.addr, leaf.seq, make_unfold_right("FsT", 0, f, {}), 0);
        return;
      }
      if (f == tef(te())) {
        place(leaf.addr, leaf.seq, make_unfold_right("TeF", 0, f, {}), 0);
        return;
      }
    }
    place(leaf.addr, leaf.seq, make_axiom(), 0);
  }

  void place_bud(const NodeAddress& addr, const Sequent& seq,
                 const NodeAddress& companion) {
    place(addr, seq, make_bud(), 0);
    out_.companions[addr] = companion;
  }

  // Case on a variable TeF atom whose variable occurs nowhere else: the right
  // branch weakens the case equality away and substitutes back to the
  // conclusion sequent, closing with a bud on the case node. The trace
  // through this cycle progresses at the case step.
  bool try_progress_gadget(const OpenLeaf& leaf) {
    if (!opt_.allow_buds || remaining() < 4) return false;
    std::optional<Formula> principal;
    for (const Formula& f : leaf.seq.ante) {
      if (f.pred != "TeF" || f.args.size() != 1 || !f.args[0].is_var()) continue;
      Sequent rest = leaf.seq.without_ante(f);
      if (free_vars(rest).count(f.args[0].name) == 0) {
        principal = f;
        break;
      }
    }
    if (!principal) return false;
    const std::string v = principal->args[0].name;
    const std::string c = fresh_var();
    auto cases = case_distinctions(sys_, leaf.seq, *principal, {{}, {c}});
    Formula case_eq = eq(tv(v), tv(c));
    if (!cases[1].sequent.ante_contains(case_eq)) return false;

    place(leaf.addr, leaf.seq, make_case("TeF", *principal, {{}, {c}}), 2);
    NodeAddress left = leaf.addr;
    left.push_back(0);
    place(left, cases[0].sequent, make_axiom(), 0);

    NodeAddress right = leaf.addr;
    right.push_back(1);
    Sequent weakened = cases[1].sequent.without_ante(case_eq);
    place(right, cases[1].sequent, make_weak(), 1);
    NodeAddress subst_at = right;
    subst_at.push_back(0);
    place(subst_at, weakened, make_subst({{v, nx(tv(c))}}), 1);
    NodeAddress bud_at = subst_at;
    bud_at.push_back(0);
    place_bud(bud_at, leaf.seq, leaf.addr);
    return true;
  }

  void expand(const OpenLeaf& leaf) {
    // Bud on an equal-sequent strict ancestor.
    if (opt_.allow_buds) {
      std::vector<NodeAddress> ancestors;
      for (size_t len = 0; len < leaf.addr.size(); ++len) {
        NodeAddress prefix(leaf.addr.begin(), leaf.addr.begin() + len);
        if (out_.tree.at(prefix).sequent == leaf.seq) ancestors.push_back(prefix);
      }
      if (!ancestors.empty() && g_.chance(50)) {
        place_bud(leaf.addr, leaf.seq, g_.pick(ancestors));
        return;
      }
    }
    // Bud on any equal-sequent inner node (possibly a non-ancestor).
    if (opt_.allow_nonancestor_buds && g_.chance(25)) {
      auto it = inner_by_sequent_.find(leaf.seq.render());
      if (it != inner_by_sequent_.end() && !it->second.empty()) {
        place_bud(leaf.addr, leaf.seq, g_.pick(it->second));
        return;
      }
    }
    if (remaining() <= 0 || g_.chance(18)) {
      close(leaf);
      return;
    }
    if (g_.chance(30) && try_progress_gadget(leaf)) return;

    // Identity-weakening cycle: never progressing.
    if (opt_.allow_buds && remaining() >= 1 && g_.chance(12)) {
      place(leaf.addr, leaf.seq, make_weak(), 1);
      NodeAddress child = leaf.addr;
      child.push_back(0);
      place_bud(child, leaf.seq, leaf.addr);
      return;
    }

    enum class Move { WeakDrop, Cut, SubstId, SubstRename, CaseStep, Unfold, EqLa };
    std::vector<Move> moves{Move::SubstId};
    std::vector<Formula> droppable;
    for (const Formula& f : leaf.seq.ante)
      if (f != pivot_) droppable.push_back(f);
    for (const Formula& f : leaf.seq.succ)
      if (f != pivot_) droppable.push_back(f);
    if (!droppable.empty()) moves.push_back(Move::WeakDrop);
    if (remaining() >= 2) moves.push_back(Move::Cut);
    if (!free_vars(leaf.seq).empty()) moves.push_back(Move::SubstRename);
    // Case must not consume the pivot: its children drop the principal from
    // the antecedent, which would break the closure invariant.
    std::vector<Formula> case_atoms;
    for (const Formula& f : leaf.seq.ante)
      if (sys_.is_inductive_atom(f) && f != pivot_) case_atoms.push_back(f);
    if (!case_atoms.empty() && remaining() >= 2) moves.push_back(Move::CaseStep);
    std::vector<std::pair<Formula, std::pair<int, Substitution>>> unfolds;
    for (const Formula& f : leaf.seq.succ) {
      if (!sys_.is_inductive_atom(f) || f == pivot_) continue;
      const auto& prods = sys_.productions_of(f.pred);
      for (size_t k = 0; k < prods.size(); ++k) {
        Substitution inst;
        if (match_linear(prods[k].conclusion.args[0], f.args[0], inst)) {
          unfolds.push_back({f, {static_cast<int>(k), inst}});
        }
      }
    }
    if (!unfolds.empty()) moves.push_back(Move::Unfold);
    std::vector<Formula> equalities;
    for (const Formula& f : leaf.seq.ante)
      if (f.is_equality()) equalities.push_back(f);
    if (!equalities.empty()) moves.push_back(Move::EqLa);

    switch (g_.pick(moves)) {
      case Move::WeakDrop: {
        Sequent child = leaf.seq;
        bool dropped = false;
        for (const Formula& f : droppable) {
          if (!g_.chance(50)) continue;
          dropped = true;
          if (child.ante_contains(f)) child = child.without_ante(f);
          if (child.succ_contains(f)) child = child.without_succ(f);
        }
        if (!dropped) {
          const Formula& f = g_.pick(droppable);
          if (child.ante_contains(f)) child = child.without_ante(f);
          if (child.succ_contains(f)) child = child.without_succ(f);
        }
        place(leaf.addr, leaf.seq, make_weak(), 1);
        push_child(leaf.addr, 0, child);
        return;
      }
      case Move::Cut: {
        Formula f = random_cut_formula();
        place(leaf.addr, leaf.seq, make_cut(f), 2);
        push_child(leaf.addr, 1, leaf.seq.with_ante(f));
        push_child(leaf.addr, 0, leaf.seq.with_succ(f));
        return;
      }
      case Move::SubstId: {
        place(leaf.addr, leaf.seq, make_subst({}), 1);
        push_child(leaf.addr, 0, leaf.seq);
        return;
      }
      case Move::SubstRename: {
        std::set<std::string> fv = free_vars(leaf.seq);
        std::vector<std::string> fvs(fv.begin(), fv.end());
        const std::string& x = g_.pick(fvs);
        std::string z = "r" + std::to_string(fresh_counter_++);
        Sequent premise = substitute(leaf.seq, {{x, tv(z)}});
        place(leaf.addr, leaf.seq, make_subst({{z, tv(x)}}), 1);
        push_child(leaf.addr, 0, premise);
        return;
      }
      case Move::CaseStep: {
        const Formula& principal = g_.pick(case_atoms);
        const auto& prods = sys_.productions_of(principal.pred);
        std::vector<std::vector<std::string>> fresh;
        for (const auto& prod : prods) {
          std::vector<std::string> names;
          for (size_t i = 0; i < prod.variables().size(); ++i)
            names.push_back(fresh_var());
          fresh.push_back(std::move(names));
        }
        auto cases = case_distinctions(sys_, leaf.seq, principal, fresh);
        if (remaining() < static_cast<int>(cases.size())) {
          close(leaf);
          return;
        }
        place(leaf.addr, leaf.seq, make_case(principal.pred, principal, fresh),
              static_cast<int>(cases.size()));
        for (int i = static_cast<int>(cases.size()) - 1; i >= 0; --i) {
          push_child(leaf.addr, i, cases[static_cast<size_t>(i)].sequent);
        }
        return;
      }
      case Move::Unfold: {
        const auto& [principal, prod_inst] = g_.pick(unfolds);
        const auto& [prod_index, inst] = prod_inst;
        const Production& prod =
            sys_.productions_of(principal.pred)[static_cast<size_t>(prod_index)];
        if (remaining() < static_cast<int>(prod.assumptions.size())) {
          close(leaf);
          return;
        }
        place(leaf.addr, leaf.seq,
              make_unfold_right(principal.pred, prod_index, principal, inst),
              static_cast<int>(prod.assumptions.size()));
        Sequent base = leaf.seq.without_succ(principal);
        for (int i = static_cast<int>(prod.assumptions.size()) - 1; i >= 0; --i) {
          push_child(leaf.addr, i,
                     base.with_succ(substitute(
                         prod.assumptions[static_cast<size_t>(i)], inst)));
        }
        return;
      }
      case Move::EqLa: {
        const Formula& principal = g_.pick(equalities);
        std::vector<Formula> ante_template;
        for (const Formula& f : leaf.seq.ante)
          if (f != principal) ante_template.push_back(f);
        // Identity instance: the witness variables occur in no template, so
        // the premise equals the conclusion.
        place(leaf.addr, leaf.seq,
              make_eqla("va", "vb", principal.lhs(), principal.rhs(),
                        ante_template, leaf.seq.succ),
              1);
        push_child(leaf.addr, 0, leaf.seq);
        return;
      }
    }
  }

  Formula random_cut_formula() {
    switch (g_.below(3)) {
      case 0:
        return tef(random_linear_term(g_, {"x", "y"}, 2));
      case 1:
        return fst(random_linear_term(g_, {"x", "y"}, 2));
      default:
        return eq(random_linear_term(g_, {"x"}, 2),
                  random_linear_term(g_, {"x"}, 2));
    }
  }

  // Matches a linear production-conclusion argument against a concrete
  // argument, producing the variable instantiation.
  static bool match_linear(const Term& pattern, const Term& value,
                           Substitution& inst) {
    if (pattern.is_var()) {
      inst[pattern.name] = value;
      return true;
    }
    if (value.is_var() || value.name != pattern.name ||
        value.args.size() != pattern.args.size()) {
      return false;
    }
    for (size_t i = 0; i < pattern.args.size(); ++i) {
      if (!match_linear(pattern.args[i], value.args[i], inst)) return false;
    }
    return true;
  }

  const InductiveSystem& sys_;
  Gen& g_;
  ProofGenOptions opt_;
  PreProof out_;
  Formula pivot_;
  int fresh_counter_ = 0;
  std::map<std::string, std::vector<NodeAddress>> inner_by_sequent_;
  std::vector<OpenLeaf> open_;
};

inline PreProof random_pre_proof(const InductiveSystem& sys, Gen& g,
                                 const ProofGenOptions& opt) {
  return RandomProofBuilder(sys, g, opt).build();
}

// -------------------------------------------- counterexample trace fixture

struct PathAndTrace {
  std::vector<NodeAddress> path;
  std::vector<Formula> trace;
};

// The underlined trace of the shipped counterexample proof: the cycle from
// the inner case node down to its bud, repeated `laps` times through the
// unfolding. Each node on the cycle carries exactly one antecedent TeF atom,
// which is the traced formula.
inline PathAndTrace counterexample_cycle_trace(const InductiveSystem& sys,
                                               const PreProof& p, int laps) {
  PathAndTrace out;
  const NodeAddress companion = parse_address("1.1.0");
  const NodeAddress bud = parse_address("1.1.0.1.1.0.0");
  std::vector<int> rel(bud.begin() + static_cast<long>(companion.size()),
                       bud.end());

  NodeAddress cur = companion;
  out.path.push_back(cur);
  for (int lap = 0; lap < laps; ++lap) {
    for (int step : rel) {
      cur.push_back(step);
      out.path.push_back(cur);
    }
  }
  for (const NodeAddress& a : out.path) {
    const Sequent& seq = p.tree.at(resolve_unfolding(p, a)).sequent;
    std::optional<Formula> atom;
    for (const Formula& f : seq.ante) {
      if (sys.is_inductive_atom(f) && f.pred == "TeF") atom = f;
    }
    if (!atom) throw Error("cycle node without a TeF atom at '" + render_address(a) + "'");
    out.trace.push_back(*atom);
  }
  return out;
}

// ------------------------------------------------------------ lasso replay

// True when some trace returns to its own starting formula after k laps of
// `cycle` (k <= pumps) with a progress point on the way; repeating such a
// loop forever yields an infinitely progressing trace, so a correct FAIL
// lasso must make this false. (A progressing loop around a cycle of n trace
// formulas needs at most n laps; the suites pin pumps = 3 and keep the
// formula sets small.)
inline bool cycle_admits_progressing_trace(const InductiveSystem& sys,
                                           const PreProof& p,
                                           const std::vector<NodeAddress>& cycle,
                                           int pumps) {
  using Rel = std::map<std::pair<std::string, std::string>, bool>;
  auto compose = [](const Rel& a, const Rel& b) {
    std::map<std::string, std::vector<std::pair<std::string, bool>>> by_src;
    for (const auto& [k, prog] : b) by_src[k.first].push_back({k.second, prog});
    Rel out;
    for (const auto& [k, prog] : a) {
      auto it = by_src.find(k.second);
      if (it == by_src.end()) continue;
      for (const auto& [dst, prog2] : it->second) {
        bool& slot = out[{k.first, dst}];
        slot = slot || prog || prog2;
      }
    }
    return out;
  };

  Rel lap;
  bool first = true;
  for (size_t k = 0; k < cycle.size(); ++k) {
    const NodeAddress& at = cycle[k];
    const NodeAddress& to = cycle[(k + 1) % cycle.size()];
    int child_index = -1;
    for (int i = 0; i < p.tree.child_count(at); ++i) {
      auto r = resolved_child(p, at, i);
      if (r && *r == to) {
        child_index = i;
        break;
      }
    }
    if (child_index < 0) throw Error("lasso cycle step has no connecting edge");
    Rel step;
    for (const TracePair& pr : edge_trace_pairs(sys, p, at, child_index)) {
      bool& slot = step[{pr.from.render(), pr.to.render()}];
      slot = slot || pr.progress;
    }
    lap = first ? step : compose(lap, step);
    first = false;
  }

  Rel power = lap;
  for (int k = 1; k <= pumps; ++k) {
    for (const auto& [key, prog] : power) {
      if (key.first == key.second && prog) return true;
    }
    power = compose(power, lap);
  }
  return false;
}

// ------------------------------------------------------- trace enumeration

// All complete traces along `path` (unfolding addresses), each starting at
// some antecedent inductive atom of the first node and following the edge
// relation to the end of the path. Enumeration stops at `cap` traces.
inline std::vector<std::vector<Formula>> enumerate_traces(
    const InductiveSystem& sys, const PreProof& p,
    const std::vector<NodeAddress>& path, size_t cap = 4096) {
  std::vector<std::vector<Formula>> out;
  if (path.empty()) return out;
  std::vector<Formula> current;

  // Successor formulas per position, computed lazily from the edge pairs.
  std::function<void(size_t)> extend = [&](size_t k) {
    if (out.size() >= cap) return;
    if (k + 1 == path.size()) {
      out.push_back(current);
      return;
    }
    NodeAddress at = resolve_unfolding(p, path[k]);
    int child = path[k + 1].back();
    for (const TracePair& pr : edge_trace_pairs(sys, p, at, child)) {
      if (pr.from != current.back()) continue;
      current.push_back(pr.to);
      extend(k + 1);
      current.pop_back();
    }
  };

  const Sequent& first = p.tree.at(resolve_unfolding(p, path[0])).sequent;
  for (const Formula& f : first.ante) {
    if (!sys.is_inductive_atom(f)) continue;
    current = {f};
    extend(0);
  }
  return out;
}

// ------------------------------------------------------------- suite runs

struct SuiteResult {
  long cases = 0;
  long positives = 0;
  long failures = 0;
  std::string first_failure;

  void fail(const std::string& what) {
    ++failures;
    if (first_failure.empty()) first_failure = what;
  }
};

// equiv versus the independent rewrite-chain oracle (also the two directions
// of the strong-closure characterization: the oracle *is* the chain form).
inline SuiteResult run_equiv_oracle_suite(unsigned seed, long cases,
                                          int oracle_cap) {
  SuiteResult res;
  Gen g(seed);
  for (long i = 0; i < cases; ++i) {
    std::vector<Formula> gamma = random_gamma(g, 4, 3, default_var_pool());
    Term t = random_linear_term(g, default_var_pool(), 3);
    Term u = g.chance(50) ? related_partner(g, gamma, t, 3)
                          : random_linear_term(g, default_var_pool(), 3);
    ++res.cases;
    bool oracle = chain_oracle(gamma, t, u, oracle_cap);
    bool fast = false;
    try {
      fast = CongruenceIndex(gamma).equiv(t, u);
    } catch (const CapExceeded&) {
      res.fail("CapExceeded on gamma='" + Sequent(gamma, {}).render() +
               "', t=" + t.render() + ", u=" + u.render());
      continue;
    }
    if (oracle) ++res.positives;
    if (fast != oracle) {
      res.fail("equiv=" + std::to_string(fast) + " oracle=" +
               std::to_string(oracle) + " on gamma='" +
               Sequent(gamma, {}).render() + "', t=" + t.render() +
               ", u=" + u.render());
    }
  }
  return res;
}

// Relatedness is preserved by substitution.
inline SuiteResult run_subst_rel_suite(unsigned seed, long cases) {
  SuiteResult res;
  Gen g(seed);
  for (long i = 0; i < cases; ++i) {
    std::vector<Formula> gamma = random_gamma(g, 4, 3, default_var_pool());
    Term t1 = random_linear_term(g, default_var_pool(), 3);
    Term t2 = g.chance(60) ? related_partner(g, gamma, t1, 3)
                           : random_linear_term(g, default_var_pool(), 3);
    Substitution theta = random_subst(g, default_var_pool(), 2);
    ++res.cases;
    if (!CongruenceIndex(gamma).related(t1, t2)) continue;
    ++res.positives;
    std::vector<Formula> gamma_sub;
    for (const Formula& f : gamma) gamma_sub.push_back(substitute(f, theta));
    if (!CongruenceIndex(sorted_unique(gamma_sub))
             .related(substitute(t1, theta), substitute(t2, theta))) {
      res.fail("substitution broke relatedness on gamma='" +
               Sequent(gamma, {}).render() + "', t1=" + t1.render() +
               ", t2=" + t2.render());
    }
  }
  return res;
}

// Swapping the two sides of an antecedent equality preserves relatedness:
// with G1 = G[x:=u1, y:=u2] + (u1 = u2) and G2 = G[x:=u2, y:=u1] + (u1 = u2),
// terms are related under G2 after the swapped instantiation exactly when
// they are related under G1 after the direct one. Testing the equality of
// the two verdicts covers both directions of the implication.
inline SuiteResult run_eq_rel_suite(unsigned seed, long cases) {
  SuiteResult res;
  Gen g(seed);
  const std::vector<std::string> uvars{"z", "w"};
  for (long i = 0; i < cases; ++i) {
    std::vector<Formula> gamma = random_gamma(g, 3, 2, default_var_pool());
    Term u1 = random_linear_term(g, uvars, 2);
    Term u2 = random_linear_term(g, uvars, 2);
    Substitution direct{{"x", u1}, {"y", u2}};
    Substitution swapped{{"x", u2}, {"y", u1}};
    Term t1 = random_linear_term(g, default_var_pool(), 2);
    Term t2 = random_linear_term(g, default_var_pool(), 2);

    auto instantiate = [&](const Substitution& theta) {
      std::vector<Formula> out;
      for (const Formula& f : gamma) out.push_back(substitute(f, theta));
      out.push_back(eq(u1, u2));
      return sorted_unique(std::move(out));
    };
    ++res.cases;
    bool direct_related =
        CongruenceIndex(instantiate(direct))
            .related(substitute(t1, direct), substitute(t2, direct));
    bool swapped_related =
        CongruenceIndex(instantiate(swapped))
            .related(substitute(t1, swapped), substitute(t2, swapped));
    if (direct_related) ++res.positives;
    if (direct_related != swapped_related) {
      res.fail("swap changed relatedness on gamma='" +
               Sequent(gamma, {}).render() + "', u1=" + u1.render() +
               ", u2=" + u2.render() + ", t1=" + t1.render() +
               ", t2=" + t2.render());
    }
  }
  return res;
}

// Adding an equality whose right side's atom is globally fresh cannot relate
// previously unrelated terms.
inline SuiteResult run_right_asp_suite(unsigned seed, long cases) {
  SuiteResult res;
  Gen g(seed);
  const std::vector<std::string> pool{"x", "y", "z"};
  for (long i = 0; i < cases; ++i) {
    std::vector<Formula> gamma1 = random_gamma(g, 3, 3, pool);
    Term t = random_linear_term(g, pool, 3);
    Term t2 = g.chance(50) ? related_partner(g, gamma1, t, 3)
                           : random_linear_term(g, pool, 3);
    Term u = random_linear_term(g, pool, 3);
    Term u_fresh = nxn(g.below(3), tv("w"));  // atom w occurs nowhere else
    std::vector<Formula> gamma2 = gamma1;
    gamma2.push_back(eq(u, u_fresh));
    gamma2 = sorted_unique(std::move(gamma2));

    ++res.cases;
    CongruenceIndex idx1(gamma1);
    CongruenceIndex idx2(gamma2);
    bool before = idx1.related(t, t2);
    bool after = idx2.related(t, t2);
    if (after) ++res.positives;
    if (after && !before) {
      res.fail("fresh-atom equality related new terms on gamma='" +
               Sequent(gamma1, {}).render() + "', t=" + t.render() +
               ", t2=" + t2.render() + ", u=" + u.render() +
               ", u'=" + u_fresh.render());
    }
    if (before && !after) {
      res.fail("adding an equality lost relatedness (monotonicity)");
    }
  }
  return res;
}

// Adding an equality between two terms both unrelated to t cannot relate t
// to anything new.
inline SuiteResult run_left_asp_suite(unsigned seed, long cases) {
  SuiteResult res;
  Gen g(seed);
  for (long i = 0, attempts = 0; i < cases && attempts < cases * 50; ++attempts) {
    std::vector<Formula> gamma1 = random_gamma(g, 3, 3, default_var_pool());
    Term t = random_linear_term(g, default_var_pool(), 3);
    Term t2 = g.chance(50) ? related_partner(g, gamma1, t, 3)
                           : random_linear_term(g, default_var_pool(), 3);
    Term u = random_linear_term(g, default_var_pool(), 3);
    Term u2 = random_linear_term(g, default_var_pool(), 3);
    CongruenceIndex idx1(gamma1);
    if (idx1.related(t, u) || idx1.related(t, u2)) continue;  // precondition

    std::vector<Formula> gamma2 = gamma1;
    gamma2.push_back(eq(u, u2));
    gamma2 = sorted_unique(std::move(gamma2));
    ++i;
    ++res.cases;
    bool after = CongruenceIndex(gamma2).related(t, t2);
    if (after) ++res.positives;
    if (after && !idx1.related(t, t2)) {
      res.fail("equality between terms detached from t related t on gamma='" +
               Sequent(gamma1, {}).render() + "', t=" + t.render() +
               ", t2=" + t2.render() + ", u=" + u.render() +
               ", u2=" + u2.render());
    }
  }
  return res;
}

// check_gtc versus the closed-walk oracle on random pre-proofs, with replay
// confirmation of every reported failure lasso.
inline SuiteResult run_gtc_agreement_suite(unsigned seed, long cases,
                                           int max_nodes) {
  SuiteResult res;
  const InductiveSystem sys = fixtures::tef_system();
  Gen g(seed);
  for (long i = 0; i < cases; ++i) {
    ProofGenOptions opt;
    opt.max_nodes = 4 + g.below(max_nodes - 3);
    opt.allow_buds = g.chance(85);
    opt.allow_nonancestor_buds = g.chance(30);
    PreProof p = random_pre_proof(sys, g, opt);
    ++res.cases;
    ValidityReport validity = check_pre_proof(sys, p);
    if (!validity.valid) {
      res.fail("generator produced an invalid pre-proof:\n" + validity.render());
      continue;
    }
    GtcVerdict verdict = check_gtc(sys, p);
    bool oracle = false;
    try {
      oracle = naive_gtc_oracle(sys, p);
    } catch (const Error& e) {
      res.fail(std::string("oracle budget: ") + e.what());
      continue;
    }
    if (verdict.holds) ++res.positives;
    if (verdict.holds != oracle) {
      res.fail("check_gtc=" + std::to_string(verdict.holds) +
               " oracle=" + std::to_string(oracle) + " on a " +
               std::to_string(p.tree.nodes.size()) + "-node pre-proof");
      continue;
    }
    if (!verdict.holds) {
      if (!verdict.counterexample) {
        res.fail("FAIL verdict without a lasso");
        continue;
      }
      if (cycle_admits_progressing_trace(sys, p, verdict.counterexample->cycle,
                                         3)) {
        res.fail("reported lasso admits a progressing trace: " +
                 verdict.counterexample->render());
      }
    }
  }
  return res;
}

// cycle_normalize output is cycle-normal with an unfolding equal to the
// input's; bud-free inputs come back unchanged.
inline SuiteResult run_normalize_suite(unsigned seed, long cases,
                                       int max_nodes) {
  SuiteResult res;
  const InductiveSystem sys = fixtures::tef_system();
  Gen g(seed);
  for (long i = 0; i < cases; ++i) {
    ProofGenOptions opt;
    opt.max_nodes = 4 + g.below(max_nodes - 3);
    opt.allow_buds = g.chance(80);
    opt.allow_nonancestor_buds = g.chance(50);
    PreProof p = random_pre_proof(sys, g, opt);
    ++res.cases;
    ValidityReport validity = check_pre_proof(sys, p);
    if (!validity.valid) {
      res.fail("generator produced an invalid pre-proof:\n" + validity.render());
      continue;
    }

    PreProof q = cycle_normalize(sys, p);
    ValidityReport after = check_pre_proof(sys, q);
    if (!after.valid || !after.cycle_normal) {
      res.fail("normalized output invalid or not cycle-normal:\n" +
               after.render());
      continue;
    }
    int depth = 2 * static_cast<int>(p.tree.nodes.size()) + 4;
    if (!unfoldings_equal_to_depth(p, q, depth)) {
      res.fail("normalization changed the unfolding (depth " +
               std::to_string(depth) + ")");
      continue;
    }
    ++res.positives;
    if (p.companions.empty()) {
      bool identical = q.companions.empty() &&
                       q.tree.nodes.size() == p.tree.nodes.size();
      if (identical) {
        for (const auto& [addr, node] : p.tree.nodes) {
          if (!q.tree.contains(addr) ||
              q.tree.at(addr).sequent != node.sequent ||
              q.tree.at(addr).rule.name() != node.rule.name()) {
            identical = false;
            break;
          }
        }
      }
      if (!identical) res.fail("bud-free input was not a fixpoint");
    }
  }
  return res;
}

// ----------------------------------------------- hand-built path fixtures

// A cut-free cycle-normal candidate for the counterexample goal whose
// rightmost lasso carries an infinitely progressing trace: the case node is
// a switching point and the cycle re-enters it through the right assumption
// via Weak and Subst. The left branch is a non-progressing equality
// ping-pong, so the pre-proof as a whole still fails the trace condition.
inline PreProof make_progressing_candidate(const InductiveSystem& sys) {
  const Signature& sig = sys.signature;
  auto seq = [&](const std::string& text) { return parse_sequent(text, sig); };
  PreProof p;
  p.tree.nodes[parse_address("")] =
      {seq("TeF(s) |- FsT(e)"), make_subst({{"x", ts()}})};
  p.tree.nodes[parse_address("0")] =
      {seq("TeF(x) |- FsT(e)"),
       make_case("TeF", tef(tv("x")), {{}, {"y0"}})};
  p.tree.nodes[parse_address("0.0")] =
      {seq("x = e |- FsT(e)"),
       make_eqla("vx", "vy", tv("x"), te(), {}, {fst(tv("vy"))})};
  p.tree.nodes[parse_address("0.0.0")] =
      {seq("x = e |- FsT(x)"),
       make_eqla("vx", "vy", tv("x"), te(), {}, {fst(tv("vx"))})};
  p.tree.nodes[parse_address("0.0.0.0")] = {seq("x = e |- FsT(e)"), make_bud()};
  p.companions[parse_address("0.0.0.0")] = parse_address("0.0");
  p.tree.nodes[parse_address("0.1")] =
      {seq("x = y0, TeF(nx(y0)) |- FsT(e)"), make_weak()};
  p.tree.nodes[parse_address("0.1.0")] =
      {seq("TeF(nx(y0)) |- FsT(e)"), make_subst({{"x", nx(tv("y0"))}})};
  p.tree.nodes[parse_address("0.1.0.0")] =
      {seq("TeF(x) |- FsT(e)"), make_bud()};
  p.companions[parse_address("0.1.0.0")] = parse_address("0");
  return p;
}

// ---------------------------------------------------------- lasso harvest

// One lasso per cycle-normal bud: the stem of inner addresses from the root
// to the companion, the cycle from the companion down to the bud's parent,
// and the child index the looping path takes at each cycle node.
struct BudLasso {
  NodeAddress bud;
  std::vector<NodeAddress> stem;   // root .. parent(companion)
  std::vector<NodeAddress> cycle;  // companion .. parent(bud)
  std::vector<int> taken;          // child index taken at cycle[i]
};

inline std::vector<BudLasso> bud_lassos(const PreProof& p) {
  std::vector<BudLasso> out;
  for (const auto& [bud, comp] : p.companions) {
    if (!is_strict_prefix(comp, bud)) continue;  // skip non-normal buds
    BudLasso l;
    l.bud = bud;
    for (size_t k = 0; k < comp.size(); ++k)
      l.stem.push_back(NodeAddress(bud.begin(), bud.begin() + (long)k));
    for (size_t k = comp.size(); k < bud.size(); ++k) {
      l.cycle.push_back(NodeAddress(bud.begin(), bud.begin() + (long)k));
      l.taken.push_back(bud[k]);
    }
    out.push_back(std::move(l));
  }
  return out;
}

// ------------------------------------------------ unfinished path harvest

// All maximal unfinished paths of length <= max_len in a cut-free fragment
// pre-proof, starting from every root-like inner node. Paths are built by
// the definition (left case assumptions only at switching points) and then
// cross-checked against is_unfinished_path; a disagreement throws.
inline std::vector<std::vector<NodeAddress>> enumerate_unfinished_paths(
    const InductiveSystem& sys, const PreProof& p, int max_len,
    size_t cap = 5000) {
  const Fragment frag = require_fragment(sys);
  std::vector<std::vector<NodeAddress>> out;
  std::vector<NodeAddress> path;

  std::function<void()> extend = [&]() {
    if (out.size() >= cap) return;
    NodeAddress at = resolve_unfolding(p, path.back());
    const Node& node = p.tree.at(at);
    int n = p.tree.child_count(at);
    if (static_cast<int>(path.size()) >= max_len || n == 0) {
      out.push_back(path);
      return;
    }
    bool is_tef_case =
        node.rule.kind() == RuleKind::Case &&
        node.rule.as<CaseArgs>().pred == frag.tef;
    for (int i = 0; i < n; ++i) {
      if (is_tef_case && i == frag.tef_base &&
          !is_switching_point(sys, p, at)) {
        continue;  // left assumption only at switching points
      }
      path.push_back(path.back());
      path.back().push_back(i);
      extend();
      path.pop_back();
    }
  };

  for (const auto& [addr, node] : p.tree.nodes) {
    if (p.is_bud(addr)) continue;
    bool root_like = false;
    try {
      root_like = is_root_like(sys, node.sequent).root_like();
    } catch (const OutOfFragment&) {
      continue;
    }
    if (!root_like) continue;
    path = {addr};
    extend();
  }

  for (const auto& q : out) {
    PathCheck chk = is_unfinished_path(sys, p, q);
    if (!chk.ok) {
      throw Error("enumerated path rejected by is_unfinished_path at " +
                  std::to_string(chk.position) + ": " + chk.detail);
    }
  }
  return out;
}

// ------------------------------------------------------- §4 lemma suites

// Lemma invariant: every sequent on every enumerated unfinished path is
// root-like.
inline SuiteResult run_lemma_invariant(const InductiveSystem& sys,
                                       const PreProof& p, int max_len) {
  SuiteResult res;
  for (const auto& path : enumerate_unfinished_paths(sys, p, max_len)) {
    ++res.cases;
    bool all_root_like = true;
    for (const NodeAddress& a : path) {
      const Sequent& seq = p.tree.at(resolve_unfolding(p, a)).sequent;
      RootLikeReport rep;
      try {
        rep = is_root_like(sys, seq);
      } catch (const OutOfFragment& e) {
        res.fail("sequent off-fragment on an unfinished path at '" +
                 render_address(a) + "': " + e.what());
        all_root_like = false;
        break;
      }
      if (!rep.root_like()) {
        res.fail("non-root-like sequent on an unfinished path at '" +
                 render_address(a) + "': " + seq.render());
        all_root_like = false;
        break;
      }
    }
    if (all_root_like) ++res.positives;
  }
  return res;
}

// Lemma index: every complete trace along every enumerated unfinished path
// satisfies the index-transition table.
inline SuiteResult run_lemma_index(const InductiveSystem& sys,
                                   const PreProof& p, int max_len) {
  SuiteResult res;
  for (const auto& path : enumerate_unfinished_paths(sys, p, max_len)) {
    for (const auto& trace : enumerate_traces(sys, p, path)) {
      ++res.cases;
      IndexTransitionReport rep = check_index_transitions(sys, p, path, trace);
      if (rep.ok) {
        ++res.positives;
      } else {
        res.fail("index transition '" + rep.clause + "' at " +
                 std::to_string(rep.position) + ": " + rep.detail);
      }
    }
  }
  return res;
}

// Lemma key: every lasso whose infinite path from the root is unfinished
// and whose cycle admits a progressing trace contains a switching point
// entered through the right assumption. Returns the number of qualifying
// lassos in `cases` (vacuous fixtures yield zero).
inline SuiteResult run_lemma_key(const InductiveSystem& sys, const PreProof& p,
                                 int pumps = 3) {
  SuiteResult res;
  const Fragment frag = require_fragment(sys);
  for (const BudLasso& l : bud_lassos(p)) {
    // Finite prefix of the lasso's infinite path: stem, then two laps.
    std::vector<NodeAddress> prefix = l.stem;
    prefix.insert(prefix.end(), l.cycle.begin(), l.cycle.end());
    NodeAddress cur = l.bud;
    for (int lap = 0; lap < 1; ++lap) {
      for (size_t k = 0; k < l.cycle.size(); ++k) {
        prefix.push_back(cur);
        cur.push_back(l.taken[k]);
      }
    }
    if (!is_unfinished_path(sys, p, prefix).ok) continue;
    if (!cycle_admits_progressing_trace(sys, p, l.cycle, pumps)) continue;
    ++res.cases;

    bool found = false;
    for (size_t i = 0; i < l.cycle.size() && !found; ++i) {
      const Node& node = p.tree.at(l.cycle[i]);
      if (node.rule.kind() != RuleKind::Case) continue;
      if (node.rule.as<CaseArgs>().pred != frag.tef) continue;
      if (l.taken[i] != frag.tef_step) continue;
      if (is_switching_point(sys, p, l.cycle[i])) found = true;
    }
    if (found) {
      ++res.positives;
    } else {
      res.fail("progressing unfinished lasso without a right-entered "
               "switching point (bud '" + render_address(l.bud) + "')");
    }
  }
  return res;
}

// Lemma rightmost: the rightmost path from every root-like inner node runs
// the full 4*|nodes| budget (it never closes, in particular never at the
// fst base unfolding) and leaves the finite tree through at least one bud.
inline SuiteResult run_lemma_rightmost(const InductiveSystem& sys,
                                       const PreProof& p) {
  SuiteResult res;
  const int max_len = 4 * static_cast<int>(p.tree.nodes.size());
  for (const auto& [addr, node] : p.tree.nodes) {
    if (p.is_bud(addr)) continue;
    bool root_like = false;
    try {
      root_like = is_root_like(sys, node.sequent).root_like();
    } catch (const OutOfFragment&) {
      continue;
    }
    if (!root_like) continue;
    ++res.cases;

    std::vector<NodeAddress> path = rightmost_path(sys, p, addr, max_len);
    if (static_cast<int>(path.size()) < max_len) {
      const Node& last = p.tree.at(resolve_unfolding(p, path.back()));
      res.fail("rightmost path from '" + render_address(addr) +
               "' terminated after " + std::to_string(path.size()) +
               " nodes at rule " + last.rule.name());
      continue;
    }
    bool looped = false;
    for (const NodeAddress& a : path) {
      if (!p.tree.contains(a)) { looped = true; break; }
    }
    if (!looped) {
      res.fail("rightmost path from '" + render_address(addr) +
               "' never passed through a bud");
      continue;
    }
    ++res.positives;
  }
  return res;
}

}  // namespace cyclo::testing

#endif  // CYCLO_TESTS_SUPPORT_HPP_
