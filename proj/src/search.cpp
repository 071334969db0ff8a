#include "cyclo/search.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

#include "cyclo/congruence.hpp"
#include "cyclo/trace.hpp"

namespace cyclo {

namespace {

struct BudgetHit {};

int term_depth(const Term& t) {
  int d = 0;
  for (const Term& a : t.args) d = std::max(d, term_depth(a));
  return t.is_var() ? 0 : (t.args.empty() ? 0 : 1 + d);
}

int formula_term_depth(const Formula& f) {
  int d = 0;
  for (const Term& a : f.args) d = std::max(d, term_depth(a));
  return d;
}

int sequent_term_depth(const Sequent& s) {
  int d = 0;
  for (const Formula& f : s.ante) d = std::max(d, formula_term_depth(f));
  for (const Formula& f : s.succ) d = std::max(d, formula_term_depth(f));
  return d;
}

// One-way matching: variables of the pattern bind, the target is literal.
bool match_term(const Term& pat, const Term& tgt, Substitution& theta) {
  if (pat.is_var()) {
    auto it = theta.find(pat.name);
    if (it != theta.end()) return it->second == tgt;
    theta.emplace(pat.name, tgt);
    return true;
  }
  if (tgt.is_var() || pat.name != tgt.name ||
      pat.args.size() != tgt.args.size()) {
    return false;
  }
  for (size_t i = 0; i < pat.args.size(); ++i) {
    if (!match_term(pat.args[i], tgt.args[i], theta)) return false;
  }
  return true;
}

bool match_formula(const Formula& pat, const Formula& tgt, Substitution& theta) {
  if (pat.kind != tgt.kind || pat.pred != tgt.pred ||
      pat.args.size() != tgt.args.size()) {
    return false;
  }
  for (size_t i = 0; i < pat.args.size(); ++i) {
    if (!match_term(pat.args[i], tgt.args[i], theta)) return false;
  }
  return true;
}

// All substitutions theta over the variables of `pattern` such that
// substitute(pattern, theta) is contained in `target`, deduplicated and in
// a deterministic order. Identity bindings are stripped.
std::vector<Substitution> subsumption_matchings(const Sequent& pattern,
                                                const Sequent& target) {
  std::vector<const Formula*> pats;
  std::vector<const std::vector<Formula>*> pools;
  for (const Formula& f : pattern.ante) {
    pats.push_back(&f);
    pools.push_back(&target.ante);
  }
  for (const Formula& f : pattern.succ) {
    pats.push_back(&f);
    pools.push_back(&target.succ);
  }
  std::vector<Substitution> result;
  std::set<std::string> seen;
  std::function<void(size_t, const Substitution&)> go =
      [&](size_t idx, const Substitution& theta) {
        if (idx == pats.size()) {
          Substitution trimmed;
          for (const auto& [v, t] : theta) {
            if (!(t.is_var() && t.name == v)) trimmed.emplace(v, t);
          }
          std::ostringstream key;
          for (const auto& [v, t] : trimmed) key << v << ":=" << t.render() << ";";
          if (seen.insert(key.str()).second) result.push_back(std::move(trimmed));
          return;
        }
        for (const Formula& candidate : *pools[idx]) {
          Substitution next = theta;
          if (match_formula(*pats[idx], candidate, next)) go(idx + 1, next);
        }
      };
  go(0, {});
  return result;
}

class Searcher {
 public:
  Searcher(const InductiveSystem& system, const SearchBounds& bounds)
      : sys_(system), bounds_(bounds), frag_(identify_fragment(system)) {}

  SearchResult run(const Sequent& goal);

 private:
  struct PathEntry {
    NodeAddress addr;
    Sequent seq;
  };

  // `drop_floor` orders consecutive weak-drop runs: a drop may only remove
  // a formula strictly above the one its parent dropped, so every dropped
  // subset is enumerated exactly once (in ascending formula order).
  bool dfs(const NodeAddress& addr, const Sequent& seq, int remaining,
           int fresh_counter, bool weak_drop_ok,
           const std::string& drop_floor);

  // Commits `rule` at addr and proves every child; on failure removes the
  // whole subtree again. `child_weak_ok` sets the weak-drop privilege of
  // the children.
  bool expand(const NodeAddress& addr, const Sequent& seq,
              RuleApplication rule, const std::vector<Sequent>& children,
              int remaining, int fresh_counter, bool child_weak_ok,
              const std::string& drop_floor = "");

  bool try_closures(const NodeAddress& addr, const Sequent& seq);
  bool try_buds(const NodeAddress& addr, const Sequent& seq, int remaining);
  bool cycle_can_progress(const NodeAddress& companion,
                          const NodeAddress& bud) const;
  bool try_cases(const NodeAddress& addr, const Sequent& seq, int remaining,
                 int fresh_counter);
  bool try_unfold_steps(const NodeAddress& addr, const Sequent& seq,
                        int remaining, int fresh_counter);
  bool try_eqla(const NodeAddress& addr, const Sequent& seq, int remaining,
                int fresh_counter, bool weak_drop_ok);
  bool try_weak_drops(const NodeAddress& addr, const Sequent& seq,
                      int remaining, int fresh_counter,
                      const std::string& drop_floor);
  bool try_cuts(const NodeAddress& addr, const Sequent& seq, int remaining,
                int fresh_counter);

  void erase_from(const NodeAddress& addr);
  bool goal_in_fragment(const Sequent& goal) const;
  std::pair<std::string, std::string> template_vars(const Sequent& seq) const;

  const InductiveSystem& sys_;
  SearchBounds bounds_;
  std::optional<Fragment> frag_;
  bool fragment_mode_ = false;
  std::set<std::string> avoid_;  // names never used as fresh variables
  std::vector<PathEntry> path_;  // strict ancestors of the current goal
  PreProof work_;
  SearchStats stats_;
};

bool Searcher::goal_in_fragment(const Sequent& goal) const {
  if (!frag_) return false;
  auto linear_over_fn = [&](const Term& t) {
    auto lin = atom_and_depth(t);
    return lin && (lin->depth == 0 || lin->fn == frag_->fn);
  };
  for (const Formula& f : goal.ante) {
    if (f.is_equality()) {
      if (!linear_over_fn(f.lhs()) || !linear_over_fn(f.rhs())) return false;
    } else if (!(f.pred == frag_->tef && f.args.size() == 1 &&
                 linear_over_fn(f.args[0]))) {
      return false;
    }
  }
  for (const Formula& f : goal.succ) {
    if (!(!f.is_equality() && f.pred == frag_->fst && f.args.size() == 1 &&
          linear_over_fn(f.args[0]))) {
      return false;
    }
  }
  return true;
}

void Searcher::erase_from(const NodeAddress& addr) {
  auto it = work_.tree.nodes.lower_bound(addr);
  while (it != work_.tree.nodes.end() && is_prefix(addr, it->first)) {
    it = work_.tree.nodes.erase(it);
  }
  auto cit = work_.companions.lower_bound(addr);
  while (cit != work_.companions.end() && is_prefix(addr, cit->first)) {
    cit = work_.companions.erase(cit);
  }
}

bool Searcher::expand(const NodeAddress& addr, const Sequent& seq,
                      RuleApplication rule,
                      const std::vector<Sequent>& children, int remaining,
                      int fresh_counter, bool child_weak_ok,
                      const std::string& drop_floor) {
  work_.tree.nodes[addr] = Node{seq, std::move(rule)};
  path_.push_back({addr, seq});
  bool ok = true;
  for (size_t i = 0; i < children.size(); ++i) {
    NodeAddress child = addr;
    child.push_back(static_cast<int>(i));
    if (!dfs(child, children[i], remaining - 1, fresh_counter, child_weak_ok,
             drop_floor)) {
      ok = false;
      break;
    }
  }
  path_.pop_back();
  if (!ok) erase_from(addr);
  return ok;
}

bool Searcher::try_closures(const NodeAddress& addr, const Sequent& seq) {
  if (!fragment_mode_) {
    for (const Formula& f : seq.ante) {
      if (seq.succ_contains(f)) {
        return expand(addr, seq, make_axiom(), {}, 1, 0, false);
      }
    }
    for (const Formula& f : seq.succ) {
      if (f.is_equality() && f.lhs() == f.rhs()) {
        return expand(addr, seq, make_eqr(), {}, 1, 0, false);
      }
    }
  }
  for (const Formula& f : seq.succ) {
    if (f.is_equality() || !sys_.is_inductive_atom(f)) continue;
    const auto& prods = sys_.productions_of(f.pred);
    for (size_t k = 0; k < prods.size(); ++k) {
      if (!prods[k].assumptions.empty()) continue;
      Substitution inst;
      if (!match_formula(prods[k].conclusion, f, inst)) continue;
      return expand(addr, seq,
                    make_unfold_right(f.pred, static_cast<int>(k), f, inst),
                    {}, 1, 0, false);
    }
  }
  return false;
}

bool Searcher::try_buds(const NodeAddress& addr, const Sequent& seq,
                        int remaining) {
  for (auto anc = path_.rbegin(); anc != path_.rend(); ++anc) {
    for (const Substitution& theta : subsumption_matchings(anc->seq, seq)) {
      ++stats_.bud_candidates;
      const Sequent instance = substitute(anc->seq, theta);
      // Chain seq --Weak--> instance --Subst--> ancestor --Bud, with the
      // Weak and Subst stages omitted when they would be identities.
      std::vector<std::pair<Sequent, RuleApplication>> chain;
      if (instance != seq) chain.emplace_back(seq, make_weak());
      if (!theta.empty()) chain.emplace_back(instance, make_subst(theta));
      chain.emplace_back(anc->seq, make_bud());
      if (static_cast<int>(chain.size()) > remaining) continue;

      NodeAddress at = addr;
      for (size_t i = 0; i < chain.size(); ++i) {
        work_.tree.nodes[at] = Node{chain[i].first, chain[i].second};
        if (i + 1 < chain.size()) at.push_back(0);
      }
      work_.companions[at] = anc->addr;
      if (cycle_can_progress(anc->addr, at) && check_gtc(sys_, work_).holds) {
        return true;
      }
      ++stats_.buds_rejected_gtc;
      erase_from(addr);
    }
  }
  return false;
}

bool Searcher::cycle_can_progress(const NodeAddress& companion,
                                  const NodeAddress& bud) const {
  // Necessary condition checked before the full trace-condition closure:
  // the infinite path that repeats just the new cycle must itself carry an
  // infinitely progressing trace. Composing the per-edge trace relations
  // from the companion down to the bud (whose sequent equals the
  // companion's) gives the lap relation; the cycle admits such a trace iff
  // the unique idempotent power of the lap has progress on its diagonal.
  using Key = std::pair<std::string, std::string>;
  using Rel = std::map<Key, bool>;
  auto compose = [](const Rel& a, const Rel& b) {
    std::map<std::string, std::vector<std::pair<std::string, bool>>> by_src;
    for (const auto& [key, prog] : b) {
      by_src[key.first].emplace_back(key.second, prog);
    }
    Rel out;
    for (const auto& [key, prog] : a) {
      auto it = by_src.find(key.second);
      if (it == by_src.end()) continue;
      for (const auto& [dst, prog2] : it->second) {
        bool& slot = out.try_emplace(Key{key.first, dst}, false).first->second;
        slot = slot || prog || prog2;
      }
    }
    return out;
  };

  Rel lap;
  for (size_t len = companion.size(); len < bud.size(); ++len) {
    NodeAddress parent(bud.begin(), bud.begin() + len);
    Rel step;
    for (const TracePair& tp : edge_trace_pairs(sys_, work_, parent, bud[len])) {
      bool& slot = step.try_emplace(Key{tp.from.render(), tp.to.render()}, false)
                       .first->second;
      slot = slot || tp.progress;
    }
    lap = len == companion.size() ? std::move(step) : compose(lap, step);
    if (lap.empty()) return false;  // no trace survives even one lap
  }

  Rel power = lap;
  for (int iter = 0; iter < 256; ++iter) {
    if (compose(power, power) == power) {
      for (const auto& [key, prog] : power) {
        if (prog && key.first == key.second) return true;
      }
      return false;
    }
    power = compose(power, lap);
  }
  return true;  // defer to the full check in the (unreachable) fallback
}

bool Searcher::try_cases(const NodeAddress& addr, const Sequent& seq,
                         int remaining, int fresh_counter) {
  if (remaining < 2) return false;
  for (const Formula& f : seq.ante) {
    if (f.is_equality() || !sys_.is_inductive_atom(f)) continue;
    if (fragment_mode_ && f.pred != frag_->tef) continue;
    const auto& prods = sys_.productions_of(f.pred);
    std::set<std::string> used = free_vars(seq);
    int counter = fresh_counter;
    std::vector<std::vector<std::string>> fresh;
    for (const Production& prod : prods) {
      std::vector<std::string> names;
      for (size_t v = 0; v < prod.variables().size(); ++v) {
        std::string name;
        do {
          name = "y" + std::to_string(counter++);
        } while (used.count(name) > 0 || avoid_.count(name) > 0);
        used.insert(name);
        names.push_back(std::move(name));
      }
      fresh.push_back(std::move(names));
    }
    std::vector<CaseChild> cases = case_distinctions(sys_, seq, f, fresh);
    std::vector<Sequent> children;
    children.reserve(cases.size());
    for (const CaseChild& c : cases) children.push_back(c.sequent);
    if (expand(addr, seq, make_case(f.pred, f, fresh), children, remaining,
               counter, false)) {
      return true;
    }
  }
  return false;
}

bool Searcher::try_unfold_steps(const NodeAddress& addr, const Sequent& seq,
                                int remaining, int fresh_counter) {
  if (remaining < 2) return false;
  for (const Formula& f : seq.succ) {
    if (f.is_equality() || !sys_.is_inductive_atom(f)) continue;
    const auto& prods = sys_.productions_of(f.pred);
    for (size_t k = 0; k < prods.size(); ++k) {
      if (prods[k].assumptions.empty()) continue;  // closures handle these
      Substitution inst;
      if (!match_formula(prods[k].conclusion, f, inst)) continue;
      bool covered = true;
      for (const std::string& v : prods[k].variables()) {
        if (inst.find(v) == inst.end()) covered = false;
      }
      if (!covered) continue;  // cannot synthesize the missing instantiation
      std::vector<Sequent> children;
      bool too_deep = false;
      Sequent base = seq.without_succ(f);
      for (const Formula& assumption : prods[k].assumptions) {
        Formula inst_assumption = substitute(assumption, inst);
        if (formula_term_depth(inst_assumption) > bounds_.max_term_depth) {
          too_deep = true;
          break;
        }
        children.push_back(base.with_succ(inst_assumption));
      }
      if (too_deep) continue;
      if (expand(addr, seq,
                 make_unfold_right(f.pred, static_cast<int>(k), f, inst),
                 children, remaining, fresh_counter, false)) {
        return true;
      }
    }
  }
  return false;
}

std::pair<std::string, std::string> Searcher::template_vars(
    const Sequent& seq) const {
  std::set<std::string> used = free_vars(seq);
  for (int n = 0;; ++n) {
    std::string suffix = n == 0 ? "" : std::to_string(n);
    std::string x = "_x" + suffix, y = "_y" + suffix;
    if (used.count(x) == 0 && used.count(y) == 0) return {x, y};
  }
}

bool Searcher::try_eqla(const NodeAddress& addr, const Sequent& seq,
                        int remaining, int fresh_counter, bool weak_drop_ok) {
  if (remaining < 2) return false;
  const auto [xvar, yvar] = template_vars(seq);
  for (const Formula& q : seq.ante) {
    if (!q.is_equality() || q.lhs() == q.rhs()) continue;
    auto lt = atom_and_depth(q.lhs());
    auto lu = atom_and_depth(q.rhs());
    if (!lt || !lu) continue;
    // Rewrites a single atom argument whose tail matches one side of q,
    // replacing the tail by the other side; the template variable x marks
    // lhs-tails, y marks rhs-tails (matching the rule's orientation).
    auto rewrite_side = [&](bool in_ante, const Formula& phi) -> bool {
      if (phi.is_equality()) return false;
      for (size_t k = 0; k < phi.args.size(); ++k) {
        auto lin = atom_and_depth(phi.args[k]);
        if (!lin) continue;
        for (int dir = 0; dir < 2; ++dir) {
          const LinearTerm& from = dir == 0 ? *lt : *lu;
          const Term& to = dir == 0 ? q.rhs() : q.lhs();
          const std::string& tvar = dir == 0 ? xvar : yvar;
          if (lin->atom != from.atom || lin->atom_is_var != from.atom_is_var ||
              lin->depth < from.depth) {
            continue;
          }
          int prefix = lin->depth - from.depth;
          if (from.depth > 0 && lin->fn != from.fn) continue;
          Term rewritten = linear_term(lin->fn, prefix, to);
          if (term_depth(rewritten) > bounds_.max_term_depth) continue;
          std::vector<Term> new_args = phi.args;
          new_args[k] = rewritten;
          Formula phi2 = Formula::atom(phi.pred, new_args);
          if (phi2 == phi) continue;

          std::vector<Term> tpl_args = phi.args;
          tpl_args[k] = linear_term(lin->fn, prefix, Term::var(tvar));
          Formula tpl = Formula::atom(phi.pred, tpl_args);
          std::vector<Formula> ante_tpl, succ_tpl;
          for (const Formula& g : seq.ante) {
            if (g == q) continue;
            ante_tpl.push_back(in_ante && g == phi ? tpl : g);
          }
          for (const Formula& g : seq.succ) {
            succ_tpl.push_back(!in_ante && g == phi ? tpl : g);
          }
          Sequent premise = in_ante
                                ? seq.without_ante(phi).with_ante(phi2)
                                : seq.without_succ(phi).with_succ(phi2);
          if (premise == seq) continue;
          if (expand(addr, seq,
                     make_eqla(xvar, yvar, q.lhs(), q.rhs(), ante_tpl,
                               succ_tpl),
                     {premise}, remaining, fresh_counter, weak_drop_ok)) {
            return true;
          }
        }
      }
      return false;
    };
    for (const Formula& phi : seq.ante) {
      if (rewrite_side(true, phi)) return true;
    }
    for (const Formula& phi : seq.succ) {
      if (rewrite_side(false, phi)) return true;
    }
  }
  return false;
}

bool Searcher::try_weak_drops(const NodeAddress& addr, const Sequent& seq,
                              int remaining, int fresh_counter,
                              const std::string& drop_floor) {
  if (remaining < 2) return false;
  for (const Formula& f : seq.ante) {
    if (!drop_floor.empty() && f.render() <= drop_floor) continue;
    Sequent child = seq.without_ante(f);
    if (expand(addr, seq, make_weak(), {child}, remaining, fresh_counter,
               true, f.render())) {
      return true;
    }
  }
  return false;
}

bool Searcher::try_cuts(const NodeAddress& addr, const Sequent& seq,
                        int remaining, int fresh_counter) {
  if (remaining < 2) return false;
  // Candidate instantiations are anchored in the goal: every argument of an
  // instantiated pool formula must already occur as a subterm of the
  // sequent. This keeps the number of cut moves per node proportional to
  // the sequent's size instead of the whole term universe.
  std::vector<Term> subterms;
  std::set<std::string> present;
  std::function<void(const Term&)> collect = [&](const Term& t) {
    if (present.insert(t.render()).second) subterms.push_back(t);
    for (const Term& a : t.args) collect(a);
  };
  auto collect_formula = [&](const Formula& f) {
    if (f.is_equality()) {
      collect(f.lhs());
      collect(f.rhs());
    } else {
      for (const Term& a : f.args) collect(a);
    }
  };
  for (const Formula& f : seq.ante) collect_formula(f);
  for (const Formula& f : seq.succ) collect_formula(f);
  std::sort(subterms.begin(), subterms.end(), [](const Term& a, const Term& b) {
    int da = term_depth(a), db = term_depth(b);
    return da != db ? da < db : a.render() < b.render();
  });

  for (const Formula& pattern : bounds_.cut_formula_pool) {
    const std::set<std::string> pattern_vars = free_vars(pattern);
    std::vector<std::string> vars(pattern_vars.begin(), pattern_vars.end());
    std::function<bool(size_t, Substitution&)> assign =
        [&](size_t idx, Substitution& theta) -> bool {
      if (idx == vars.size()) {
        Formula cut_formula = substitute(pattern, theta);
        if (formula_term_depth(cut_formula) > bounds_.max_term_depth) {
          return false;
        }
        if (!vars.empty()) {
          for (const Term& arg : cut_formula.args) {
            if (present.count(arg.render()) == 0) return false;
          }
        }
        if (seq.ante_contains(cut_formula) || seq.succ_contains(cut_formula)) {
          return false;
        }
        std::vector<Sequent> children = {seq.with_succ(cut_formula),
                                         seq.with_ante(cut_formula)};
        return expand(addr, seq, make_cut(cut_formula), children, remaining,
                      fresh_counter, true);
      }
      for (const Term& candidate : subterms) {
        theta[vars[idx]] = candidate;
        if (assign(idx + 1, theta)) return true;
      }
      theta.erase(vars[idx]);
      return false;
    };
    Substitution theta;
    if (assign(0, theta)) return true;
  }
  return false;
}

bool Searcher::dfs(const NodeAddress& addr, const Sequent& seq, int remaining,
                   int fresh_counter, bool weak_drop_ok,
                   const std::string& drop_floor) {
  if (++stats_.expansions > bounds_.max_nodes) throw BudgetHit{};
  if (fragment_mode_ && !goal_in_fragment(seq)) ++stats_.shape_violations;
  if (try_closures(addr, seq)) return true;
  if (try_buds(addr, seq, remaining)) return true;
  if (bounds_.allow_cut && weak_drop_ok &&
      try_weak_drops(addr, seq, remaining, fresh_counter, drop_floor)) {
    return true;
  }
  if (try_cases(addr, seq, remaining, fresh_counter)) return true;
  if (try_unfold_steps(addr, seq, remaining, fresh_counter)) return true;
  if (try_eqla(addr, seq, remaining, fresh_counter, weak_drop_ok)) return true;
  if (bounds_.allow_cut && try_cuts(addr, seq, remaining, fresh_counter)) {
    return true;
  }
  return false;
}

SearchResult Searcher::run(const Sequent& goal) {
  if (bounds_.max_tree_depth < 1 || bounds_.max_term_depth < 0 ||
      bounds_.max_nodes < 1) {
    throw BoundsTooSmall("search bounds must allow at least one node");
  }
  if (sequent_term_depth(goal) > bounds_.max_term_depth) {
    throw BoundsTooSmall("goal terms exceed the term depth bound");
  }
  for (const Formula& f : bounds_.cut_formula_pool) {
    if (f.is_equality()) continue;
    if (!sys_.is_inductive_atom(f) && !sys_.is_ordinary_atom(f)) {
      throw Error("cut pool formula uses an undeclared predicate: " +
                  f.render());
    }
  }
  fragment_mode_ = !bounds_.allow_cut && goal_in_fragment(goal);
  avoid_ = free_vars(goal);
  for (const Formula& f : bounds_.cut_formula_pool) {
    for (const std::string& v : free_vars(f)) avoid_.insert(v);
  }

  SearchResult result;
  for (int limit = 1; limit <= bounds_.max_tree_depth; ++limit) {
    stats_.depth_reached = limit;
    work_ = PreProof{};
    path_.clear();
    bool found = false;
    try {
      found = dfs({}, goal, limit, 0, false, "");
    } catch (const BudgetHit&) {
      stats_.budget_exhausted = true;
      break;
    }
    if (found) {
      ValidityReport validity = check_pre_proof(sys_, work_);
      if (!validity.valid || !check_gtc(sys_, work_).holds) {
        throw Error("internal error: search assembled an invalid proof");
      }
      result.status = SearchStatus::ProofFound;
      result.proof = work_;
      break;
    }
  }
  result.stats = stats_;
  return result;
}

}  // namespace

std::string SearchStats::render() const {
  std::ostringstream out;
  out << "expanded " << expansions << " goals, reached depth " << depth_reached
      << ", bud candidates " << bud_candidates << " (" << buds_rejected_gtc
      << " rejected by the trace condition), budget exhausted: "
      << (budget_exhausted ? "yes" : "no");
  return out.str();
}

std::vector<Formula> default_cut_pool(const InductiveSystem& system) {
  Fragment frag = require_fragment(system);
  Term x = Term::var("x");
  return {
      Formula::atom(frag.tef, {linear_term(frag.fn, 1, x)}),
      Formula::atom(frag.tef, {linear_term(frag.fn, 2, x)}),
      Formula::atom(frag.fst, {linear_term(frag.fn, 1, x)}),
  };
}

SearchResult search_cut_free(const InductiveSystem& system, const Sequent& goal,
                             const SearchBounds& bounds) {
  return Searcher(system, bounds).run(goal);
}

}  // namespace cyclo
