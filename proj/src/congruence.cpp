#include "cyclo/congruence.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <set>

namespace cyclo {

std::string IndexValue::render() const {
  switch (kind) {
    case Kind::Bot: return "bot";
    case Kind::Value: return std::to_string(value);
    case Kind::Undefined: return "undefined";
    case Kind::CapExceeded: return "cap-exceeded";
  }
  return "?";
}

// ---------------------------------------------------------- chain oracle

namespace {

int term_depth(const Term& t) {
  auto lin = atom_and_depth(t);
  if (!lin) throw NonLinearTerm("non-linear term '" + t.render() + "'");
  return lin->depth;
}

// The unique unary function used across gamma and the query terms.
std::string chain_fn(const std::vector<Formula>& gamma, const Term& t,
                     const Term& u) {
  std::string fn;
  auto note = [&](const Term& v) {
    auto lin = atom_and_depth(v);
    if (!lin) throw NonLinearTerm("non-linear term '" + v.render() + "'");
    if (lin->fn.empty()) return;
    if (fn.empty()) fn = lin->fn;
    else if (fn != lin->fn)
      throw OutOfFragment("mixed unary functions '" + fn + "' and '" +
                          lin->fn + "'");
  };
  for (const Formula& f : gamma) {
    if (!f.is_equality()) continue;
    note(f.lhs());
    note(f.rhs());
  }
  note(t);
  note(u);
  return fn;
}

}  // namespace

bool chain_oracle(const std::vector<Formula>& gamma, const Term& t,
                  const Term& u, int cap) {
  if (t == u) return true;
  std::string fn = chain_fn(gamma, t, u);
  if (term_depth(t) > cap || term_depth(u) > cap) return false;

  std::vector<std::pair<Term, Term>> rules;  // oriented both ways
  for (const Formula& f : gamma) {
    if (!f.is_equality()) continue;
    rules.emplace_back(f.lhs(), f.rhs());
    rules.emplace_back(f.rhs(), f.lhs());
  }

  std::set<std::string> seen{t.render()};
  std::deque<Term> frontier{t};
  while (!frontier.empty()) {
    Term cur = frontier.front();
    frontier.pop_front();
    int cur_depth = term_depth(cur);
    for (const auto& [l, r] : rules) {
      // cur must be fn^n(l) for some n >= 0; n is forced by the depths.
      int n = cur_depth - term_depth(l);
      if (n < 0) continue;
      auto llin = atom_and_depth(l);
      if (cur != linear_term(fn, n + llin->depth,
                             llin->atom_is_var ? Term::var(llin->atom)
                                               : Term::app(llin->atom)))
        continue;
      auto rlin = atom_and_depth(r);
      int next_depth = n + rlin->depth;
      if (next_depth > cap) continue;
      Term next = linear_term(fn, next_depth,
                              rlin->atom_is_var ? Term::var(rlin->atom)
                                                : Term::app(rlin->atom));
      if (next == u) return true;
      if (seen.insert(next.render()).second) frontier.push_back(next);
    }
  }
  return false;
}

// ------------------------------------------------------- CongruenceIndex

LinearTerm CongruenceIndex::decompose(const Term& t) const {
  auto lin = atom_and_depth(t);
  if (!lin) throw NonLinearTerm("non-linear term '" + t.render() + "'");
  if (!lin->fn.empty() && !fn_.empty() && lin->fn != fn_)
    throw OutOfFragment("mixed unary functions '" + fn_ + "' and '" +
                        lin->fn + "'");
  return *lin;
}

static std::string atom_key(const LinearTerm& lin) {
  return (lin.atom_is_var ? "v:" : "c:") + lin.atom;
}

int CongruenceIndex::intern_atom(const std::string& key) {
  for (size_t i = 0; i < atom_keys_.size(); ++i)
    if (atom_keys_[i] == key) return static_cast<int>(i);
  atom_keys_.push_back(key);
  parent_.push_back(static_cast<int>(atom_keys_.size()) - 1);
  return static_cast<int>(atom_keys_.size()) - 1;
}

int CongruenceIndex::atom_id(const LinearTerm& lin) const {
  std::string key = atom_key(lin);
  for (size_t i = 0; i < atom_keys_.size(); ++i)
    if (atom_keys_[i] == key) return static_cast<int>(i);
  return -1;
}

int CongruenceIndex::find(int a) const {
  while (parent_[a] != a) {
    parent_[a] = parent_[parent_[a]];
    a = parent_[a];
  }
  return a;
}

CongruenceIndex::CongruenceIndex(const std::vector<Formula>& gamma,
                                 std::optional<int> shift_cap)
    : explicit_cap_(shift_cap) {
  if (!explicit_cap_) {
    if (const char* env = std::getenv("CYCLO_SHIFT_CAP"))
      explicit_cap_ = std::atoi(env);
  }
  for (const Formula& f : gamma) {
    if (!f.is_equality()) continue;
    auto l = atom_and_depth(f.lhs());
    auto r = atom_and_depth(f.rhs());
    if (!l || !r) throw NonLinearTerm("non-linear equality '" + f.text() + "'");
    for (const auto& lin : {*l, *r}) {
      if (lin.fn.empty()) continue;
      if (fn_.empty()) fn_ = lin.fn;
      else if (fn_ != lin.fn)
        throw OutOfFragment("mixed unary functions '" + fn_ + "' and '" +
                            lin.fn + "'");
    }
    int a = intern_atom(atom_key(*l));
    int b = intern_atom(atom_key(*r));
    edges_.push_back({a, l->depth, b, r->depth});
    max_gamma_depth_ = std::max({max_gamma_depth_, l->depth, r->depth});
    parent_[find(a)] = find(b);
  }
}

int CongruenceIndex::cap_for(int query_depth) const {
  if (explicit_cap_) return *explicit_cap_;
  return std::max(max_gamma_depth_, query_depth) +
         static_cast<int>(edges_.size()) * max_gamma_depth_ + 2;
}

bool CongruenceIndex::equiv(const Term& t, const Term& u) const {
  if (t == u) return true;
  LinearTerm lt = decompose(t), lu = decompose(u);
  if (!lt.fn.empty() && !lu.fn.empty() && lt.fn != lu.fn)
    throw OutOfFragment("mixed unary functions in query");
  int cap = cap_for(std::max(lt.depth, lu.depth));
  if (lt.depth > cap || lu.depth > cap)
    throw CapExceeded("query depth exceeds shift cap " + std::to_string(cap));

  int sa = atom_id(lt), ga = atom_id(lu);
  if (atom_key(lt) == atom_key(lu) && lt.depth == lu.depth) return true;
  if (sa < 0 || ga < 0) return false;  // unseen atoms have no edges

  // BFS over (atom, shift) states, 0 <= shift <= cap.
  int natoms = static_cast<int>(atom_keys_.size());
  std::vector<char> seen(static_cast<size_t>(natoms) * (cap + 1), 0);
  auto idx = [&](int a, int d) { return static_cast<size_t>(a) * (cap + 1) + d; };
  std::deque<std::pair<int, int>> frontier{{sa, lt.depth}};
  seen[idx(sa, lt.depth)] = 1;
  while (!frontier.empty()) {
    auto [a, d] = frontier.front();
    frontier.pop_front();
    if (a == ga && d == lu.depth) return true;
    for (const Edge& e : edges_) {
      if (e.a == a && d >= e.pa && d - e.pa + e.pb <= cap) {
        int nd = d - e.pa + e.pb;
        if (!seen[idx(e.b, nd)]) {
          seen[idx(e.b, nd)] = 1;
          frontier.emplace_back(e.b, nd);
        }
      }
      if (e.b == a && d >= e.pb && d - e.pb + e.pa <= cap) {
        int nd = d - e.pb + e.pa;
        if (!seen[idx(e.a, nd)]) {
          seen[idx(e.a, nd)] = 1;
          frontier.emplace_back(e.a, nd);
        }
      }
    }
  }
  return false;
}

bool CongruenceIndex::related(const Term& t, const Term& u) const {
  LinearTerm lt = decompose(t), lu = decompose(u);
  int a = atom_id(lt), b = atom_id(lu);
  if (a < 0 || b < 0) return atom_key(lt) == atom_key(lu);
  return find(a) == find(b);
}

IndexValue CongruenceIndex::index_of(const Term& t, const Term& base) const {
  if (!related(t, base)) return IndexValue::bot();
  LinearTerm lt = decompose(t), lb = decompose(base);
  int cap = cap_for(std::max(lt.depth, lb.depth));
  Term t_atom = lt.atom_is_var ? Term::var(lt.atom) : Term::app(lt.atom);
  Term b_atom = lb.atom_is_var ? Term::var(lb.atom) : Term::app(lb.atom);
  std::string fn = !fn_.empty() ? fn_ : (!lt.fn.empty() ? lt.fn : lb.fn);

  std::set<int> diffs;
  for (int n = 0; lt.depth + n <= cap; ++n) {
    for (int m = 0; lb.depth + m <= cap; ++m) {
      if (equiv(linear_term(fn, lt.depth + n, t_atom),
                linear_term(fn, lb.depth + m, b_atom)))
        diffs.insert(m - n);
    }
    if (diffs.size() > 1) break;
  }
  if (diffs.empty()) return IndexValue::cap_exceeded();
  if (diffs.size() == 1) return IndexValue::of(*diffs.begin());
  return IndexValue::undefined();
}

// --------------------------------------------------------- the fragment

std::optional<Fragment> identify_fragment(const InductiveSystem& sys) {
  Fragment frag;
  bool tef_found = false, fst_found = false;
  for (const std::string& pred : sys.pred_order) {
    const auto& prods = sys.productions_of(pred);
    if (prods.size() != 2) continue;
    // base production: => P(c) for a constant c
    const Production *base = nullptr, *step = nullptr;
    int base_idx = -1, step_idx = -1;
    for (size_t k = 0; k < prods.size(); ++k) {
      if (prods[k].assumptions.empty()) { base = &prods[k]; base_idx = static_cast<int>(k); }
      else { step = &prods[k]; step_idx = static_cast<int>(k); }
    }
    if (!base || !step || step->assumptions.size() != 1) continue;
    if (base->conclusion.args.size() != 1) continue;
    const Term& c = base->conclusion.args[0];
    if (c.is_var() || !c.args.empty()) continue;
    const Formula& asm_atom = step->assumptions[0];
    if (asm_atom.kind != Formula::Kind::Atom || asm_atom.pred != pred) continue;
    if (asm_atom.args.size() != 1 || step->conclusion.args.size() != 1) continue;
    const Term& at = asm_atom.args[0];         // assumption argument
    const Term& ct = step->conclusion.args[0]; // conclusion argument
    // tef shape: P(f(x)) => P(x); fst shape: P(x) => P(f(x)).
    if (at.kind == Term::Kind::App && at.args.size() == 1 &&
        at.args[0].is_var() && ct.is_var() && ct.name == at.args[0].name) {
      if (!frag.fn.empty() && frag.fn != at.name) continue;
      frag.tef = pred;
      frag.end = c.name;
      frag.fn = at.name;
      frag.tef_base = base_idx;
      frag.tef_step = step_idx;
      tef_found = true;
    } else if (ct.kind == Term::Kind::App && ct.args.size() == 1 &&
               ct.args[0].is_var() && at.is_var() &&
               at.name == ct.args[0].name) {
      if (!frag.fn.empty() && frag.fn != ct.name) continue;
      frag.fst = pred;
      frag.start = c.name;
      frag.fn = ct.name;
      frag.fst_base = base_idx;
      frag.fst_step = step_idx;
      fst_found = true;
    }
  }
  if (!tef_found || !fst_found) return std::nullopt;
  return frag;
}

Fragment require_fragment(const InductiveSystem& sys) {
  auto f = identify_fragment(sys);
  if (!f)
    throw OutOfFragment(
        "the definitions do not contain the counterexample predicate shapes");
  return *f;
}

// ---------------------------------------------------------- root-likeness

std::string RootLikeReport::render() const {
  static const char* what[3] = {
      "start unrelated to end in the antecedent congruence",
      "no succedent argument related to start",
      "unique shift: f^n(start) ~ f^m(start) only for n = m"};
  std::string out;
  for (int i = 0; i < 3; ++i) {
    out += std::to_string(i + 1) + ". " + what[i] + ": " +
           (condition[i] ? "pass" : "fail");
    if (!condition[i] && !witness[i].empty()) out += " (" + witness[i] + ")";
    out += "\n";
  }
  return out;
}

static void check_fragment_sequent(const Fragment& frag, const Sequent& seq) {
  auto check_linear = [&](const Term& t) {
    auto lin = atom_and_depth(t);
    if (!lin || (!lin->fn.empty() && lin->fn != frag.fn))
      throw OutOfFragment("non-linear term '" + t.render() + "'");
  };
  for (const Formula& f : seq.ante) {
    if (f.is_equality()) {
      check_linear(f.lhs());
      check_linear(f.rhs());
    } else if (f.pred == frag.tef && f.args.size() == 1) {
      check_linear(f.args[0]);
    } else {
      throw OutOfFragment("antecedent formula '" + f.text() +
                          "' outside the fragment");
    }
  }
  for (const Formula& f : seq.succ) {
    if (f.kind != Formula::Kind::Atom || f.pred != frag.fst ||
        f.args.size() != 1)
      throw OutOfFragment("succedent formula '" + f.text() +
                          "' outside the fragment");
    check_linear(f.args[0]);
  }
}

RootLikeReport is_root_like(const Fragment& frag, const Sequent& seq,
                            std::optional<int> shift_cap) {
  check_fragment_sequent(frag, seq);
  CongruenceIndex idx(seq.ante, shift_cap);
  Term start = frag.start_term(), end = frag.end_term();
  RootLikeReport report;

  report.condition[0] = !idx.related(start, end);
  if (!report.condition[0])
    report.witness[0] = frag.start + " related to " + frag.end;

  report.condition[1] = true;
  for (const Formula& f : seq.succ) {
    if (idx.related(f.args[0], start)) {
      report.condition[1] = false;
      report.witness[1] = f.text() + " has argument related to " + frag.start;
      break;
    }
  }

  // Condition 3 is decided exactly: it fails iff the atom-graph component of
  // `start` contains a cycle with nonzero net shift (which can always be
  // realized by shifting high enough), i.e. iff no consistent potential
  // exists on that component.
  report.condition[2] = true;
  {
    auto slin = atom_and_depth(start);
    int sid = idx.atom_id(*slin);
    if (sid >= 0) {
      int n = static_cast<int>(idx.atom_keys_.size());
      std::vector<int> pot(n, 0);
      std::vector<char> vis(n, 0);
      std::deque<int> frontier{sid};
      vis[sid] = 1;
      bool consistent = true;
      while (!frontier.empty() && consistent) {
        int a = frontier.front();
        frontier.pop_front();
        for (const auto& e : idx.edges_) {
          // edge f^pa(a) = f^pb(b): pot(b) - pot(a) must equal pa - pb
          int from = -1, to = -1, delta = 0;
          if (e.a == a) { from = e.a; to = e.b; delta = e.pa - e.pb; }
          else if (e.b == a) { from = e.b; to = e.a; delta = e.pb - e.pa; }
          else continue;
          int want = pot[from] + delta;
          if (!vis[to]) {
            vis[to] = 1;
            pot[to] = want;
            frontier.push_back(to);
          } else if (pot[to] != want) {
            consistent = false;
            break;
          }
        }
      }
      if (!consistent) {
        report.condition[2] = false;
        // concrete witness within the cap, for the report only
        int cap = idx.cap_for(1);
        bool found = false;
        for (int nn = 0; nn <= cap && !found; ++nn)
          for (int mm = nn + 1; mm <= cap && !found; ++mm)
            if (idx.equiv(linear_term(frag.fn, nn, start),
                          linear_term(frag.fn, mm, start))) {
              report.witness[2] = "f^" + std::to_string(nn) + "(" + frag.start +
                                  ") ~ f^" + std::to_string(mm) + "(" +
                                  frag.start + ")";
              found = true;
            }
        if (!found)
          report.witness[2] = "shift-pumping cycle through " + frag.start;
      }
    }
  }
  return report;
}

RootLikeReport is_root_like(const InductiveSystem& system, const Sequent& seq) {
  return is_root_like(require_fragment(system), seq);
}

}  // namespace cyclo
