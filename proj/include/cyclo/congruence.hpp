// Decision procedures for the smallest congruence generated by the
// equalities of an antecedent, over linear terms f^n(atom): equivalence,
// relatedness (equivalence up to prefixing), indices of inductive atoms
// relative to a base constant, and root-likeness of sequents.
#ifndef CYCLO_CONGRUENCE_HPP_
#define CYCLO_CONGRUENCE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "cyclo/syntax.hpp"

namespace cyclo {

struct CapExceeded : Error { using Error::Error; };

// Result of index_of. Bot: the two terms are not related at all.
// Undefined: related with more than one witnessed shift difference.
// CapExceeded: related, but no witness found within the shift cap.
struct IndexValue {
  enum class Kind { Bot, Value, Undefined, CapExceeded };
  Kind kind = Kind::Bot;
  int value = 0;

  static IndexValue bot() { return {Kind::Bot, 0}; }
  static IndexValue of(int v) { return {Kind::Value, v}; }
  static IndexValue undefined() { return {Kind::Undefined, 0}; }
  static IndexValue cap_exceeded() { return {Kind::CapExceeded, 0}; }

  bool operator==(const IndexValue& o) const {
    return kind == o.kind && (kind != Kind::Value || value == o.value);
  }
  std::string render() const;
};

// Test oracle: breadth-first enumeration of rewrite chains t ~ ... ~ u where
// each step rewrites a whole term by one Gamma equality shifted upward, and
// every intermediate term has depth <= cap. Implemented directly on terms,
// independently of CongruenceIndex.
bool chain_oracle(const std::vector<Formula>& gamma, const Term& t,
                  const Term& u, int cap);

struct Fragment;
struct RootLikeReport;
RootLikeReport is_root_like(const Fragment& frag, const Sequent& seq,
                            std::optional<int> shift_cap);

class CongruenceIndex {
 public:
  // Builds the index from the equalities in gamma (other formulas are
  // ignored). All equality sides must be linear over one unary function.
  // shift_cap: explicit cap; when absent the CYCLO_SHIFT_CAP environment
  // variable is consulted, and failing that a per-query default
  //   B = maxdepth(Gamma, query) + |equalities| * maxdepth(Gamma) + 2
  // is used (validated empirically against chain_oracle).
  explicit CongruenceIndex(const std::vector<Formula>& gamma,
                           std::optional<int> shift_cap = std::nullopt);

  // t ~ u in the congruence, decided by BFS over (atom, shift) states with
  // shifts capped; throws CapExceeded if the query itself is deeper than
  // the cap.
  bool equiv(const Term& t, const Term& u) const;

  // Exists n, m with f^n(t) ~ f^m(u); exact via connected components of the
  // atom graph (any atom-path can be realized by shifting high enough).
  bool related(const Term& t, const Term& u) const;

  // The index of t relative to base: Bot when unrelated, otherwise the
  // difference m - n over all witnessed f^n(t) ~ f^m(base) with n, m within
  // the cap.
  IndexValue index_of(const Term& t, const Term& base) const;

  int cap_for(int query_depth) const;
  int equalities() const { return static_cast<int>(edges_.size()); }

 private:
  struct Edge { int a, pa, b, pb; };  // f^pa(atom a) = f^pb(atom b)

  int atom_id(const LinearTerm& lin) const;       // -1 when unseen
  int intern_atom(const std::string& key);
  LinearTerm decompose(const Term& t) const;
  int find(int a) const;

  std::vector<std::string> atom_keys_;
  mutable std::vector<int> parent_;  // union-find over atoms
  std::vector<Edge> edges_;
  std::string fn_;  // the unary function of the fragment, "" if none seen
  int max_gamma_depth_ = 0;
  std::optional<int> explicit_cap_;

  friend RootLikeReport is_root_like(const Fragment& frag, const Sequent& seq,
                                     std::optional<int> shift_cap);
};

// The two inductive predicates of the counterexample instantiation, found
// by shape: tef has productions { => tef(end); tef(f(x)) => tef(x) } and
// fst has { => fst(start); fst(x) => fst(f(x)) }.
struct Fragment {
  std::string tef, fst, fn, start, end;
  // Production indices of the base (axiom-like) and step (self-recursive)
  // productions of each predicate, as declared.
  int tef_base = 0, tef_step = 1;
  int fst_base = 0, fst_step = 1;

  Term start_term() const { return Term::app(start); }
  Term end_term() const { return Term::app(end); }
};

// Identifies the fragment in a parsed system, or nullopt when the system
// does not contain the two predicate shapes.
std::optional<Fragment> identify_fragment(const InductiveSystem& system);
// As above but throws OutOfFragment.
Fragment require_fragment(const InductiveSystem& system);

struct RootLikeReport {
  // 1: start is not related to end in the antecedent congruence.
  // 2: no succedent fst-atom argument is related to start.
  // 3: f^n(start) ~ f^m(start) only when n = m.
  bool condition[3] = {false, false, false};
  std::string witness[3];  // failure explanations, empty when passing

  bool root_like() const {
    return condition[0] && condition[1] && condition[2];
  }
  std::string render() const;
};

// Checks the three root-likeness conditions of a sequent within the
// counterexample fragment. Throws OutOfFragment when the sequent leaves the
// fragment shapes (antecedent: equalities and tef-atoms; succedent:
// fst-atoms; all terms linear). The two-argument overload uses the default
// shift cap.
RootLikeReport is_root_like(const InductiveSystem& system, const Sequent& seq);
inline RootLikeReport is_root_like(const Fragment& frag, const Sequent& seq) {
  return is_root_like(frag, seq, std::nullopt);
}

}  // namespace cyclo

#endif  // CYCLO_CONGRUENCE_HPP_
