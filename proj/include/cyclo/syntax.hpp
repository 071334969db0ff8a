// Terms, formulas, sequents and inductive definition systems over a
// first-order signature, plus the .ind text format.
#ifndef CYCLO_SYNTAX_HPP_
#define CYCLO_SYNTAX_HPP_

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclo {

// ---------------------------------------------------------------- errors

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
  int line, col;
  ParseError(int line_, int col_, const std::string& msg)
      : Error("parse error at " + std::to_string(line_) + ":" +
              std::to_string(col_) + ": " + msg),
        line(line_), col(col_) {}
};

struct DuplicateDeclaration : Error { using Error::Error; };
struct UndeclaredSymbol : Error { using Error::Error; };
struct ArityMismatch : Error { using Error::Error; };
struct NonLinearTerm : Error { using Error::Error; };
struct OutOfFragment : Error { using Error::Error; };

// ----------------------------------------------------------------- terms

// A term is a variable or a function application; constants are arity-0
// applications. Whether a bare name is a variable or a constant is decided
// by the signature at parse time, never by the name itself.
struct Term {
  enum class Kind { Var, App };
  Kind kind = Kind::Var;
  std::string name;
  std::vector<Term> args;  // empty for variables and constants

  static Term var(std::string n) {
    Term t; t.kind = Kind::Var; t.name = std::move(n); return t;
  }
  static Term app(std::string f, std::vector<Term> as = {}) {
    Term t; t.kind = Kind::App; t.name = std::move(f); t.args = std::move(as);
    return t;
  }

  bool is_var() const { return kind == Kind::Var; }
  bool operator==(const Term& o) const {
    return kind == o.kind && name == o.name && args == o.args;
  }
  bool operator!=(const Term& o) const { return !(*this == o); }

  std::string render() const;
};

// Substitutions map variable names to terms and are applied simultaneously.
using Substitution = std::map<std::string, Term>;

Term substitute(const Term& t, const Substitution& theta);
void collect_free_vars(const Term& t, std::set<std::string>& out);

// Result of decomposing a term of the linear shape f^depth(atom), where f is
// a single unary function and the atom is a variable or constant. `fn` is
// empty iff depth == 0 (no function applied).
struct LinearTerm {
  std::string atom;
  bool atom_is_var = false;
  int depth = 0;
  std::string fn;  // the unary function, "" when depth == 0
};

// Decomposes t when only one unary function symbol is applied; returns
// nullopt for any other shape (mixed or non-unary applications).
std::optional<LinearTerm> atom_and_depth(const Term& t);

// Rebuilds f^depth(atom) from a decomposition.
Term linear_term(const std::string& fn, int depth, const Term& atom);

// -------------------------------------------------------------- formulas

// Equality t = u or predicate atom P(t1,...,tn). Formulas are ordered and
// compared by their rendered text, which is canonical within one signature.
struct Formula {
  enum class Kind { Equality, Atom };
  Kind kind = Kind::Equality;
  std::string pred;         // predicate name, "" for equalities
  std::vector<Term> args;   // equality: {lhs, rhs}

  Formula() = default;
  static Formula equality(Term lhs, Term rhs);
  static Formula atom(std::string pred, std::vector<Term> args);

  bool is_equality() const { return kind == Kind::Equality; }
  const Term& lhs() const { return args[0]; }
  const Term& rhs() const { return args[1]; }

  const std::string& text() const { return text_; }
  std::string render() const { return text_; }

  bool operator==(const Formula& o) const { return text_ == o.text_; }
  bool operator!=(const Formula& o) const { return text_ != o.text_; }
  bool operator<(const Formula& o) const { return text_ < o.text_; }

 private:
  std::string text_;
  void refresh();
};

Formula substitute(const Formula& f, const Substitution& theta);
std::set<std::string> free_vars(const Formula& f);

// -------------------------------------------------------------- sequents

// Finite sets of formulas on both sides; insertion of a duplicate is a
// no-op, so there is no contraction anywhere in the system. Formulas are
// kept sorted by rendered text, which makes rendering canonical.
struct Sequent {
  std::vector<Formula> ante;  // sorted, unique
  std::vector<Formula> succ;  // sorted, unique

  Sequent() = default;
  Sequent(std::vector<Formula> a, std::vector<Formula> s);

  bool operator==(const Sequent& o) const {
    return ante == o.ante && succ == o.succ;
  }
  bool operator!=(const Sequent& o) const { return !(*this == o); }
  bool operator<(const Sequent& o) const;

  bool ante_contains(const Formula& f) const;
  bool succ_contains(const Formula& f) const;
  // Γ' ⊆ Γ and Δ' ⊆ Δ, the Weak side condition.
  bool subsumes(const Sequent& smaller) const;

  Sequent with_ante(const Formula& f) const;    // insert into antecedent
  Sequent with_succ(const Formula& f) const;    // insert into succedent
  Sequent without_ante(const Formula& f) const;
  Sequent without_succ(const Formula& f) const;

  std::string render() const;
};

Sequent substitute(const Sequent& s, const Substitution& theta);
std::set<std::string> free_vars(const Sequent& s);
std::vector<Formula> sorted_unique(std::vector<Formula> fs);

// ------------------------------------------------------------ signatures

struct Signature {
  // Declaration order is preserved; constants are exactly the arity-0
  // functions.
  std::vector<std::pair<std::string, int>> functions;
  std::vector<std::pair<std::string, int>> ordinary_preds;
  std::vector<std::pair<std::string, int>> inductive_preds;

  void declare_function(const std::string& name, int arity);
  void declare_ordinary(const std::string& name, int arity);
  void declare_inductive(const std::string& name, int arity);

  std::optional<int> function_arity(const std::string& name) const;
  std::optional<int> ordinary_arity(const std::string& name) const;
  std::optional<int> inductive_arity(const std::string& name) const;
  bool declared(const std::string& name) const;
};

// A production (Q1,...,Qk, P1,...,Pm => P(t)). Assumptions are kept with
// ordinary-predicate atoms before inductive ones, preserving relative order.
struct Production {
  std::vector<Formula> assumptions;
  Formula conclusion;

  // Free variables in declaration order of first occurrence (conclusion
  // first, then assumptions); these are the x of the case rule.
  std::vector<std::string> variables() const;
};

struct InductiveSystem {
  Signature signature;
  std::vector<std::string> pred_order;  // inductive predicates, declared order
  std::map<std::string, std::vector<Production>> productions;

  const std::vector<Production>& productions_of(const std::string& pred) const;
  bool is_inductive_atom(const Formula& f) const;
  bool is_ordinary_atom(const Formula& f) const;
};

// ---------------------------------------------------------------- parsing

// Parses the .ind format:
//   const <name>;  fun <name> <arity>;  ordpred <name> <arity>;
//   pred <name> <arity> { [<atoms>] => <atom>; ... }
// '#' starts a line comment. Declarations may appear in any order and may
// be referenced before their declaration inside pred bodies.
InductiveSystem parse_definitions(const std::string& text);
std::string render_definitions(const InductiveSystem& system);

Term parse_term(const std::string& text, const Signature& sig);
Formula parse_formula(const std::string& text, const Signature& sig);
// f1, f2 |- g1, g2 ; either side may be empty.
Sequent parse_sequent(const std::string& text, const Signature& sig);

}  // namespace cyclo

#endif  // CYCLO_SYNTAX_HPP_
