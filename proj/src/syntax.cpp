#include "cyclo/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cyclo {

// ----------------------------------------------------------------- terms

std::string Term::render() const {
  if (args.empty()) return name;
  std::string out = name + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i].render();
  }
  return out + ")";
}

Term substitute(const Term& t, const Substitution& theta) {
  if (t.is_var()) {
    auto it = theta.find(t.name);
    return it == theta.end() ? t : it->second;
  }
  Term out = Term::app(t.name);
  out.args.reserve(t.args.size());
  for (const Term& a : t.args) out.args.push_back(substitute(a, theta));
  return out;
}

void collect_free_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name);
    return;
  }
  for (const Term& a : t.args) collect_free_vars(a, out);
}

std::optional<LinearTerm> atom_and_depth(const Term& t) {
  LinearTerm lin;
  const Term* cur = &t;
  while (!cur->is_var() && !cur->args.empty()) {
    if (cur->args.size() != 1) return std::nullopt;
    if (lin.fn.empty()) lin.fn = cur->name;
    else if (lin.fn != cur->name) return std::nullopt;
    ++lin.depth;
    cur = &cur->args[0];
  }
  lin.atom = cur->name;
  lin.atom_is_var = cur->is_var();
  return lin;
}

Term linear_term(const std::string& fn, int depth, const Term& atom) {
  Term t = atom;
  for (int i = 0; i < depth; ++i) t = Term::app(fn, {t});
  return t;
}

// -------------------------------------------------------------- formulas

void Formula::refresh() {
  if (kind == Kind::Equality) {
    text_ = args[0].render() + " = " + args[1].render();
  } else if (args.empty()) {
    text_ = pred + "()";
  } else {
    text_ = pred + "(";
    for (size_t i = 0; i < args.size(); ++i) {
      if (i) text_ += ",";
      text_ += args[i].render();
    }
    text_ += ")";
  }
}

Formula Formula::equality(Term lhs, Term rhs) {
  Formula f;
  f.kind = Kind::Equality;
  f.args = {std::move(lhs), std::move(rhs)};
  f.refresh();
  return f;
}

Formula Formula::atom(std::string pred, std::vector<Term> args) {
  Formula f;
  f.kind = Kind::Atom;
  f.pred = std::move(pred);
  f.args = std::move(args);
  f.refresh();
  return f;
}

Formula substitute(const Formula& f, const Substitution& theta) {
  std::vector<Term> args;
  args.reserve(f.args.size());
  for (const Term& a : f.args) args.push_back(substitute(a, theta));
  if (f.is_equality())
    return Formula::equality(std::move(args[0]), std::move(args[1]));
  return Formula::atom(f.pred, std::move(args));
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  for (const Term& a : f.args) collect_free_vars(a, out);
  return out;
}

// -------------------------------------------------------------- sequents

std::vector<Formula> sorted_unique(std::vector<Formula> fs) {
  std::sort(fs.begin(), fs.end());
  fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
  return fs;
}

Sequent::Sequent(std::vector<Formula> a, std::vector<Formula> s)
    : ante(sorted_unique(std::move(a))), succ(sorted_unique(std::move(s))) {}

bool Sequent::operator<(const Sequent& o) const {
  return render() < o.render();
}

static bool contains(const std::vector<Formula>& fs, const Formula& f) {
  return std::binary_search(fs.begin(), fs.end(), f);
}

bool Sequent::ante_contains(const Formula& f) const { return contains(ante, f); }
bool Sequent::succ_contains(const Formula& f) const { return contains(succ, f); }

bool Sequent::subsumes(const Sequent& smaller) const {
  return std::includes(ante.begin(), ante.end(), smaller.ante.begin(),
                       smaller.ante.end()) &&
         std::includes(succ.begin(), succ.end(), smaller.succ.begin(),
                       smaller.succ.end());
}

static std::vector<Formula> inserted(std::vector<Formula> fs, const Formula& f) {
  auto it = std::lower_bound(fs.begin(), fs.end(), f);
  if (it == fs.end() || *it != f) fs.insert(it, f);
  return fs;
}

static std::vector<Formula> removed(std::vector<Formula> fs, const Formula& f) {
  auto it = std::lower_bound(fs.begin(), fs.end(), f);
  if (it != fs.end() && *it == f) fs.erase(it);
  return fs;
}

Sequent Sequent::with_ante(const Formula& f) const {
  Sequent s = *this; s.ante = inserted(std::move(s.ante), f); return s;
}
Sequent Sequent::with_succ(const Formula& f) const {
  Sequent s = *this; s.succ = inserted(std::move(s.succ), f); return s;
}
Sequent Sequent::without_ante(const Formula& f) const {
  Sequent s = *this; s.ante = removed(std::move(s.ante), f); return s;
}
Sequent Sequent::without_succ(const Formula& f) const {
  Sequent s = *this; s.succ = removed(std::move(s.succ), f); return s;
}

static std::string join(const std::vector<Formula>& fs) {
  std::string out;
  for (size_t i = 0; i < fs.size(); ++i) {
    if (i) out += ", ";
    out += fs[i].text();
  }
  return out;
}

std::string Sequent::render() const {
  std::string a = join(ante), s = join(succ);
  if (a.empty()) return "|- " + s;
  if (s.empty()) return a + " |-";
  return a + " |- " + s;
}

Sequent substitute(const Sequent& s, const Substitution& theta) {
  std::vector<Formula> a, c;
  a.reserve(s.ante.size());
  c.reserve(s.succ.size());
  for (const Formula& f : s.ante) a.push_back(substitute(f, theta));
  for (const Formula& f : s.succ) c.push_back(substitute(f, theta));
  return Sequent(std::move(a), std::move(c));
}

std::set<std::string> free_vars(const Sequent& s) {
  std::set<std::string> out;
  for (const Formula& f : s.ante)
    for (const Term& a : f.args) collect_free_vars(a, out);
  for (const Formula& f : s.succ)
    for (const Term& a : f.args) collect_free_vars(a, out);
  return out;
}

// ------------------------------------------------------------ signatures

static std::optional<int> find_arity(
    const std::vector<std::pair<std::string, int>>& decls,
    const std::string& name) {
  for (const auto& [n, a] : decls)
    if (n == name) return a;
  return std::nullopt;
}

void Signature::declare_function(const std::string& name, int arity) {
  if (declared(name)) throw DuplicateDeclaration("duplicate declaration of '" + name + "'");
  functions.emplace_back(name, arity);
}
void Signature::declare_ordinary(const std::string& name, int arity) {
  if (declared(name)) throw DuplicateDeclaration("duplicate declaration of '" + name + "'");
  ordinary_preds.emplace_back(name, arity);
}
void Signature::declare_inductive(const std::string& name, int arity) {
  if (declared(name)) throw DuplicateDeclaration("duplicate declaration of '" + name + "'");
  inductive_preds.emplace_back(name, arity);
}

std::optional<int> Signature::function_arity(const std::string& name) const {
  return find_arity(functions, name);
}
std::optional<int> Signature::ordinary_arity(const std::string& name) const {
  return find_arity(ordinary_preds, name);
}
std::optional<int> Signature::inductive_arity(const std::string& name) const {
  return find_arity(inductive_preds, name);
}
bool Signature::declared(const std::string& name) const {
  return function_arity(name) || ordinary_arity(name) || inductive_arity(name);
}

std::vector<std::string> Production::variables() const {
  std::vector<std::string> order;
  std::set<std::string> seen;
  auto scan = [&](const Term& t) {
    auto rec = [&](auto&& self, const Term& u) -> void {
      if (u.is_var()) {
        if (seen.insert(u.name).second) order.push_back(u.name);
        return;
      }
      for (const Term& a : u.args) self(self, a);
    };
    rec(rec, t);
  };
  for (const Term& a : conclusion.args) scan(a);
  for (const Formula& f : assumptions)
    for (const Term& a : f.args) scan(a);
  return order;
}

const std::vector<Production>& InductiveSystem::productions_of(
    const std::string& pred) const {
  auto it = productions.find(pred);
  if (it == productions.end())
    throw UndeclaredSymbol("no inductive predicate '" + pred + "'");
  return it->second;
}

bool InductiveSystem::is_inductive_atom(const Formula& f) const {
  return f.kind == Formula::Kind::Atom &&
         signature.inductive_arity(f.pred).has_value();
}

bool InductiveSystem::is_ordinary_atom(const Formula& f) const {
  return f.kind == Formula::Kind::Atom &&
         signature.ordinary_arity(f.pred).has_value();
}

// ---------------------------------------------------------------- lexer

namespace {

struct Token {
  enum class Kind { Name, Number, Sym, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 0, col = 0;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  void advance() {
    if (pos < src.size() && src[pos] == '\n') { ++line; col = 1; }
    else ++col;
    ++pos;
  }

  void skip_ws() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token next() {
    skip_ws();
    Token t;
    t.line = line;
    t.col = col;
    if (pos >= src.size()) return t;
    char c = src[pos];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Kind::Name;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) ||
              src[pos] == '_' || src[pos] == '\'')) {
        t.text += src[pos];
        advance();
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::Number;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
        t.text += src[pos];
        advance();
      }
      return t;
    }
    t.kind = Token::Kind::Sym;
    // two-character symbols first
    if (pos + 1 < src.size()) {
      std::string two = src.substr(pos, 2);
      if (two == "=>" || two == "|-") {
        t.text = two;
        advance();
        advance();
        return t;
      }
    }
    t.text = std::string(1, c);
    advance();
    return t;
  }
};

struct TokenStream {
  std::vector<Token> toks;
  size_t i = 0;

  explicit TokenStream(const std::string& src) {
    Lexer lx(src);
    for (;;) {
      Token t = lx.next();
      toks.push_back(t);
      if (t.kind == Token::Kind::End) break;
    }
  }

  const Token& peek() const { return toks[i]; }
  Token take() { return toks[i + 1 < toks.size() ? i++ : i]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(t.line, t.col, msg);
  }

  void expect_sym(const std::string& s) {
    const Token& t = peek();
    if (t.kind != Token::Kind::Sym || t.text != s)
      fail("expected '" + s + "', got '" + t.text + "'");
    take();
  }

  bool accept_sym(const std::string& s) {
    const Token& t = peek();
    if (t.kind == Token::Kind::Sym && t.text == s) {
      take();
      return true;
    }
    return false;
  }

  std::string expect_name(const std::string& what) {
    const Token& t = peek();
    if (t.kind != Token::Kind::Name)
      fail("expected " + what + ", got '" + t.text + "'");
    return take().text;
  }

  int expect_number() {
    const Token& t = peek();
    if (t.kind != Token::Kind::Number)
      fail("expected arity, got '" + t.text + "'");
    return std::stoi(take().text);
  }
};

// Terms and formulas are parsed against a signature: a bare name declared as
// an arity-0 function is a constant, any other undeclared bare name is a
// variable.
struct FormulaParser {
  TokenStream& ts;
  const Signature& sig;

  Term term() {
    const Token& t = ts.peek();
    if (t.kind != Token::Kind::Name) ts.fail("expected term");
    std::string name = ts.take().text;
    if (ts.accept_sym("(")) {
      std::vector<Term> args;
      if (!ts.accept_sym(")")) {
        do args.push_back(term());
        while (ts.accept_sym(","));
        ts.expect_sym(")");
      }
      auto ar = sig.function_arity(name);
      if (!ar)
        throw UndeclaredSymbol("undeclared function '" + name + "'");
      if (*ar != static_cast<int>(args.size()))
        throw ArityMismatch("function '" + name + "' takes " +
                            std::to_string(*ar) + " arguments, got " +
                            std::to_string(args.size()));
      return Term::app(name, std::move(args));
    }
    if (auto ar = sig.function_arity(name)) {
      if (*ar != 0)
        throw ArityMismatch("function '" + name + "' used without arguments");
      return Term::app(name);
    }
    if (sig.ordinary_arity(name) || sig.inductive_arity(name))
      throw UndeclaredSymbol("predicate '" + name + "' used as a term");
    return Term::var(name);
  }

  Formula formula() {
    const Token& t = ts.peek();
    if (t.kind != Token::Kind::Name) ts.fail("expected formula");
    // predicate atom?
    std::string name = t.text;
    bool is_pred = sig.ordinary_arity(name) || sig.inductive_arity(name);
    if (is_pred) {
      ts.take();
      std::vector<Term> args;
      ts.expect_sym("(");
      if (!ts.accept_sym(")")) {
        do args.push_back(term());
        while (ts.accept_sym(","));
        ts.expect_sym(")");
      }
      int ar = sig.ordinary_arity(name) ? *sig.ordinary_arity(name)
                                        : *sig.inductive_arity(name);
      if (ar != static_cast<int>(args.size()))
        throw ArityMismatch("predicate '" + name + "' takes " +
                            std::to_string(ar) + " arguments, got " +
                            std::to_string(args.size()));
      return Formula::atom(name, std::move(args));
    }
    Term lhs = term();
    ts.expect_sym("=");
    Term rhs = term();
    return Formula::equality(std::move(lhs), std::move(rhs));
  }
};

}  // namespace

// ---------------------------------------------------------------- parser

InductiveSystem parse_definitions(const std::string& text) {
  InductiveSystem sys;
  // First pass: collect every declaration so pred bodies may forward
  // reference predicates declared later.
  {
    TokenStream ts(text);
    while (!ts.at_end()) {
      std::string kw = ts.expect_name("declaration keyword");
      if (kw == "const") {
        std::string name = ts.expect_name("constant name");
        ts.expect_sym(";");
        sys.signature.declare_function(name, 0);
      } else if (kw == "fun") {
        std::string name = ts.expect_name("function name");
        int arity = ts.expect_number();
        ts.expect_sym(";");
        sys.signature.declare_function(name, arity);
      } else if (kw == "ordpred") {
        std::string name = ts.expect_name("predicate name");
        int arity = ts.expect_number();
        ts.expect_sym(";");
        sys.signature.declare_ordinary(name, arity);
      } else if (kw == "pred") {
        std::string name = ts.expect_name("predicate name");
        int arity = ts.expect_number();
        sys.signature.declare_inductive(name, arity);
        sys.pred_order.push_back(name);
        sys.productions[name];
        ts.expect_sym("{");
        int depth = 1;
        while (depth > 0) {
          if (ts.at_end()) ts.fail("unterminated pred block");
          Token t = ts.take();
          if (t.kind == Token::Kind::Sym && t.text == "{") ++depth;
          if (t.kind == Token::Kind::Sym && t.text == "}") --depth;
        }
      } else {
        throw ParseError(ts.peek().line, ts.peek().col,
                         "unknown declaration '" + kw + "'");
      }
    }
  }
  // Second pass: parse production bodies with the full signature in scope.
  {
    TokenStream ts(text);
    FormulaParser fp{ts, sys.signature};
    while (!ts.at_end()) {
      std::string kw = ts.expect_name("declaration keyword");
      if (kw == "const") { ts.take(); ts.expect_sym(";"); continue; }
      if (kw == "fun" || kw == "ordpred") {
        ts.take(); ts.take(); ts.expect_sym(";");
        continue;
      }
      // pred
      std::string name = ts.expect_name("predicate name");
      ts.expect_number();
      ts.expect_sym("{");
      while (!ts.accept_sym("}")) {
        Production prod;
        std::vector<Formula> ordinary, inductive;
        if (!ts.accept_sym("=>")) {
          do {
            Formula f = fp.formula();
            if (sys.is_ordinary_atom(f)) ordinary.push_back(f);
            else if (sys.is_inductive_atom(f)) inductive.push_back(f);
            else
              throw ParseError(ts.peek().line, ts.peek().col,
                               "production assumptions must be predicate atoms");
          } while (ts.accept_sym(","));
          ts.expect_sym("=>");
        }
        Formula conclusion = fp.formula();
        if (conclusion.kind != Formula::Kind::Atom || conclusion.pred != name)
          throw ParseError(ts.peek().line, ts.peek().col,
                           "production conclusion must be an atom of '" + name + "'");
        ts.expect_sym(";");
        prod.assumptions = std::move(ordinary);
        prod.assumptions.insert(prod.assumptions.end(), inductive.begin(),
                                inductive.end());
        prod.conclusion = std::move(conclusion);
        sys.productions[name].push_back(std::move(prod));
      }
    }
  }
  return sys;
}

std::string render_definitions(const InductiveSystem& sys) {
  std::ostringstream out;
  for (const auto& [name, arity] : sys.signature.functions) {
    if (arity == 0) out << "const " << name << ";\n";
    else out << "fun " << name << " " << arity << ";\n";
  }
  for (const auto& [name, arity] : sys.signature.ordinary_preds)
    out << "ordpred " << name << " " << arity << ";\n";
  for (const std::string& pred : sys.pred_order) {
    auto arity = sys.signature.inductive_arity(pred);
    out << "pred " << pred << " " << *arity << " {\n";
    for (const Production& p : sys.productions.at(pred)) {
      out << "  ";
      for (size_t i = 0; i < p.assumptions.size(); ++i) {
        if (i) out << ", ";
        out << p.assumptions[i].text();
      }
      if (!p.assumptions.empty()) out << " ";
      out << "=> " << p.conclusion.text() << ";\n";
    }
    out << "}\n";
  }
  return out.str();
}

Term parse_term(const std::string& text, const Signature& sig) {
  TokenStream ts(text);
  FormulaParser fp{ts, sig};
  Term t = fp.term();
  if (!ts.at_end()) ts.fail("trailing input after term");
  return t;
}

Formula parse_formula(const std::string& text, const Signature& sig) {
  TokenStream ts(text);
  FormulaParser fp{ts, sig};
  Formula f = fp.formula();
  if (!ts.at_end()) ts.fail("trailing input after formula");
  return f;
}

Sequent parse_sequent(const std::string& text, const Signature& sig) {
  TokenStream ts(text);
  FormulaParser fp{ts, sig};
  std::vector<Formula> ante, succ;
  if (!ts.accept_sym("|-")) {
    do ante.push_back(fp.formula());
    while (ts.accept_sym(","));
    ts.expect_sym("|-");
  }
  if (!ts.at_end()) {
    do succ.push_back(fp.formula());
    while (ts.accept_sym(","));
  }
  if (!ts.at_end()) ts.fail("trailing input after sequent");
  return Sequent(std::move(ante), std::move(succ));
}

}  // namespace cyclo
