#include "cyclo/fixtures.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace cyclo::fixtures {

const char* const kTefDefinitions =
    "const s;\n"
    "const e;\n"
    "fun nx 1;\n"
    "pred TeF 1 {\n"
    "  => TeF(e);\n"
    "  TeF(nx(x)) => TeF(x);\n"
    "}\n"
    "pred FsT 1 {\n"
    "  => FsT(s);\n"
    "  FsT(x) => FsT(nx(x));\n"
    "}\n";

const char* const kEvenOddDefinitions =
    "const z;\n"
    "fun sc 1;\n"
    "pred N 1 {\n"
    "  => N(z);\n"
    "  N(x) => N(sc(x));\n"
    "}\n"
    "pred Ev 1 {\n"
    "  => Ev(z);\n"
    "  Od(x) => Ev(sc(x));\n"
    "}\n"
    "pred Od 1 {\n"
    "  Ev(x) => Od(sc(x));\n"
    "}\n";

InductiveSystem tef_system() { return parse_definitions(kTefDefinitions); }

InductiveSystem even_odd_system() {
  return parse_definitions(kEvenOddDefinitions);
}

namespace {

// Small helper for writing proofs down literally: sequents, terms and
// formulas are given in concrete syntax against the system's signature.
struct Builder {
  const InductiveSystem& sys;
  PreProof p;

  Term t(const std::string& text) const {
    return parse_term(text, sys.signature);
  }
  Formula f(const std::string& text) const {
    return parse_formula(text, sys.signature);
  }
  std::vector<Formula> fs(std::initializer_list<const char*> texts) const {
    std::vector<Formula> out;
    for (const char* text : texts) out.push_back(f(text));
    return out;
  }
  void node(const std::string& addr, const std::string& seq,
            RuleApplication rule) {
    p.tree.nodes[parse_address(addr)] =
        Node{parse_sequent(seq, sys.signature), std::move(rule)};
  }
  void bud(const std::string& addr, const std::string& seq,
           const std::string& companion) {
    node(addr, seq, make_bud());
    p.companions[parse_address(addr)] = parse_address(companion);
  }
};

}  // namespace

Sequent counterexample_goal(const InductiveSystem& system) {
  return parse_sequent("TeF(s) |- FsT(e)", system.signature);
}

PreProof counterexample_proof(const InductiveSystem& system) {
  Builder b{system, {}};
  // Case split on TeF(s): either s = e, or s = y0 with TeF(nx(y0)).
  b.node("", "TeF(s) |- FsT(e)",
         make_case("TeF", b.f("TeF(s)"), {{}, {"y0"}}));

  // Base branch: rewrite FsT(e) to FsT(s) along s = e, close by FsT's base
  // production.
  b.node("0", "s = e |- FsT(e)",
         make_eqla("vx", "vy", b.t("s"), b.t("e"), {}, b.fs({"FsT(vy)"})));
  b.node("0.0", "s = e |- FsT(s)",
         make_unfold_right("FsT", 0, b.f("FsT(s)"), {}));

  // Step branch: cut in FsT(nx(y0)).
  b.node("1", "TeF(nx(y0)), s = y0 |- FsT(e)", make_cut(b.f("FsT(nx(y0))")));

  // Cut left premise: prove FsT(nx(y0)) from s = y0 by rewriting to
  // FsT(nx(s)) and unfolding twice.
  b.node("1.0", "TeF(nx(y0)), s = y0 |- FsT(e), FsT(nx(y0))",
         make_eqla("vx", "vy", b.t("s"), b.t("y0"), b.fs({"TeF(nx(y0))"}),
                   b.fs({"FsT(e)", "FsT(nx(vy))"})));
  b.node("1.0.0", "TeF(nx(y0)), s = y0 |- FsT(e), FsT(nx(s))",
         make_unfold_right("FsT", 1, b.f("FsT(nx(s))"), {{"x", b.t("s")}}));
  b.node("1.0.0.0", "TeF(nx(y0)), s = y0 |- FsT(e), FsT(s)",
         make_unfold_right("FsT", 0, b.f("FsT(s)"), {}));

  // Cut right premise: the equality s = y0 has done its job; dropping it
  // leaves the loop invariant H = TeF(nx(y0)), FsT(nx(y0)) |- FsT(e).
  b.node("1.1", "FsT(nx(y0)), TeF(nx(y0)), s = y0 |- FsT(e)", make_weak());
  b.node("1.1.0", "FsT(nx(y0)), TeF(nx(y0)) |- FsT(e)",
         make_case("TeF", b.f("TeF(nx(y0))"), {{}, {"y1"}}));

  // H base branch: nx(y0) = e turns FsT(nx(y0)) into FsT(e).
  b.node("1.1.0.0", "FsT(nx(y0)), nx(y0) = e |- FsT(e)",
         make_eqla("vx", "vy", b.t("nx(y0)"), b.t("e"), b.fs({"FsT(vx)"}),
                   b.fs({"FsT(e)"})));
  b.node("1.1.0.0.0", "FsT(e), nx(y0) = e |- FsT(e)", make_axiom());

  // H step branch: cut in FsT(nx(y1)) and loop.
  b.node("1.1.0.1", "FsT(nx(y0)), TeF(nx(y1)), nx(y0) = y1 |- FsT(e)",
         make_cut(b.f("FsT(nx(y1))")));
  b.node("1.1.0.1.0",
         "FsT(nx(y0)), TeF(nx(y1)), nx(y0) = y1 |- FsT(e), FsT(nx(y1))",
         make_eqla("vx", "vy", b.t("nx(y0)"), b.t("y1"),
                   b.fs({"FsT(nx(y0))", "TeF(nx(y1))"}),
                   b.fs({"FsT(e)", "FsT(nx(vy))"})));
  b.node("1.1.0.1.0.0",
         "FsT(nx(y0)), TeF(nx(y1)), nx(y0) = y1 |- FsT(e), FsT(nx(nx(y0)))",
         make_unfold_right("FsT", 1, b.f("FsT(nx(nx(y0)))"),
                           {{"x", b.t("nx(y0)")}}));
  b.node("1.1.0.1.0.0.0",
         "FsT(nx(y0)), TeF(nx(y1)), nx(y0) = y1 |- FsT(e), FsT(nx(y0))",
         make_axiom());
  b.node("1.1.0.1.1",
         "FsT(nx(y0)), FsT(nx(y1)), TeF(nx(y1)), nx(y0) = y1 |- FsT(e)",
         make_weak());
  b.node("1.1.0.1.1.0", "FsT(nx(y1)), TeF(nx(y1)) |- FsT(e)",
         make_subst({{"y0", b.t("y1")}}));
  b.bud("1.1.0.1.1.0.0", "FsT(nx(y0)), TeF(nx(y0)) |- FsT(e)", "1.1.0");
  return std::move(b.p);
}

PreProof gtc_fail_weak(const InductiveSystem& system) {
  Builder b{system, {}};
  b.node("", "TeF(s) |- FsT(e)", make_weak());
  b.bud("0", "TeF(s) |- FsT(e)", "");
  return std::move(b.p);
}

PreProof nonancestor_companion(const InductiveSystem& system) {
  Builder b{system, {}};
  b.node("", "TeF(s) |- TeF(s)", make_cut(b.f("TeF(s)")));
  b.node("0", "TeF(s) |- TeF(s)", make_axiom());
  b.bud("1", "TeF(s) |- TeF(s)", "0");
  return std::move(b.p);
}

Sequent provable_variant_goal(const InductiveSystem& system) {
  return parse_sequent("s = y, TeF(x) |- FsT(y)", system.signature);
}

PreProof provable_variant(const InductiveSystem& system) {
  Builder b{system, {}};
  b.node("", "s = y, TeF(x) |- FsT(y)",
         make_eqla("vx", "vy", b.t("s"), b.t("y"), b.fs({"TeF(x)"}),
                   b.fs({"FsT(vy)"})));
  b.node("0", "s = y, TeF(x) |- FsT(s)",
         make_unfold_right("FsT", 0, b.f("FsT(s)"), {}));
  return std::move(b.p);
}

Sequent even_odd_goal(const InductiveSystem& system) {
  return parse_sequent("N(x) |- Ev(x), Od(x)", system.signature);
}

PreProof even_odd_proof(const InductiveSystem& system) {
  Builder b{system, {}};
  b.node("", "N(x) |- Ev(x), Od(x)",
         make_case("N", b.f("N(x)"), {{}, {"y0"}}));
  b.node("0", "x = z |- Ev(x), Od(x)",
         make_eqla("vx", "vy", b.t("x"), b.t("z"), {},
                   b.fs({"Ev(vx)", "Od(x)"})));
  b.node("0.0", "x = z |- Ev(z), Od(x)",
         make_unfold_right("Ev", 0, b.f("Ev(z)"), {}));
  b.node("1", "N(y0), x = sc(y0) |- Ev(x), Od(x)",
         make_eqla("vx", "vy", b.t("x"), b.t("sc(y0)"), b.fs({"N(y0)"}),
                   b.fs({"Ev(vx)", "Od(x)"})));
  b.node("1.0", "N(y0), x = sc(y0) |- Ev(sc(y0)), Od(x)",
         make_eqla("vx", "vy", b.t("x"), b.t("sc(y0)"), b.fs({"N(y0)"}),
                   b.fs({"Ev(sc(y0))", "Od(vx)"})));
  b.node("1.0.0", "N(y0), x = sc(y0) |- Ev(sc(y0)), Od(sc(y0))",
         make_unfold_right("Ev", 1, b.f("Ev(sc(y0))"), {{"x", b.t("y0")}}));
  b.node("1.0.0.0", "N(y0), x = sc(y0) |- Od(y0), Od(sc(y0))",
         make_unfold_right("Od", 0, b.f("Od(sc(y0))"), {{"x", b.t("y0")}}));
  b.node("1.0.0.0.0", "N(y0), x = sc(y0) |- Ev(y0), Od(y0)", make_weak());
  b.node("1.0.0.0.0.0", "N(y0) |- Ev(y0), Od(y0)",
         make_subst({{"x", b.t("y0")}}));
  b.bud("1.0.0.0.0.0.0", "N(x) |- Ev(x), Od(x)", "");
  return std::move(b.p);
}

PreProof refute_candidate_simple(const InductiveSystem& system) {
  Builder b{system, {}};
  b.node("", "TeF(s) |- FsT(e)",
         make_case("TeF", b.f("TeF(s)"), {{}, {"y0"}}));
  b.node("0", "s = e |- FsT(e)",
         make_eqla("vx", "vy", b.t("s"), b.t("e"), {}, b.fs({"FsT(vy)"})));
  b.node("0.0", "s = e |- FsT(s)",
         make_unfold_right("FsT", 0, b.f("FsT(s)"), {}));
  b.node("1", "TeF(nx(y0)), s = y0 |- FsT(e)",
         make_eqla("vx", "vy", b.t("s"), b.t("y0"), b.fs({"TeF(nx(vy))"}),
                   b.fs({"FsT(e)"})));
  b.node("1.0", "TeF(nx(s)), s = y0 |- FsT(e)",
         make_eqla("vx", "vy", b.t("s"), b.t("y0"), b.fs({"TeF(nx(vx))"}),
                   b.fs({"FsT(e)"})));
  b.bud("1.0.0", "TeF(nx(y0)), s = y0 |- FsT(e)", "1");
  return std::move(b.p);
}

PreProof refute_candidate_switching(const InductiveSystem& system) {
  Builder b{system, {}};
  b.node("", "TeF(s) |- FsT(e)", make_subst({{"q", b.t("s")}}));
  b.node("0", "TeF(q) |- FsT(e)",
         make_case("TeF", b.f("TeF(q)"), {{}, {"y0"}}));
  b.node("0.0", "q = e |- FsT(e)",
         make_eqla("vx", "vy", b.t("q"), b.t("e"), {}, b.fs({"FsT(vy)"})));
  b.node("0.0.0", "q = e |- FsT(q)",
         make_eqla("vx", "vy", b.t("q"), b.t("e"), {}, b.fs({"FsT(vx)"})));
  b.bud("0.0.0.0", "q = e |- FsT(e)", "0.0");
  b.node("0.1", "TeF(nx(y0)), q = y0 |- FsT(e)",
         make_eqla("vx", "vy", b.t("q"), b.t("y0"), b.fs({"TeF(nx(vy))"}),
                   b.fs({"FsT(e)"})));
  b.node("0.1.0", "TeF(nx(q)), q = y0 |- FsT(e)",
         make_eqla("vx", "vy", b.t("q"), b.t("y0"), b.fs({"TeF(nx(vx))"}),
                   b.fs({"FsT(e)"})));
  b.bud("0.1.0.0", "TeF(nx(y0)), q = y0 |- FsT(e)", "0.1");
  return std::move(b.p);
}

PreProof refute_candidate_noncyclenormal(const InductiveSystem& system) {
  Builder b{system, {}};
  b.node("", "TeF(s) |- FsT(e)",
         make_case("TeF", b.f("TeF(s)"), {{}, {"y0"}}));
  b.node("0", "s = e |- FsT(e)", make_weak());
  b.node("0.0", "|- FsT(e)", make_weak());
  b.bud("0.0.0", "|- FsT(e)", "0.0");
  b.node("1", "TeF(nx(y0)), s = y0 |- FsT(e)", make_weak());
  b.bud("1.0", "|- FsT(e)", "0.0");
  return std::move(b.p);
}

}  // namespace cyclo::fixtures
