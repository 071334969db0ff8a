// cyclo: command-line front end for the cyclic-proof kernel.
//
// Subcommands: check (validity + global trace condition), normalize
// (cycle-normal form), search (bounded proof search), analyze (switching
// points, refutation, index reports), unfold (finite prefix of the tree
// unfolding), selftest (embedded fixtures).
//
// Exit codes: 0 success / proof found / report ok; 1 invalid proof, GTC
// failure, exhausted search, refuted or rejected candidate, failed report;
// 2 usage or parse errors. Reports never include timestamps, so identical
// inputs produce byte-identical output.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cyclo/analysis.hpp"
#include "cyclo/congruence.hpp"
#include "cyclo/cproof.hpp"
#include "cyclo/fixtures.hpp"
#include "cyclo/proofgraph.hpp"
#include "cyclo/search.hpp"
#include "cyclo/syntax.hpp"
#include "cyclo/trace.hpp"

namespace {

using namespace cyclo;

constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kUsage = 2;

// Bad paths and malformed flag values, as opposed to semantically rejected
// inputs (which exit 1).
struct UsageError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << content;
}

std::string show_address(const NodeAddress& a) {
  return a.empty() ? std::string("<root>") : render_address(a);
}

LoadedProof load(const std::string& proof_path, const std::string& defs_path) {
  if (!std::filesystem::exists(proof_path))
    throw UsageError("proof file '" + proof_path + "' does not exist");
  if (!defs_path.empty() && !std::filesystem::exists(defs_path))
    throw UsageError("definitions file '" + defs_path + "' does not exist");
  return load_cproof_file(proof_path, defs_path);
}

std::vector<NodeAddress> cut_addresses(const PreProof& p) {
  std::vector<NodeAddress> out;
  for (const auto& [addr, node] : p.tree.nodes)
    if (node.rule.kind() == RuleKind::Cut) out.push_back(addr);
  return out;
}

// ------------------------------------------------------------------ check

int cmd_check(const std::string& proof_path, const std::string& defs_path,
              const std::string& gtc_mode, bool require_cut_free) {
  LoadedProof lp = load(proof_path, defs_path);
  ValidityReport report = check_pre_proof(lp.system, lp.proof);
  if (!report.valid) {
    std::cout << report.render();
    return kRejected;
  }

  std::vector<NodeAddress> cuts = cut_addresses(lp.proof);
  if (require_cut_free && !cuts.empty()) {
    std::cout << "contains Cut at addresses ";
    for (size_t i = 0; i < cuts.size(); ++i) {
      if (i) std::cout << ", ";
      std::cout << "'" << render_address(cuts[i]) << "'";
    }
    std::cout << "\n";
    return kRejected;
  }

  bool holds;
  std::optional<Lasso> lasso;
  if (gtc_mode == "naive") {
    holds = naive_gtc_oracle(lp.system, lp.proof);
    // The walk enumeration gives a verdict only; unwind the witness from
    // the matrix closure when it fails.
    if (!holds) lasso = check_gtc(lp.system, lp.proof).counterexample;
  } else {
    GtcVerdict verdict = check_gtc(lp.system, lp.proof);
    holds = verdict.holds;
    lasso = verdict.counterexample;
  }

  std::cout << "valid, GTC " << (holds ? "holds" : "fails") << ", "
            << (cuts.empty() ? "cut-free" : "contains Cut") << "\n";
  std::cout << "GTC: " << (holds ? "PASS" : "FAIL") << "\n";
  if (!holds && lasso) std::cout << lasso->render();
  return holds ? kOk : kRejected;
}

// -------------------------------------------------------------- normalize

int cmd_normalize(const std::string& proof_path, const std::string& defs_path,
                  const std::string& out_path) {
  LoadedProof lp = load(proof_path, defs_path);
  ValidityReport report = check_pre_proof(lp.system, lp.proof);
  if (!report.valid) {
    std::cout << report.render();
    return kRejected;
  }

  PreProof normal = cycle_normalize(lp.system, lp.proof);
  std::string text = save_cproof(lp.system, normal);
  if (out_path.empty()) {
    std::cout << text;
    return kOk;
  }

  write_file(out_path, text);
  int depth = 2 * static_cast<int>(lp.proof.tree.nodes.size()) + 4;
  ValidityReport after = check_pre_proof(lp.system, normal);
  std::cout << "nodes: " << lp.proof.tree.nodes.size() << " -> "
            << normal.tree.nodes.size() << "\n";
  std::cout << "cycle-normal: " << (after.cycle_normal ? "yes" : "no") << "\n";
  std::cout << "unfolding preserved to depth " << depth << ": "
            << (unfoldings_equal_to_depth(lp.proof, normal, depth) ? "yes"
                                                                   : "no")
            << "\n";
  std::cout << "wrote '" << out_path << "'\n";
  return kOk;
}

// ----------------------------------------------------------------- search

int cmd_search(const std::string& defs_path, const std::string& goal_text,
               int max_depth, int max_term_depth, bool allow_cut,
               const std::string& emit_path) {
  if (!std::filesystem::exists(defs_path))
    throw UsageError("definitions file '" + defs_path + "' does not exist");
  InductiveSystem system = parse_definitions(read_file(defs_path));
  Sequent goal = parse_sequent(goal_text, system.signature);

  SearchBounds bounds;
  bounds.max_tree_depth = max_depth;
  bounds.max_term_depth = max_term_depth;
  bounds.allow_cut = allow_cut;
  if (allow_cut && identify_fragment(system))
    bounds.cut_formula_pool = default_cut_pool(system);

  SearchResult result = search_cut_free(system, goal, bounds);
  std::cout << result.stats.render() << "\n";

  if (result.status == SearchStatus::Exhausted) {
    std::cout << "exhausted: no proof within the searched bounds\n";
    std::cout << "note: this exhausts only the stated bounds; unprovability "
                 "at larger bounds is a metatheoretic claim, not a result of "
                 "this search\n";
    return kRejected;
  }

  const PreProof& proof = *result.proof;
  ValidityReport report = check_pre_proof(system, proof);
  GtcVerdict verdict = check_gtc(system, proof);
  std::cout << "proof found: " << proof.tree.nodes.size() << " nodes, "
            << (report.cut_free ? "cut-free" : "contains Cut")
            << ", valid: " << (report.valid ? "yes" : "no")
            << ", GTC: " << (verdict.holds ? "PASS" : "FAIL") << "\n";
  if (!emit_path.empty()) {
    write_file(emit_path, save_cproof(system, proof));
    std::cout << "wrote '" << emit_path << "'\n";
  }
  return (report.valid && verdict.holds) ? kOk : kRejected;
}

// ---------------------------------------------------------------- analyze

// All complete traces along `path`, following antecedent inductive atoms
// across consecutive edge trace pairs (mirrors the trace module's edge
// relation; capped to keep reports bounded).
std::vector<std::vector<Formula>> traces_along(
    const InductiveSystem& system, const PreProof& p,
    const std::vector<NodeAddress>& path, size_t cap = 4096) {
  std::vector<std::vector<Formula>> out;
  if (path.empty()) return out;
  std::vector<Formula> current;

  std::function<void(size_t)> extend = [&](size_t k) {
    if (out.size() >= cap) return;
    if (k + 1 == path.size()) {
      out.push_back(current);
      return;
    }
    NodeAddress at = resolve_unfolding(p, path[k]);
    int child = path[k + 1].back();
    for (const TracePair& pair : edge_trace_pairs(system, p, at, child)) {
      if (pair.from != current.back()) continue;
      current.push_back(pair.to);
      extend(k + 1);
      current.pop_back();
    }
  };

  const Sequent& first = p.tree.at(resolve_unfolding(p, path[0])).sequent;
  for (const Formula& f : first.ante) {
    if (!system.is_inductive_atom(f)) continue;
    current = {f};
    extend(0);
  }
  return out;
}

int report_switching(const InductiveSystem& system, const PreProof& p) {
  std::vector<NodeAddress> points = switching_points(system, p);
  std::cout << "switching points: " << points.size() << "\n";
  for (const NodeAddress& a : points)
    std::cout << "  '" << show_address(a) << "'\n";
  return kOk;
}

int report_refute(const InductiveSystem& system, const PreProof& p) {
  try {
    RefutationReport report = refute_cut_free_candidate(system, p);
    std::cout << report.render();
  } catch (const NotCutFree& e) {
    std::cout << "rejected: " << e.what() << "\n";
  } catch (const NotCycleNormal& e) {
    std::cout << "rejected: " << e.what() << "\n";
  } catch (const WrongRoot& e) {
    std::cout << "rejected: " << e.what() << "\n";
  }
  // Every outcome of the construction rejects the candidate as a cut-free
  // proof of the target sequent.
  return kRejected;
}

int report_index_transitions(const InductiveSystem& system, const PreProof& p) {
  int cap = 4 * static_cast<int>(p.tree.nodes.size());
  std::vector<NodeAddress> path = rightmost_path(system, p, {}, cap);
  std::cout << "rightmost path: " << path.size() << " nodes\n";
  std::cout << " ";
  for (const NodeAddress& a : path) std::cout << " " << show_address(a);
  std::cout << "\n";

  std::vector<std::vector<Formula>> traces = traces_along(system, p, path);
  std::cout << "traces along the path: " << traces.size() << "\n";
  if (traces.empty()) {
    std::cout << "no antecedent trace starts at the root\n";
    return kOk;
  }

  // Report the first violating trace when one exists, otherwise the first
  // longest trace.
  const std::vector<Formula>* pick = nullptr;
  std::optional<IndexTransitionReport> picked;
  for (const auto& trace : traces) {
    IndexTransitionReport r = check_index_transitions(system, p, path, trace);
    if (!r.ok) {
      pick = &trace;
      picked = std::move(r);
      break;
    }
    if (!pick || trace.size() > pick->size()) {
      pick = &trace;
      picked = std::move(r);
    }
  }
  std::cout << "trace length: " << pick->size() << "\n";
  std::cout << picked->render();
  return picked->ok ? kOk : kRejected;
}

int report_index(const InductiveSystem& system, const PreProof& p) {
  Fragment frag = require_fragment(system);
  const Sequent& root = p.tree.at({}).sequent;
  std::cout << "root: " << root.render() << "\n";
  CongruenceIndex index(root.ante);
  bool any = false;
  for (const Formula& f : root.ante) {
    if (f.is_equality() || f.pred != frag.tef || f.args.size() != 1) continue;
    any = true;
    std::cout << "index(" << f.render() << ") = "
              << index.index_of(f.args[0], frag.start_term()).render() << "\n";
  }
  if (!any)
    std::cout << "(no antecedent " << frag.tef << " atoms)\n";
  return kOk;
}

int report_rootlike(const InductiveSystem& system, const PreProof& p) {
  const Sequent& root = p.tree.at({}).sequent;
  std::cout << "root: " << root.render() << "\n";
  RootLikeReport report = is_root_like(system, root);
  std::cout << report.render();
  return report.root_like() ? kOk : kRejected;
}

int cmd_analyze(const std::string& proof_path, const std::string& defs_path,
                const std::string& report) {
  LoadedProof lp = load(proof_path, defs_path);
  if (report == "switching") return report_switching(lp.system, lp.proof);
  if (report == "refute") return report_refute(lp.system, lp.proof);
  if (report == "index-transitions")
    return report_index_transitions(lp.system, lp.proof);
  if (report == "index") return report_index(lp.system, lp.proof);
  return report_rootlike(lp.system, lp.proof);
}

// ----------------------------------------------------------------- unfold

int cmd_unfold(const std::string& proof_path, const std::string& defs_path,
               int depth) {
  LoadedProof lp = load(proof_path, defs_path);
  ValidityReport report = check_pre_proof(lp.system, lp.proof);
  if (!report.valid) {
    std::cout << report.render();
    return kRejected;
  }

  // Walk the unfolding: buds resolve to their companions, so the printed
  // rule and children at a bud address are the companion's.
  std::function<void(const NodeAddress&, int)> show =
      [&](const NodeAddress& at, int level) {
        std::optional<NodeAddress> inner = try_resolve_unfolding(lp.proof, at);
        if (!inner) return;
        const Node& node = lp.proof.tree.at(*inner);
        std::cout << std::string(2 * static_cast<size_t>(level), ' ')
                  << node.sequent.render() << "  [" << node.rule.name()
                  << "]\n";
        if (level == depth) return;
        int children = lp.proof.tree.child_count(*inner);
        NodeAddress next = at;
        for (int i = 0; i < children; ++i) {
          next.push_back(i);
          show(next, level + 1);
          next.pop_back();
        }
      };
  show({}, 0);
  return kOk;
}

// --------------------------------------------------------------- selftest

int cmd_selftest() {
  InductiveSystem system = fixtures::tef_system();
  PreProof proof = fixtures::counterexample_proof(system);

  ValidityReport report = check_pre_proof(system, proof);
  GtcVerdict verdict = check_gtc(system, proof);
  bool check_ok = report.valid && verdict.holds && !report.cut_free;
  std::cout << "embedded proof: "
            << (report.valid ? "valid" : "invalid") << ", GTC "
            << (verdict.holds ? "holds" : "fails") << ", "
            << (report.cut_free ? "cut-free" : "contains Cut")
            << (check_ok ? " ... ok" : " ... UNEXPECTED") << "\n";

  SearchBounds bounds;
  bounds.max_tree_depth = 6;
  bounds.max_term_depth = 6;
  SearchResult result =
      search_cut_free(system, fixtures::counterexample_goal(system), bounds);
  bool search_ok = result.status == SearchStatus::Exhausted &&
                   result.stats.shape_violations == 0;
  std::cout << "bounded cut-free search (depth 6): "
            << (result.status == SearchStatus::Exhausted ? "exhausted"
                                                         : "proof found")
            << (search_ok ? " ... ok" : " ... UNEXPECTED") << "\n";

  bool ok = check_ok && search_ok;
  std::cout << (ok ? "selftest passed" : "selftest FAILED") << "\n";
  return ok ? kOk : kRejected;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DuplicateDeclaration& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UndeclaredSymbol& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ArityMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BoundsTooSmall& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    // Semantic rejections: out-of-fragment inputs, unresolvable addresses,
    // cap overruns, refutation prerequisites.
    std::cerr << "error: " << e.what() << "\n";
    return kRejected;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cyclo: kernel, checker, and analysis toolkit for cyclic proofs over "
      "first-order inductive definitions"};
  app.require_subcommand(1);
  app.footer(
      "Environment: CYCLO_SHIFT_CAP overrides the congruence shift cap used\n"
      "by index and root-likeness computations.\n"
      "Exit codes: 0 success; 1 invalid proof, GTC failure, exhausted\n"
      "search, or refuted candidate; 2 usage or parse errors.");

  std::string proof_path, defs_path, out_path, emit_path, goal_text;
  std::string gtc_mode = "sizechange";
  std::string report_kind;
  int max_depth = 8, max_term_depth = 6, unfold_depth = 3;
  bool require_cut_free = false, allow_cut = false;

  CLI::App* check = app.add_subcommand(
      "check", "Validate a pre-proof and decide the global trace condition");
  check->add_option("--proof", proof_path, "Proof file (.cproof)")->required();
  check->add_option("--defs", defs_path,
                    "Definitions file (.ind); overrides the proof's embedded "
                    "definitions");
  check->add_option("--gtc", gtc_mode, "GTC decision procedure")
      ->check(CLI::IsMember({"sizechange", "naive"}))
      ->capture_default_str();
  check->add_flag("--require-cut-free", require_cut_free,
                  "Fail when the proof contains Cut");

  CLI::App* normalize = app.add_subcommand(
      "normalize", "Rewrite a valid pre-proof into cycle-normal form");
  normalize->add_option("--proof", proof_path, "Proof file (.cproof)")
      ->required();
  normalize->add_option("--defs", defs_path,
                        "Definitions file (.ind); overrides the proof's "
                        "embedded definitions");
  normalize->add_option("--out", out_path,
                        "Output file; without it the normalized proof is "
                        "written to standard output");

  CLI::App* search = app.add_subcommand(
      "search", "Bounded iterative-deepening proof search for a goal sequent");
  search->add_option("--defs", defs_path, "Definitions file (.ind)")
      ->required();
  search->add_option("--goal", goal_text, "Goal sequent, e.g. 'TeF(s) |- FsT(e)'")
      ->required();
  search->add_option("--max-depth", max_depth, "Maximum proof tree depth")
      ->capture_default_str();
  search
      ->add_option("--max-term-depth", max_term_depth,
                   "Maximum generated term depth")
      ->capture_default_str();
  search->add_flag("--allow-cut", allow_cut,
                   "Enable Cut with the built-in formula pool");
  search->add_option("--emit", emit_path, "Write a found proof to this file");

  CLI::App* analyze =
      app.add_subcommand("analyze", "Reports over a pre-proof");
  analyze->add_option("--proof", proof_path, "Proof file (.cproof)")
      ->required();
  analyze->add_option("--defs", defs_path,
                      "Definitions file (.ind); overrides the proof's "
                      "embedded definitions");
  analyze
      ->add_option("--report", report_kind,
                   "One of: switching, refute, index-transitions, index, "
                   "rootlike")
      ->required()
      ->check(CLI::IsMember(
          {"switching", "refute", "index-transitions", "index", "rootlike"}));

  CLI::App* unfold = app.add_subcommand(
      "unfold", "Print a depth-limited prefix of the tree unfolding");
  unfold->add_option("--proof", proof_path, "Proof file (.cproof)")
      ->required();
  unfold->add_option("--defs", defs_path,
                     "Definitions file (.ind); overrides the proof's "
                     "embedded definitions");
  unfold->add_option("--depth", unfold_depth, "Unfolding depth (address length)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  CLI::App* selftest = app.add_subcommand(
      "selftest", "Run the embedded fixtures through checker and search");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (check->parsed())
    return guarded([&] {
      return cmd_check(proof_path, defs_path, gtc_mode, require_cut_free);
    });
  if (normalize->parsed())
    return guarded([&] { return cmd_normalize(proof_path, defs_path, out_path); });
  if (search->parsed())
    return guarded([&] {
      return cmd_search(defs_path, goal_text, max_depth, max_term_depth,
                        allow_cut, emit_path);
    });
  if (analyze->parsed())
    return guarded([&] { return cmd_analyze(proof_path, defs_path, report_kind); });
  if (unfold->parsed())
    return guarded([&] { return cmd_unfold(proof_path, defs_path, unfold_depth); });
  if (selftest->parsed()) return guarded(cmd_selftest);
  return kUsage;
}
