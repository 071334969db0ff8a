#include "cyclo/analysis.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cyclo {

namespace {

bool is_case_on(const Node& node, const std::string& pred) {
  return node.rule.kind() == RuleKind::Case &&
         node.rule.as<CaseArgs>().pred == pred;
}

}  // namespace

bool is_switching_point(const InductiveSystem& system, const PreProof& p,
                        const NodeAddress& inner) {
  const Fragment frag = require_fragment(system);
  const Node& node = p.tree.at(inner);
  if (!is_case_on(node, frag.tef)) return false;
  const Formula& principal = node.rule.as<CaseArgs>().principal;
  if (principal.args.size() != 1) return false;
  CongruenceIndex idx(node.sequent.ante);
  // The index is bot exactly when the argument is unrelated to start; this
  // is decided exactly (no shift cap involved).
  return !idx.related(principal.args[0], frag.start_term());
}

std::vector<NodeAddress> switching_points(const InductiveSystem& system,
                                          const PreProof& p) {
  std::vector<NodeAddress> out;
  for (const auto& [addr, node] : p.tree.nodes) {
    if (p.is_bud(addr)) continue;
    if (is_switching_point(system, p, addr)) out.push_back(addr);
  }
  return out;
}

// ------------------------------------------------------------------ paths

PathCheck is_unfinished_path(const InductiveSystem& system, const PreProof& p,
                             const std::vector<NodeAddress>& path) {
  const Fragment frag = require_fragment(system);
  PathCheck res;
  auto fail = [&](int pos, std::string detail) {
    res.ok = false;
    res.position = pos;
    res.detail = std::move(detail);
    return res;
  };
  if (path.empty()) return fail(0, "empty path");
  auto start = try_resolve_unfolding(p, path[0]);
  if (!start) return fail(0, "path leaves the unfolding");
  RootLikeReport root_like = is_root_like(system, p.tree.at(*start).sequent);
  if (!root_like.root_like()) {
    return fail(0, "start sequent is not root-like:\n" + root_like.render());
  }
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    if (path[k + 1].size() != path[k].size() + 1 || !is_prefix(path[k], path[k + 1])) {
      return fail(static_cast<int>(k + 1),
                  "path step must extend the previous address by one child");
    }
    auto rep = try_resolve_unfolding(p, path[k]);
    if (!rep) return fail(static_cast<int>(k), "path leaves the unfolding");
    NodeAddress tree_child = *rep;
    tree_child.push_back(path[k + 1].back());
    if (!p.tree.contains(tree_child)) {
      return fail(static_cast<int>(k + 1), "no such premise at '" +
                  render_address(*rep) + "'");
    }
    const Node& node = p.tree.at(*rep);
    if (is_case_on(node, frag.tef) && path[k + 1].back() == frag.tef_base &&
        !is_switching_point(system, p, *rep)) {
      return fail(static_cast<int>(k),
                  "left case assumption taken at '" + render_address(*rep) +
                  "', which is not a switching point");
    }
  }
  return res;
}

std::vector<NodeAddress> rightmost_path(const InductiveSystem& system,
                                        const PreProof& p,
                                        const NodeAddress& start, int max_len) {
  const Fragment frag = require_fragment(system);
  std::vector<NodeAddress> path;
  NodeAddress cur = start;
  while (static_cast<int>(path.size()) < max_len) {
    NodeAddress rep = resolve_unfolding(p, cur);
    path.push_back(cur);
    const Node& node = p.tree.at(rep);
    int child = -1;
    switch (node.rule.kind()) {
      case RuleKind::Axiom:
      case RuleKind::EqR:
        return path;  // zero-premise rule ends the path
      case RuleKind::Weak:
      case RuleKind::Subst:
      case RuleKind::EqLa:
        child = 0;
        break;
      case RuleKind::UnfoldRight: {
        const auto& a = node.rule.as<UnfoldRightArgs>();
        if (a.pred != frag.fst) {
          throw OutOfFragment("right unfolding of '" + a.pred + "' at '" +
                              render_address(rep) + "' is outside the fragment");
        }
        if (p.tree.child_count(rep) == 0) return path;  // base production
        child = 0;
        break;
      }
      case RuleKind::Case: {
        const auto& a = node.rule.as<CaseArgs>();
        if (a.pred != frag.tef) {
          throw OutOfFragment("case analysis on '" + a.pred + "' at '" +
                              render_address(rep) + "' is outside the fragment");
        }
        child = frag.tef_step;  // the right assumption
        break;
      }
      case RuleKind::Cut:
        throw OutOfFragment("cut at '" + render_address(rep) +
                            "' is outside the cut-free fragment");
      case RuleKind::Bud:
        throw Error("unreachable: buds are resolved");
    }
    cur.push_back(child);
  }
  return path;
}

// -------------------------------------------------------- index transitions

std::string IndexTransitionReport::render() const {
  std::ostringstream out;
  out << "index transitions: " << (ok ? "ok" : "violated") << "\n";
  for (size_t i = 0; i < indices.size(); ++i) {
    out << "  d[" << i << "] = " << indices[i].render() << "\n";
  }
  if (!ok) {
    out << "  at position " << position << " (" << clause << "): " << detail << "\n";
  }
  return out.str();
}

IndexTransitionReport check_index_transitions(const InductiveSystem& system,
                                              const PreProof& p,
                                              const std::vector<NodeAddress>& path,
                                              const std::vector<Formula>& trace) {
  const Fragment frag = require_fragment(system);
  IndexTransitionReport rep;
  auto fail = [&](int pos, std::string clause, std::string detail) {
    rep.ok = false;
    rep.position = pos;
    rep.clause = std::move(clause);
    rep.detail = std::move(detail);
    return rep;
  };

  TraceCheckResult tc = verify_trace(system, p, path, trace);
  if (!tc.ok) {
    return fail(tc.error_position, "not-a-trace", tc.detail);
  }
  std::set<int> progress_at(tc.progress_positions.begin(), tc.progress_positions.end());

  std::vector<NodeAddress> reps(path.size());
  for (size_t k = 0; k < path.size(); ++k) {
    reps[k] = resolve_unfolding(p, path[k]);
    const Node& node = p.tree.at(reps[k]);
    if (trace[k].pred != frag.tef || trace[k].args.size() != 1) {
      return fail(static_cast<int>(k), "not-a-tef-atom",
                  "index transitions are defined for '" + frag.tef + "' traces");
    }
    CongruenceIndex idx(node.sequent.ante);
    rep.indices.push_back(idx.index_of(trace[k].args[0], frag.start_term()));
  }

  for (size_t k = 0; k + 1 < path.size(); ++k) {
    const IndexValue& d = rep.indices[k];
    const IndexValue& d_next = rep.indices[k + 1];
    if (d.kind == IndexValue::Kind::Undefined ||
        d.kind == IndexValue::Kind::CapExceeded) {
      return fail(static_cast<int>(k),
                  d.kind == IndexValue::Kind::Undefined ? "index-undefined"
                                                        : "shift-cap-exceeded",
                  d.kind == IndexValue::Kind::Undefined
                      ? "the traced argument relates to start at several shifts; "
                        "the path is not root-like here"
                      : "raise CYCLO_SHIFT_CAP to compute this index");
    }
    auto expect = [&](std::initializer_list<IndexValue> allowed,
                      const std::string& clause) -> bool {
      for (const auto& v : allowed) {
        if (d_next == v) return true;
      }
      std::string allowed_text;
      for (const auto& v : allowed) {
        if (!allowed_text.empty()) allowed_text += " or ";
        allowed_text += v.render();
      }
      fail(static_cast<int>(k + 1), clause,
           "expected d = " + allowed_text + ", found " + d_next.render());
      return false;
    };

    if (d.kind == IndexValue::Kind::Bot) {
      if (!expect({IndexValue::bot()}, "bot-absorbing")) return rep;
      continue;
    }
    const Node& node = p.tree.at(reps[k]);
    switch (node.rule.kind()) {
      case RuleKind::Weak:
      case RuleKind::Subst:
        if (!expect({d, IndexValue::bot()}, "weak-subst")) return rep;
        break;
      case RuleKind::EqLa:
        if (!expect({d}, "equality-rewrite")) return rep;
        break;
      case RuleKind::UnfoldRight:
        if (node.rule.as<UnfoldRightArgs>().pred != frag.fst) {
          return fail(static_cast<int>(k), "outside-fragment",
                      "right unfolding of a non-" + frag.fst + " predicate");
        }
        if (!expect({d}, "fst-unfold")) return rep;
        break;
      case RuleKind::Case: {
        if (node.rule.as<CaseArgs>().pred != frag.tef) {
          return fail(static_cast<int>(k), "outside-fragment",
                      "case analysis on a non-" + frag.tef + " predicate");
        }
        if (progress_at.count(static_cast<int>(k))) {
          if (!expect({IndexValue::of(d.value + 1)}, "case-progress")) return rep;
        } else {
          if (!expect({d}, "case-non-progress")) return rep;
        }
        break;
      }
      default:
        return fail(static_cast<int>(k), "outside-fragment",
                    "rule '" + node.rule.name() + "' has no index-transition clause");
    }
  }
  return rep;
}

// ----------------------------------------------------------------- refute

std::string RefutationReport::render() const {
  std::ostringstream out;
  switch (outcome) {
    case RefutationOutcome::ContradictionFound:
      out << "outcome: contradiction found\n";
      break;
    case RefutationOutcome::InputInvalid:
      out << "outcome: input invalid\nreason: " << reason << "\n";
      break;
    case RefutationOutcome::GtcFailed:
      out << "outcome: global trace condition fails\n";
      break;
  }
  out << "switching points located: " << sigma_tildes.size() << "\n";
  for (const auto& a : sigma_tildes) {
    out << "  height " << a.size() << ": '" << render_address(a) << "'\n";
  }
  if (lasso) out << lasso->render();
  return out.str();
}

RefutationReport refute_cut_free_candidate(const InductiveSystem& system,
                                           const PreProof& p) {
  const Fragment frag = require_fragment(system);
  RefutationReport rep;

  if (!p.tree.contains({})) {
    rep.reason = "no root node";
    return rep;
  }
  Sequent want;
  want = want.with_ante(Formula::atom(frag.tef, {frag.start_term()}));
  want = want.with_succ(Formula::atom(frag.fst, {frag.end_term()}));
  const Sequent& root = p.tree.at({}).sequent;
  if (root.ante != want.ante || root.succ != want.succ) {
    throw WrongRoot("candidate must prove '" + want.render() + "', found '" +
                    root.render() + "'");
  }

  ValidityReport validity = check_pre_proof(system, p);
  if (!validity.cut_free) {
    throw NotCutFree("candidate contains a cut");
  }
  if (!validity.cycle_normal) {
    throw NotCycleNormal("candidate is not cycle-normal");
  }
  if (!validity.valid) {
    rep.reason = "pre-proof invalid: [" + validity.issues[0].code + "] at '" +
                 render_address(validity.issues[0].address) + "': " +
                 validity.issues[0].detail;
    return rep;
  }
  std::vector<Issue> shape = fragment_shape_violations(system, p);
  if (!shape.empty()) {
    rep.reason = "outside the cut-free fragment: [" + shape[0].code + "] at '" +
                 render_address(shape[0].address) + "': " + shape[0].detail;
    return rep;
  }

  // Deterministic rightmost successor on inner tree addresses, following
  // buds to their companions; nullopt at zero-premise rules.
  auto successor_child = [&](const NodeAddress& at) -> std::optional<int> {
    const Node& node = p.tree.at(at);
    switch (node.rule.kind()) {
      case RuleKind::Axiom:
      case RuleKind::EqR:
        return std::nullopt;
      case RuleKind::Weak:
      case RuleKind::Subst:
      case RuleKind::EqLa:
        return 0;
      case RuleKind::UnfoldRight:
        if (p.tree.child_count(at) == 0) return std::nullopt;
        return 0;
      case RuleKind::Case:
        return frag.tef_step;
      default:
        throw OutOfFragment("rule '" + node.rule.name() + "' at '" +
                            render_address(at) + "' is outside the fragment");
    }
  };
  auto successor = [&](const NodeAddress& at) -> std::optional<NodeAddress> {
    auto child = successor_child(at);
    if (!child) return std::nullopt;
    NodeAddress next = at;
    next.push_back(*child);
    if (!p.tree.contains(next)) return std::nullopt;
    if (p.is_bud(next)) return p.companions.at(next);
    return next;
  };

  // Confirms that the walk's eventual cycle admits no returning trace with a
  // progress point: composes the trace relations once around the cycle and
  // iterates the composite to its stable power, looking for progress on the
  // diagonal.
  auto cycle_progresses = [&](const std::vector<NodeAddress>& cycle) -> bool {
    auto inductive_atoms = [&](const NodeAddress& a) {
      std::vector<Formula> fs;
      for (const auto& f : p.tree.at(a).sequent.ante) {
        if (system.is_inductive_atom(f)) fs.push_back(f);
      }
      return fs;
    };
    std::vector<Formula> entry = inductive_atoms(cycle[0]);
    size_t n = entry.size();
    if (n == 0) return false;
    // lap[i][j]: 0 unreachable, 1 step, 2 with progress.
    std::vector<uint8_t> lap(n * n, 0);
    {
      std::vector<uint8_t> running(n * n, 0);
      for (size_t i = 0; i < n; ++i) running[i * n + i] = 1;
      std::vector<Formula> from_fs = entry;
      for (size_t k = 0; k < cycle.size(); ++k) {
        auto child = successor_child(cycle[k]);
        if (!child) return false;
        const NodeAddress& to_addr = cycle[(k + 1) % cycle.size()];
        std::vector<Formula> to_fs = inductive_atoms(to_addr);
        std::vector<uint8_t> step(from_fs.size() * to_fs.size(), 0);
        for (const auto& pr : edge_trace_pairs(system, p, cycle[k], *child)) {
          auto fi = std::find(from_fs.begin(), from_fs.end(), pr.from);
          auto fj = std::find(to_fs.begin(), to_fs.end(), pr.to);
          if (fi == from_fs.end() || fj == to_fs.end()) continue;
          uint8_t& cell = step[(fi - from_fs.begin()) * to_fs.size() + (fj - to_fs.begin())];
          cell = std::max<uint8_t>(cell, pr.progress ? 2 : 1);
        }
        std::vector<uint8_t> next(n * to_fs.size(), 0);
        for (size_t i = 0; i < n; ++i) {
          for (size_t j = 0; j < from_fs.size(); ++j) {
            uint8_t a = running[i * from_fs.size() + j];
            if (!a) continue;
            for (size_t l = 0; l < to_fs.size(); ++l) {
              uint8_t b = step[j * to_fs.size() + l];
              if (!b) continue;
              uint8_t v = (a == 2 || b == 2) ? 2 : 1;
              uint8_t& cell = next[i * to_fs.size() + l];
              cell = std::max(cell, v);
            }
          }
        }
        running = std::move(next);
        from_fs = std::move(to_fs);
      }
      lap = std::move(running);
    }
    // Iterate powers of the lap matrix; the monogenic semigroup stabilizes.
    std::set<std::vector<uint8_t>> seen_powers;
    std::vector<uint8_t> power = lap;
    while (seen_powers.insert(power).second) {
      for (size_t i = 0; i < n; ++i) {
        if (power[i * n + i] == 2) return true;
      }
      std::vector<uint8_t> next(n * n, 0);
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
          uint8_t a = power[i * n + j];
          if (!a) continue;
          for (size_t l = 0; l < n; ++l) {
            uint8_t b = lap[j * n + l];
            if (!b) continue;
            uint8_t v = (a == 2 || b == 2) ? 2 : 1;
            uint8_t& cell = next[i * n + l];
            cell = std::max(cell, v);
          }
        }
      }
      power = std::move(next);
    }
    return false;
  };

  const size_t node_count = p.tree.nodes.size();
  NodeAddress start = {};
  size_t last_height = 0;
  bool first = true;

  while (rep.sigma_tildes.size() < node_count + 1) {
    // Walk the rightmost path from `start` until an address repeats.
    std::vector<NodeAddress> visited;
    std::map<NodeAddress, size_t> seen;
    NodeAddress cur = start;
    std::optional<size_t> loop_entry;
    for (;;) {
      auto it = seen.find(cur);
      if (it != seen.end()) {
        loop_entry = it->second;
        break;
      }
      seen[cur] = visited.size();
      visited.push_back(cur);
      auto next = successor(cur);
      if (!next) {
        rep.reason = "rightmost path from '" + render_address(start) +
                     "' terminates at '" + render_address(cur) + "' (rule " +
                     p.tree.at(cur).rule.name() +
                     "); a valid fragment proof of a root-like goal cannot do this";
        rep.outcome = RefutationOutcome::InputInvalid;
        return rep;
      }
      cur = *next;
    }

    // Candidate switching points seen on this walk, above the previous
    // sigma-tilde in height.
    std::optional<NodeAddress> best;
    bool any_candidate = false;
    for (const auto& a : visited) {
      if (!is_switching_point(system, p, a)) continue;
      any_candidate = true;
      if (!first && a.size() <= last_height) continue;
      if (!best || a.size() < best->size() || (a.size() == best->size() && a < *best)) {
        best = a;
      }
    }
    if (!best) {
      std::vector<NodeAddress> cycle(visited.begin() + static_cast<long>(*loop_entry),
                                     visited.end());
      if (cycle_progresses(cycle)) {
        // The cycle does carry an infinitely progressing trace, so it is no
        // counterexample; with no switching point above the previous height
        // the construction cannot continue, which contradicts its premises.
        rep.outcome = RefutationOutcome::InputInvalid;
        rep.reason = any_candidate
                         ? "construction stuck: the rightmost cycle progresses but "
                           "offers no switching point above height " +
                               std::to_string(last_height)
                         : "rightmost cycle progresses without any switching point; "
                           "the input violates the index-uniqueness premises";
        return rep;
      }
      rep.outcome = RefutationOutcome::GtcFailed;
      Lasso lasso;
      const NodeAddress& entry = visited[*loop_entry];
      for (size_t len = 0; len < entry.size(); ++len) {
        NodeAddress prefix(entry.begin(), entry.begin() + len);
        if (p.tree.contains(prefix) && !p.is_bud(prefix)) lasso.stem.push_back(prefix);
      }
      for (const auto& a : cycle) lasso.cycle.push_back(a);
      rep.lasso = std::move(lasso);
      return rep;
    }
    rep.sigma_tildes.push_back(*best);
    last_height = best->size();
    first = false;
    start = *best;
    start.push_back(frag.tef_base);  // descend into the left assumption
    if (p.is_bud(start)) start = p.companions.at(start);
  }
  rep.outcome = RefutationOutcome::ContradictionFound;
  return rep;
}

}  // namespace cyclo
