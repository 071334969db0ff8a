#include "cyclo/trace.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>

namespace cyclo {

namespace {

std::vector<Formula> trace_formulas(const InductiveSystem& system, const Sequent& seq) {
  std::vector<Formula> out;
  for (const auto& f : seq.ante) {
    if (system.is_inductive_atom(f)) out.push_back(f);
  }
  return out;  // already sorted: antecedents are kept sorted
}

bool pair_less(const TracePair& a, const TracePair& b) {
  return std::tie(a.from, a.to, a.progress) < std::tie(b.from, b.to, b.progress);
}

bool pair_eq(const TracePair& a, const TracePair& b) {
  return a.from == b.from && a.to == b.to && a.progress == b.progress;
}

}  // namespace

std::vector<TracePair> edge_trace_pairs(const InductiveSystem& system,
                                        const PreProof& p,
                                        const NodeAddress& a, int i) {
  const Node& node = p.tree.at(a);
  NodeAddress child_addr = a;
  child_addr.push_back(i);
  const Sequent& child = p.tree.at(child_addr).sequent;

  std::vector<TracePair> out;
  switch (node.rule.kind()) {
    case RuleKind::Axiom:
    case RuleKind::EqR:
    case RuleKind::Bud:
      throw Error("rule '" + node.rule.name() + "' has no premises");
    case RuleKind::Weak: {
      for (const auto& f : trace_formulas(system, child)) out.push_back({f, f, false});
      break;
    }
    case RuleKind::Cut:
    case RuleKind::UnfoldRight: {
      for (const auto& f : trace_formulas(system, node.sequent)) out.push_back({f, f, false});
      break;
    }
    case RuleKind::Subst: {
      const auto& theta = node.rule.as<SubstArgs>().theta;
      for (const auto& f : trace_formulas(system, child)) {
        Formula image = substitute(f, theta);
        if (std::binary_search(node.sequent.ante.begin(), node.sequent.ante.end(), image)) {
          out.push_back({image, f, false});
        }
      }
      break;
    }
    case RuleKind::EqLa: {
      const auto& w = node.rule.as<EqLaArgs>();
      Substitution to_conc{{w.x, w.t}, {w.y, w.u}};
      Substitution to_prem{{w.x, w.u}, {w.y, w.t}};
      for (const auto& f : w.ante_template) {
        if (f.kind == Formula::Kind::Atom && system.is_inductive_atom(f)) {
          out.push_back({substitute(f, to_conc), substitute(f, to_prem), false});
        }
      }
      break;
    }
    case RuleKind::Case: {
      const auto& w = node.rule.as<CaseArgs>();
      Sequent base = node.sequent.without_ante(w.principal);
      for (const auto& f : trace_formulas(system, base)) out.push_back({f, f, false});
      auto cases = case_distinctions(system, node.sequent, w.principal, w.fresh);
      for (const auto& d : cases.at(i).descendants) {
        out.push_back({w.principal, d, true});
      }
      break;
    }
  }
  std::sort(out.begin(), out.end(), pair_less);
  out.erase(std::unique(out.begin(), out.end(), pair_eq), out.end());
  return out;
}

// ------------------------------------------------------------ verification

TraceCheckResult verify_trace(const InductiveSystem& system, const PreProof& p,
                              const std::vector<NodeAddress>& path,
                              const std::vector<Formula>& formulas) {
  TraceCheckResult res;
  auto fail = [&](int pos, std::string detail) {
    res.ok = false;
    res.error_position = pos;
    res.detail = std::move(detail);
    return res;
  };
  if (path.size() != formulas.size()) {
    return fail(0, "trace must assign one formula per path node");
  }
  std::vector<NodeAddress> reps(path.size());
  for (size_t k = 0; k < path.size(); ++k) {
    auto rep = try_resolve_unfolding(p, path[k]);
    if (!rep) return fail(static_cast<int>(k), "path leaves the unfolding");
    reps[k] = *rep;
    const Node& node = p.tree.at(reps[k]);
    if (formulas[k].kind != Formula::Kind::Atom ||
        !system.is_inductive_atom(formulas[k]) ||
        !std::binary_search(node.sequent.ante.begin(), node.sequent.ante.end(), formulas[k])) {
      return fail(static_cast<int>(k),
                  "'" + formulas[k].text() + "' is not an inductive antecedent atom of '" +
                  node.sequent.render() + "'");
    }
  }
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    const NodeAddress& here = path[k];
    const NodeAddress& next = path[k + 1];
    if (next.size() != here.size() + 1 || !is_prefix(here, next)) {
      return fail(static_cast<int>(k + 1), "path step must extend the previous address by one child");
    }
    int child_index = next.back();
    NodeAddress tree_child = reps[k];
    tree_child.push_back(child_index);
    if (!p.tree.contains(tree_child)) {
      return fail(static_cast<int>(k + 1), "no premise " + std::to_string(child_index) +
                  " at '" + render_address(reps[k]) + "'");
    }
    auto pairs = edge_trace_pairs(system, p, reps[k], child_index);
    bool found = false;
    for (const auto& pr : pairs) {
      if (pr.from == formulas[k] && pr.to == formulas[k + 1]) {
        found = true;
        if (pr.progress) res.progress_positions.push_back(static_cast<int>(k));
        break;
      }
    }
    if (!found) {
      return fail(static_cast<int>(k + 1),
                  "no trace step from '" + formulas[k].text() + "' to '" +
                  formulas[k + 1].text() + "' across rule '" +
                  p.tree.at(reps[k]).rule.name() + "'");
    }
  }
  return res;
}

// ------------------------------------------------------------------- GTC

namespace {

using Matrix = std::vector<uint8_t>;  // 0 none, 1 step, 2 progress

struct TraceGraph {
  std::vector<NodeAddress> nodes;
  std::map<NodeAddress, int> index;
  std::vector<std::vector<Formula>> formulas;
  struct Edge {
    int src, dst, child_index;
    Matrix m;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> out;  // edge ids grouped by source
};

TraceGraph build_trace_graph(const InductiveSystem& system, const PreProof& p) {
  TraceGraph g;
  for (const auto& [addr, node] : p.tree.nodes) {
    if (p.is_bud(addr)) continue;
    g.index[addr] = static_cast<int>(g.nodes.size());
    g.nodes.push_back(addr);
    g.formulas.push_back(trace_formulas(system, node.sequent));
  }
  g.out.resize(g.nodes.size());
  for (int v = 0; v < static_cast<int>(g.nodes.size()); ++v) {
    const NodeAddress& addr = g.nodes[v];
    int n = p.tree.child_count(addr);
    for (int i = 0; i < n; ++i) {
      NodeAddress child = addr;
      child.push_back(i);
      NodeAddress target = p.is_bud(child) ? p.companions.at(child) : child;
      auto it = g.index.find(target);
      if (it == g.index.end()) {
        throw Error("companion '" + render_address(target) + "' is not an inner node");
      }
      int dst = it->second;
      const auto& fs = g.formulas[v];
      const auto& ft = g.formulas[dst];
      Matrix m(fs.size() * ft.size(), 0);
      for (const auto& pr : edge_trace_pairs(system, p, addr, i)) {
        auto fi = std::lower_bound(fs.begin(), fs.end(), pr.from);
        auto fj = std::lower_bound(ft.begin(), ft.end(), pr.to);
        if (fi == fs.end() || *fi != pr.from || fj == ft.end() || *fj != pr.to) continue;
        uint8_t& cell = m[(fi - fs.begin()) * ft.size() + (fj - ft.begin())];
        cell = std::max<uint8_t>(cell, pr.progress ? 2 : 1);
      }
      g.out[v].push_back(static_cast<int>(g.edges.size()));
      g.edges.push_back({v, dst, i, std::move(m)});
    }
  }
  return g;
}

Matrix compose(const Matrix& a, size_t n1, size_t n2, const Matrix& b, size_t n3) {
  Matrix c(n1 * n3, 0);
  for (size_t i = 0; i < n1; ++i) {
    for (size_t j = 0; j < n2; ++j) {
      uint8_t aij = a[i * n2 + j];
      if (!aij) continue;
      for (size_t k = 0; k < n3; ++k) {
        uint8_t bjk = b[j * n3 + k];
        if (!bjk) continue;
        uint8_t val = (aij == 2 || bjk == 2) ? 2 : 1;
        uint8_t& cell = c[i * n3 + k];
        cell = std::max(cell, val);
      }
    }
  }
  return c;
}

}  // namespace

std::string Lasso::render() const {
  std::ostringstream out;
  out << "stem:";
  if (stem.empty()) out << " (empty)";
  for (const auto& a : stem) out << " " << (a.empty() ? std::string("<root>") : render_address(a));
  out << " / cycle:";
  for (const auto& a : cycle) out << " " << (a.empty() ? std::string("<root>") : render_address(a));
  out << "\n";
  return out.str();
}

GtcVerdict check_gtc(const InductiveSystem& system, const PreProof& p) {
  GtcVerdict verdict;
  TraceGraph g = build_trace_graph(system, p);
  verdict.stats.graph_nodes = static_cast<int>(g.nodes.size());
  verdict.stats.graph_edges = static_cast<int>(g.edges.size());

  struct Element {
    int src, dst;
    Matrix m;
    int prov_left;  // -1 for a base edge
    int prov_edge;
  };
  std::vector<Element> elements;
  std::map<std::tuple<int, int, Matrix>, int> seen;
  std::deque<int> work;

  std::optional<int> failing;

  auto unwind = [&](int id) {
    std::vector<int> edge_seq;
    for (int cur = id; cur >= 0;) {
      const Element& el = elements[cur];
      edge_seq.push_back(el.prov_edge);
      cur = el.prov_left;
    }
    std::reverse(edge_seq.begin(), edge_seq.end());
    Lasso lasso;
    for (int eid : edge_seq) lasso.cycle.push_back(g.nodes[g.edges[eid].src]);
    const NodeAddress& entry = lasso.cycle.front();
    for (size_t len = 0; len < entry.size(); ++len) {
      lasso.stem.push_back(NodeAddress(entry.begin(), entry.begin() + len));
    }
    return lasso;
  };

  auto add_element = [&](int src, int dst, Matrix m, int left, int edge) {
    auto key = std::make_tuple(src, dst, m);
    auto it = seen.find(key);
    if (it != seen.end()) return;
    int id = static_cast<int>(elements.size());
    seen.emplace(std::move(key), id);
    elements.push_back({src, dst, std::move(m), left, edge});
    work.push_back(id);
    verdict.stats.matrices_explored += 1;
    if (elements.size() > 5'000'000) {
      throw Error("trace matrix closure exceeded the element budget");
    }
    if (src == dst && !failing) {
      size_t n = g.formulas[src].size();
      const Matrix& mm = elements[id].m;
      Matrix sq = compose(mm, n, n, mm, n);
      if (sq == mm) {
        bool progress_diag = false;
        for (size_t i = 0; i < n; ++i) {
          if (mm[i * n + i] == 2) { progress_diag = true; break; }
        }
        if (!progress_diag) failing = id;
      }
    }
  };

  for (size_t e = 0; e < g.edges.size(); ++e) {
    add_element(g.edges[e].src, g.edges[e].dst, g.edges[e].m, -1, static_cast<int>(e));
    if (failing) break;
  }
  while (!work.empty() && !failing) {
    int id = work.front();
    work.pop_front();
    const int src = elements[id].src;
    const int mid = elements[id].dst;
    for (int eid : g.out[mid]) {
      const auto& edge = g.edges[eid];
      Matrix m = compose(elements[id].m, g.formulas[src].size(),
                         g.formulas[mid].size(), edge.m, g.formulas[edge.dst].size());
      verdict.stats.compositions += 1;
      add_element(src, edge.dst, std::move(m), id, eid);
      if (failing) break;
    }
  }

  if (failing) {
    verdict.holds = false;
    verdict.counterexample = unwind(*failing);
  }
  return verdict;
}

bool naive_gtc_oracle(const InductiveSystem& system, const PreProof& p,
                      int max_walk_len) {
  TraceGraph g = build_trace_graph(system, p);
  int cap = max_walk_len > 0 ? max_walk_len : 3 * static_cast<int>(g.nodes.size());

  long walks_checked = 0;

  // A closed walk is good when its cyclic layered trace graph contains a
  // progress arc on a cycle, i.e. some infinitely progressing trace follows
  // a tail of the walk repeated forever.
  auto good_walk = [&](const std::vector<int>& edge_seq) {
    const size_t L = edge_seq.size();
    std::vector<size_t> offset(L + 1, 0);
    for (size_t l = 0; l < L; ++l) {
      offset[l + 1] = offset[l] + g.formulas[g.edges[edge_seq[l]].src].size();
    }
    size_t total = offset[L];
    if (total == 0) return false;
    struct Arc { int to; bool progress; };
    std::vector<std::vector<Arc>> arcs(total);
    for (size_t l = 0; l < L; ++l) {
      const auto& edge = g.edges[edge_seq[l]];
      size_t n1 = g.formulas[edge.src].size();
      size_t n2 = g.formulas[edge.dst].size();
      size_t next_base = offset[(l + 1) % L];
      for (size_t i = 0; i < n1; ++i) {
        for (size_t j = 0; j < n2; ++j) {
          uint8_t v = edge.m[i * n2 + j];
          if (!v) continue;
          arcs[offset[l] + i].push_back({static_cast<int>(next_base + j), v == 2});
        }
      }
    }
    // Progress arc u -> w lies on a cycle iff u is reachable from w.
    std::vector<char> mark(total);
    std::function<bool(int, int)> reaches = [&](int from, int target) {
      std::fill(mark.begin(), mark.end(), 0);
      std::deque<int> q{from};
      mark[from] = 1;
      while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        if (v == target) return true;
        for (const auto& arc : arcs[v]) {
          if (!mark[arc.to]) { mark[arc.to] = 1; q.push_back(arc.to); }
        }
      }
      return false;
    };
    for (size_t u = 0; u < total; ++u) {
      for (const auto& arc : arcs[u]) {
        if (arc.progress && reaches(arc.to, static_cast<int>(u))) return true;
      }
    }
    return false;
  };

  // Enumerates closed walks whose minimal node is the start (rotations of
  // other walks are equivalent for the verdict).
  for (int start = 0; start < static_cast<int>(g.nodes.size()); ++start) {
    std::vector<int> edge_seq;
    std::function<bool(int)> extend = [&](int at) -> bool {  // true = found bad walk
      if (static_cast<int>(edge_seq.size()) >= cap) return false;
      for (int eid : g.out[at]) {
        const auto& edge = g.edges[eid];
        if (edge.dst < start) continue;
        edge_seq.push_back(eid);
        if (edge.dst == start) {
          if (++walks_checked > 2'000'000) {
            throw Error("closed-walk budget exceeded in the reference oracle");
          }
          if (!good_walk(edge_seq)) { edge_seq.pop_back(); return true; }
        }
        if (extend(edge.dst)) { edge_seq.pop_back(); return true; }
        edge_seq.pop_back();
      }
      return false;
    };
    if (extend(start)) return false;
  }
  return true;
}

// ------------------------------------------------------------ normal form

PreProof cycle_normalize(const InductiveSystem& system, const PreProof& p) {
  (void)system;
  // States are inner addresses; successors follow children and jump buds to
  // their companions.
  std::vector<NodeAddress> states;
  std::map<NodeAddress, int> state_index;
  for (const auto& [addr, node] : p.tree.nodes) {
    if (p.is_bud(addr)) continue;
    state_index[addr] = static_cast<int>(states.size());
    states.push_back(addr);
  }
  std::vector<std::vector<int>> succ(states.size());
  for (size_t v = 0; v < states.size(); ++v) {
    int n = p.tree.child_count(states[v]);
    for (int i = 0; i < n; ++i) {
      NodeAddress child = states[v];
      child.push_back(i);
      NodeAddress target = p.is_bud(child) ? p.companions.at(child) : child;
      succ[v].push_back(state_index.at(target));
    }
  }

  // Partition refinement to bisimilarity over (sequent, rule name).
  std::vector<int> cls(states.size());
  {
    std::map<std::string, int> initial;
    for (size_t v = 0; v < states.size(); ++v) {
      const Node& node = p.tree.at(states[v]);
      std::string key = node.sequent.render() + " @ " + node.rule.name();
      cls[v] = initial.emplace(key, static_cast<int>(initial.size())).first->second;
    }
  }
  for (;;) {
    std::map<std::vector<int>, int> next;
    std::vector<int> refined(states.size());
    for (size_t v = 0; v < states.size(); ++v) {
      std::vector<int> key{cls[v]};
      for (int w : succ[v]) key.push_back(cls[w]);
      refined[v] = next.emplace(std::move(key), static_cast<int>(next.size())).first->second;
    }
    // Each round refines the previous partition, so the block count is
    // unchanged exactly when the partition is stable.
    std::set<int> before(cls.begin(), cls.end());
    bool stable = before.size() == next.size();
    cls = std::move(refined);
    if (stable) break;
  }

  PreProof out;
  std::function<void(int, NodeAddress, std::vector<std::pair<int, NodeAddress>>&)> build =
      [&](int v, NodeAddress at, std::vector<std::pair<int, NodeAddress>>& path) {
        const Node& node = p.tree.at(states[v]);
        for (const auto& [ancestor_cls, ancestor_addr] : path) {
          if (ancestor_cls == cls[v]) {
            out.tree.nodes[at] = Node{node.sequent, make_bud()};
            out.companions[at] = ancestor_addr;
            return;
          }
        }
        out.tree.nodes[at] = node;
        path.emplace_back(cls[v], at);
        for (size_t i = 0; i < succ[v].size(); ++i) {
          NodeAddress child = at;
          child.push_back(static_cast<int>(i));
          build(succ[v][i], std::move(child), path);
        }
        path.pop_back();
      };
  int root = state_index.at(resolve_unfolding(p, {}));
  std::vector<std::pair<int, NodeAddress>> path;
  build(root, {}, path);
  return out;
}

}  // namespace cyclo
