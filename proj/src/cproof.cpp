#include "cyclo/cproof.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cyclo {

namespace {

using nlohmann::json;

json term_map_to_json(const Substitution& theta) {
  json out = json::object();
  for (const auto& [var, term] : theta) out[var] = term.render();
  return out;
}

json formulas_to_json(const std::vector<Formula>& fs) {
  json out = json::array();
  for (const auto& f : fs) out.push_back(f.text());
  return out;
}

json args_to_json(const RuleApplication& rule) {
  json out = json::object();
  switch (rule.kind()) {
    case RuleKind::Axiom:
    case RuleKind::Weak:
    case RuleKind::EqR:
    case RuleKind::Bud:
      break;
    case RuleKind::Cut:
      out["formula"] = rule.as<CutArgs>().formula.text();
      break;
    case RuleKind::Subst:
      out["subst"] = term_map_to_json(rule.as<SubstArgs>().theta);
      break;
    case RuleKind::EqLa: {
      const auto& a = rule.as<EqLaArgs>();
      out["x"] = a.x;
      out["y"] = a.y;
      out["t"] = a.t.render();
      out["u"] = a.u.render();
      out["ante"] = formulas_to_json(a.ante_template);
      out["succ"] = formulas_to_json(a.succ_template);
      break;
    }
    case RuleKind::UnfoldRight: {
      const auto& a = rule.as<UnfoldRightArgs>();
      out["pred"] = a.pred;
      out["production"] = a.production;
      out["principal"] = a.principal.text();
      out["inst"] = term_map_to_json(a.inst);
      break;
    }
    case RuleKind::Case: {
      const auto& a = rule.as<CaseArgs>();
      out["pred"] = a.pred;
      out["principal"] = a.principal.text();
      json fresh = json::array();
      for (const auto& names : a.fresh) fresh.push_back(names);
      out["fresh"] = std::move(fresh);
      break;
    }
  }
  return out;
}

std::vector<Formula> formulas_from_json(const InductiveSystem& system, const json& j) {
  std::vector<Formula> out;
  for (const auto& item : j) out.push_back(parse_formula(item.get<std::string>(), system.signature));
  return out;
}

Substitution term_map_from_json(const InductiveSystem& system, const json& j) {
  Substitution theta;
  for (auto it = j.begin(); it != j.end(); ++it) {
    theta[it.key()] = parse_term(it.value().get<std::string>(), system.signature);
  }
  return theta;
}

RuleApplication rule_from_json(const InductiveSystem& system,
                               const std::string& name, const json& args) {
  if (name == "Axiom") return make_axiom();
  if (name == "Weak") return make_weak();
  if (name == "EqR") return make_eqr();
  if (name == "Bud") return make_bud();
  if (name == "Cut") {
    return make_cut(parse_formula(args.at("formula").get<std::string>(), system.signature));
  }
  if (name == "Subst") return make_subst(term_map_from_json(system, args.at("subst")));
  if (name == "EqLa") {
    return make_eqla(args.at("x").get<std::string>(), args.at("y").get<std::string>(),
                     parse_term(args.at("t").get<std::string>(), system.signature),
                     parse_term(args.at("u").get<std::string>(), system.signature),
                     formulas_from_json(system, args.at("ante")),
                     formulas_from_json(system, args.at("succ")));
  }
  if (name == "UnfoldRight") {
    return make_unfold_right(args.at("pred").get<std::string>(),
                             args.at("production").get<int>(),
                             parse_formula(args.at("principal").get<std::string>(), system.signature),
                             term_map_from_json(system, args.at("inst")));
  }
  if (name == "Case") {
    std::vector<std::vector<std::string>> fresh;
    for (const auto& names : args.at("fresh")) {
      fresh.push_back(names.get<std::vector<std::string>>());
    }
    return make_case(args.at("pred").get<std::string>(),
                     parse_formula(args.at("principal").get<std::string>(), system.signature),
                     std::move(fresh));
  }
  throw Error("unknown rule name '" + name + "' in proof file");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::string save_cproof(const InductiveSystem& system, const PreProof& p) {
  json doc = json::object();
  doc["defs"] = render_definitions(system);
  json buds = json::object();
  for (const auto& [bud, comp] : p.companions) {
    buds[render_address(bud)] = render_address(comp);
  }
  doc["buds"] = std::move(buds);
  json nodes = json::object();
  for (const auto& [addr, node] : p.tree.nodes) {
    json entry = json::object();
    json seq = json::object();
    seq["ante"] = formulas_to_json(node.sequent.ante);
    seq["succ"] = formulas_to_json(node.sequent.succ);
    entry["seq"] = std::move(seq);
    entry["rule"] = rule_kind_name(node.rule.kind());
    entry["args"] = args_to_json(node.rule);
    nodes[render_address(addr)] = std::move(entry);
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump(2) + "\n";
}

LoadedProof load_cproof_text(const std::string& json_text,
                             const std::string& base_dir,
                             const std::string& defs_override) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed proof file: ") + e.what());
  }
  std::string defs_text;
  if (!defs_override.empty()) {
    defs_text = read_file(defs_override);
  } else {
    std::string defs = doc.at("defs").get<std::string>();
    if (defs.find('\n') != std::string::npos) {
      defs_text = defs;
    } else {
      defs_text = read_file(base_dir.empty() ? defs : base_dir + "/" + defs);
    }
  }

  LoadedProof out;
  out.system = parse_definitions(defs_text);
  try {
    for (auto it = doc.at("nodes").begin(); it != doc.at("nodes").end(); ++it) {
      NodeAddress addr = parse_address(it.key());
      const json& entry = it.value();
      Sequent seq;
      seq.ante = sorted_unique(formulas_from_json(out.system, entry.at("seq").at("ante")));
      seq.succ = sorted_unique(formulas_from_json(out.system, entry.at("seq").at("succ")));
      RuleApplication rule = rule_from_json(
          out.system, entry.at("rule").get<std::string>(),
          entry.count("args") ? entry.at("args") : json::object());
      out.proof.tree.nodes[addr] = Node{std::move(seq), std::move(rule)};
    }
    if (doc.count("buds")) {
      for (auto it = doc.at("buds").begin(); it != doc.at("buds").end(); ++it) {
        out.proof.companions[parse_address(it.key())] =
            parse_address(it.value().get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed proof file: ") + e.what());
  }
  return out;
}

LoadedProof load_cproof_file(const std::string& path,
                             const std::string& defs_override) {
  std::string text = read_file(path);
  std::string dir = ".";
  auto slash = path.find_last_of('/');
  if (slash != std::string::npos) dir = path.substr(0, slash);
  return load_cproof_text(text, dir, defs_override);
}

}  // namespace cyclo
