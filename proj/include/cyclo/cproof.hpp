// Canonical JSON serialization of pre-proofs (.cproof files).
//
// Layout: {"buds": {bud-addr: companion-addr}, "defs": inline definition
// text or a path, "nodes": {addr: {"args": {...}, "rule": name, "seq":
// {"ante": [...], "succ": [...]}}}}. Addresses are dot-joined child indices
// with "" for the root; formulas and terms use the surface syntax. Output
// is byte-stable: sorted keys, two-space indentation, trailing newline.
#ifndef CYCLO_CPROOF_HPP_
#define CYCLO_CPROOF_HPP_

#include <string>

#include "cyclo/proofgraph.hpp"
#include "cyclo/syntax.hpp"

namespace cyclo {

struct LoadedProof {
  InductiveSystem system;
  PreProof proof;
};

// Serializes with the definitions inlined (canonical rendering).
std::string save_cproof(const InductiveSystem& system, const PreProof& p);

// Parses a .cproof document. A "defs" value containing a newline is inline
// definition text; otherwise it names a file resolved against base_dir.
// defs_override, when non-empty, replaces the document's definitions with
// the given file's content.
LoadedProof load_cproof_text(const std::string& json_text,
                             const std::string& base_dir = ".",
                             const std::string& defs_override = "");
LoadedProof load_cproof_file(const std::string& path,
                             const std::string& defs_override = "");

}  // namespace cyclo

#endif  // CYCLO_CPROOF_HPP_
