// Regenerates the shipped fixture files from the embedded definitions and
// hand-built proofs, so the files in fixtures/ and the in-memory fixtures
// used by the tests and the selftest cannot drift apart.
//
// Usage: make_fixtures [output-dir]   (default: fixtures)

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "cyclo/cproof.hpp"
#include "cyclo/fixtures.hpp"

namespace {

void write(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write '" << path.string() << "'\n";
    std::exit(1);
  }
  out << content;
  std::cout << "wrote " << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::filesystem::path dir = argc > 1 ? argv[1] : "fixtures";
  std::filesystem::create_directories(dir);

  using namespace cyclo;
  InductiveSystem tef = fixtures::tef_system();
  InductiveSystem eo = fixtures::even_odd_system();

  write(dir / "tef.ind", fixtures::kTefDefinitions);
  write(dir / "even_odd.ind", fixtures::kEvenOddDefinitions);
  write(dir / "counterex.cproof",
        save_cproof(tef, fixtures::counterexample_proof(tef)));
  write(dir / "gtc_fail_weak.cproof",
        save_cproof(tef, fixtures::gtc_fail_weak(tef)));
  write(dir / "nonancestor.cproof",
        save_cproof(tef, fixtures::nonancestor_companion(tef)));
  write(dir / "provable_variant.cproof",
        save_cproof(tef, fixtures::provable_variant(tef)));
  write(dir / "even_odd.cproof",
        save_cproof(eo, fixtures::even_odd_proof(eo)));
  write(dir / "refute_simple.cproof",
        save_cproof(tef, fixtures::refute_candidate_simple(tef)));
  write(dir / "refute_switching.cproof",
        save_cproof(tef, fixtures::refute_candidate_switching(tef)));
  write(dir / "refute_noncyclenormal.cproof",
        save_cproof(tef, fixtures::refute_candidate_noncyclenormal(tef)));
  return 0;
}
