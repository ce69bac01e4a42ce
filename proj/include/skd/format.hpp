#pragma once

// Line-oriented `.skd` diagram files and `.skm` move scripts, canonical
// serialization and fingerprints.
//
// .skd records (one per line, `#` starts a comment):
//   triple <id> lines=<t0>,<t1>,<t2>        t* a permutation of bm,bt,mt
//   branch <id>
//   edge <id> <endpoint> <endpoint>          endpoint: B:<id> | T:<id>.<0|1|2>.<a|b>
//   circle <id>
//   disk <id> e1=<edge> e2=<edge> pair=cross|parallel level1=upper|lower level2=upper|lower
//   oracle <fingerprint> trivial|nontrivial
//
// .skm records: `<kind> key=value ...`, kind one of R1+ R1- R2- R3- R4+ R4- R5- R6.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "skd/complex.hpp"
#include "skd/moves.hpp"
#include "skd/oracle.hpp"

namespace skd {

struct Diagnostic {
  std::size_t line = 0;    // 1-based; 0 when not tied to a record
  std::size_t column = 0;  // 1-based
  std::string message;

  std::string to_string(std::string_view source = {}) const;
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics, std::string source = {});
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

struct SkdDocument {
  Complex complex;
  TrivialityOracle oracle;
};

/// Syntax-level parse. Every record problem is collected; the complex may be
/// malformed when `diagnostics` is non-empty.
struct SkdParse {
  ComplexParts parts;
  TrivialityOracle oracle;
  std::vector<Diagnostic> diagnostics;
};

SkdParse parse_skd_lenient(std::string_view text);

/// Full parse: the result passes validate(), otherwise ParseError carries every
/// diagnostic found.
SkdDocument parse_skd(std::string_view text, std::string source = {});

/// Records of the complex in canonical order. Oracle entries are not part of it.
std::string serialize_canonical(const Complex& complex);

/// Canonical text followed by the oracle records.
std::string serialize_document(const SkdDocument& doc);

/// SHA-256 of the canonical text, lowercase hex.
std::string fingerprint(const Complex& complex);

/// Oracle records only; a sidecar file for `--oracle`.
TrivialityOracle parse_oracle(std::string_view text, std::string source = {});

struct SkmRecord {
  std::size_t line = 0;
  std::string kind_token;
  std::vector<std::pair<std::string, std::string>> params;
};

/// Tokenizes a script without interpreting loci.
std::vector<SkmRecord> read_skm_records(std::string_view text, std::string source = {});

/// Script with loci decoded. Throws ParseError on forbidden or unknown kinds,
/// unknown or missing keys.
std::vector<MoveInstance> parse_skm(std::string_view text, std::string source = {});

std::string format_move(const MoveInstance& m);

}  // namespace skd
