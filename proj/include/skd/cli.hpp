#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "skd/complex.hpp"
#include "skd/crossing.hpp"

namespace skd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitInputError = 2;

inline constexpr int kJsonFormatVersion = 1;

/// Γ from a comma or whitespace separated list. Each token is an edge id
/// (standing for the curve through it) or one of `all`, `open`, `closed`.
/// Edge ids win over the keywords. Throws StructuralError on unknown tokens.
ExchangeSet resolve_gamma(const Complex& complex, const CurveTrace& trace, const std::string& text);

/// Runs the command line; `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skd
