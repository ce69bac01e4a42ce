#pragma once

#include <string>

#include "skd/complex.hpp"

namespace skd {

/// Graphviz DOT text: a node per triple point (labelled with its line types),
/// per branch point and per circle, an edge per double edge coloured by curve.
/// Each circle is drawn as a self-loop on its own anchor node.
std::string export_schematic(const Complex& complex);

}  // namespace skd
