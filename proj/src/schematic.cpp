#include "skd/schematic.hpp"

#include <array>
#include <sstream>

namespace skd {

namespace {

constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                               "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '\\';
    out += ch;
  }
  return out + '"';
}

std::string node_of(const Endpoint& e) { return quoted((e.is_branch() ? "B:" : "T:") + e.owner); }

}  // namespace

std::string export_schematic(const Complex& complex) {
  auto trace = trace_curves(complex);
  std::ostringstream os;
  os << "graph singularities {\n  node [fontname=\"Helvetica\"];\n  edge [penwidth=2];\n";
  for (const auto& [id, tp] : complex.triples()) {
    os << "  " << quoted("T:" + id) << " [shape=box, label=" << quoted(id + "\\n0:" + std::string(to_string(tp.lines[0])) +
                                                                     " 1:" + std::string(to_string(tp.lines[1])) +
                                                                     " 2:" + std::string(to_string(tp.lines[2])))
       << "];\n";
  }
  for (const auto& b : complex.branches()) {
    os << "  " << quoted("B:" + b) << " [shape=point, width=0.12, xlabel=" << quoted(b) << "];\n";
  }
  for (const auto& [id, e] : complex.edges()) {
    if (e.is_circle()) os << "  " << quoted("C:" + id) << " [shape=point, width=0.05];\n";
  }
  for (const auto& [id, e] : complex.edges()) {
    const auto& curve = trace.curve_of(id);
    const char* color = kPalette[trace.index_of(curve) % kPalette.size()];
    std::string label = quoted(id + " [" + curve + "]");
    if (e.is_circle()) {
      os << "  " << quoted("C:" + id) << " -- " << quoted("C:" + id) << " [";
    } else {
      const auto& a = e.arc();
      os << "  " << node_of(a.end1) << " -- " << node_of(a.end2) << " [";
      if (a.end1.is_triple()) os << "taillabel=" << quoted(std::to_string(a.end1.line)) << ", ";
      if (a.end2.is_triple()) os << "headlabel=" << quoted(std::to_string(a.end2.line)) << ", ";
    }
    os << "color=" << quoted(color) << ", label=" << label << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace skd
