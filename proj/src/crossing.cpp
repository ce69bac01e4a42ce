#include "skd/crossing.hpp"

#include <sstream>

namespace skd {

ExchangeSet ExchangeSet::all(const CurveTrace& trace) {
  ExchangeSet s;
  for (const auto& c : trace.curves()) s.insert(c.id);
  return s;
}

ExchangeSet ExchangeSet::complement(const CurveTrace& trace) const {
  ExchangeSet s;
  for (const auto& c : trace.curves()) {
    if (!contains(c.id)) s.insert(c.id);
  }
  return s;
}

void ExchangeSet::check_against(const CurveTrace& trace) const {
  for (const auto& id : curves_) {
    if (!trace.has_curve(id)) throw StructuralError("exchange set names unknown curve '" + id + "'");
  }
}

std::string ExchangeSet::to_string() const {
  std::string out = "{";
  for (const auto& id : curves_) out += (out.size() > 1 ? "," : "") + id;
  return out + "}";
}

std::string LineTypeSet::to_string() const {
  std::string out = "{";
  for (auto t : kAllLineTypes) {
    if (contains(t)) out += (out.size() > 1 ? "," : "") + std::string(skd::to_string(t));
  }
  return out + "}";
}

LineTypeSet FlipSet::types(const TriplePoint& tp) const {
  LineTypeSet s;
  for (std::uint8_t i = 0; i < 3; ++i) {
    if (flipped_lines[i]) s.insert(tp.lines[i]);
  }
  return s;
}

namespace {

// Sheets: 0 bottom, 1 middle, 2 top. Each line type relates (lower, upper).
constexpr std::pair<int, int> sheets_of(LineType t) {
  switch (t) {
    case LineType::BM: return {0, 1};
    case LineType::BT: return {0, 2};
    case LineType::MT: return {1, 2};
  }
  return {0, 0};
}

constexpr LineType type_of_roles(int a, int b) {
  if (a > b) std::swap(a, b);
  if (a == 0 && b == 1) return LineType::BM;
  if (a == 0 && b == 2) return LineType::BT;
  return LineType::MT;
}

// Rank of each sheet in the new order (number of sheets it lies above). A
// tournament on three vertices is acyclic iff these ranks are 0, 1, 2.
std::array<int, 3> new_ranks(LineTypeSet flipped) {
  std::array<int, 3> wins{};
  for (auto t : kAllLineTypes) {
    auto [lo, hi] = sheets_of(t);
    ++wins[flipped.contains(t) ? lo : hi];
  }
  return wins;
}

}  // namespace

bool is_valid_flip(LineTypeSet flipped) {
  auto r = new_ranks(flipped);
  return r[0] != r[1] && r[1] != r[2] && r[0] != r[2];
}

std::array<LineType, 3> relabel_lines(const std::array<LineType, 3>& lines, LineTypeSet flipped) {
  auto rank = new_ranks(flipped);
  std::array<LineType, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    auto [lo, hi] = sheets_of(lines[i]);
    out[i] = type_of_roles(rank[lo], rank[hi]);
  }
  return out;
}

std::vector<FlipSet> flip_sets(const Complex& complex, const CurveTrace& trace, const ExchangeSet& gamma) {
  gamma.check_against(trace);
  std::vector<FlipSet> out;
  out.reserve(complex.triples().size());
  for (const auto& [id, tp] : complex.triples()) {
    FlipSet fs{id, {}};
    for (std::uint8_t line = 0; line < 3; ++line) {
      fs.flipped_lines[line] = gamma.contains(trace.curve_through(complex, id, line));
    }
    out.push_back(std::move(fs));
  }
  return out;
}

std::vector<FlipSet> flip_sets(const Complex& complex, const ExchangeSet& gamma) {
  return flip_sets(complex, trace_curves(complex), gamma);
}

std::optional<std::string> first_invalid_triple(const Complex& complex, const CurveTrace& trace,
                                                const ExchangeSet& gamma) {
  for (const auto& fs : flip_sets(complex, trace, gamma)) {
    if (!is_valid_flip(fs.types(complex.triple(fs.triple)))) return fs.triple;
  }
  return std::nullopt;
}

bool is_exchangeable(const Complex& complex, const CurveTrace& trace, const ExchangeSet& gamma) {
  return !first_invalid_triple(complex, trace, gamma);
}

bool is_exchangeable(const Complex& complex, const ExchangeSet& gamma) {
  return is_exchangeable(complex, trace_curves(complex), gamma);
}

NotExchangeableError::NotExchangeableError(std::string triple, LineTypeSet flipped)
    : std::runtime_error("union is not exchangeable: flipping " + flipped.to_string() + " at triple point " +
                         triple + " leaves no total height order"),
      triple_(std::move(triple)) {}

Complex crossing_change(const Complex& complex, const ExchangeSet& gamma) {
  auto trace = trace_curves(complex);
  ComplexParts parts = complex.parts();
  for (const auto& fs : flip_sets(complex, trace, gamma)) {
    auto& tp = parts.triples.at(fs.triple);
    auto flipped = fs.types(tp);
    if (!is_valid_flip(flipped)) throw NotExchangeableError(fs.triple, flipped);
    tp.lines = relabel_lines(tp.lines, flipped);
  }
  for (auto& [id, disk] : parts.disks) {
    if (gamma.contains(trace.curve_of(disk.edge1))) disk.level1 = swapped(disk.level1);
    if (gamma.contains(trace.curve_of(disk.edge2))) disk.level2 = swapped(disk.level2);
  }
  return Complex(std::move(parts));
}

bool satisfies_dd_condition(const Complex& complex, const CurveTrace& trace, const ExchangeSet& gamma) {
  gamma.check_against(trace);
  for (const auto& [id, disk] : complex.disks()) {
    if (gamma.contains(trace.curve_of(disk.edge1)) != gamma.contains(trace.curve_of(disk.edge2))) return false;
  }
  return true;
}

bool satisfies_dd_condition(const Complex& complex, const ExchangeSet& gamma) {
  return satisfies_dd_condition(complex, trace_curves(complex), gamma);
}

}  // namespace skd
