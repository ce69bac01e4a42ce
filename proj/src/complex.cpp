#include "skd/complex.hpp"

#include <algorithm>
#include <sstream>

namespace skd {

std::string_view to_string(LineType t) {
  switch (t) {
    case LineType::BM: return "bm";
    case LineType::BT: return "bt";
    case LineType::MT: return "mt";
  }
  return "?";
}

std::optional<LineType> parse_line_type(std::string_view token) {
  if (token == "bm" || token == "BM") return LineType::BM;
  if (token == "bt" || token == "BT") return LineType::BT;
  if (token == "mt" || token == "MT") return LineType::MT;
  return std::nullopt;
}

std::string_view to_string(Pairing p) { return p == Pairing::Cross ? "cross" : "parallel"; }
std::string_view to_string(Level l) { return l == Level::Upper ? "upper" : "lower"; }

std::string_view to_string(CurveKind k) { return k == CurveKind::Open ? "open" : "closed"; }

std::string_view to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::DanglingReference: return "dangling_reference";
    case Violation::Kind::SlotCoverage: return "slot_coverage";
    case Violation::Kind::TypeBijection: return "type_bijection";
    case Violation::Kind::CountingIdentity: return "counting_identity";
    case Violation::Kind::DegenerateArc: return "degenerate_arc";
    case Violation::Kind::DiskEdges: return "disk_edges";
    case Violation::Kind::DiskLevels: return "disk_levels";
  }
  return "?";
}

std::string Endpoint::token() const {
  if (is_branch()) return "B:" + owner;
  std::string out = "T:" + owner + "." + std::to_string(line) + ".";
  out += side == Side::A ? 'a' : 'b';
  return out;
}

std::optional<std::uint8_t> TriplePoint::line_of(LineType t) const {
  std::optional<std::uint8_t> found;
  for (std::uint8_t i = 0; i < 3; ++i) {
    if (lines[i] == t) {
      if (found) return std::nullopt;
      found = i;
    }
  }
  return found;
}

// ---------------------------------------------------------------------------

Complex::Complex(ComplexParts parts) : parts_(std::move(parts)) {
  std::set<std::string> reversed;
  for (auto& [id, edge] : parts_.edges) {
    if (auto* arc = std::get_if<Arc>(&edge.shape); arc && arc->end2 < arc->end1) {
      std::swap(arc->end1, arc->end2);
      reversed.insert(id);
    }
  }
  for (auto& [id, disk] : parts_.disks) {
    // Reversing one edge of a disk exchanges its corners, which toggles the pairing.
    if (reversed.contains(disk.edge1)) disk.pair = toggled(disk.pair);
    if (reversed.contains(disk.edge2)) disk.pair = toggled(disk.pair);
    if (disk.edge2 < disk.edge1) {
      std::swap(disk.edge1, disk.edge2);
      std::swap(disk.level1, disk.level2);
    }
  }
  for (const auto& [id, edge] : parts_.edges) {
    if (const auto* arc = std::get_if<Arc>(&edge.shape)) {
      slot_owner_.try_emplace(arc->end1, id);
      slot_owner_.try_emplace(arc->end2, id);
    }
  }
}

const DoubleEdge& Complex::edge(const std::string& id) const {
  auto it = parts_.edges.find(id);
  if (it == parts_.edges.end()) throw StructuralError("unknown edge id '" + id + "'");
  return it->second;
}

const TriplePoint& Complex::triple(const std::string& id) const {
  auto it = parts_.triples.find(id);
  if (it == parts_.triples.end()) throw StructuralError("unknown triple point id '" + id + "'");
  return it->second;
}

const DescendentDisk& Complex::disk(const std::string& id) const {
  auto it = parts_.disks.find(id);
  if (it == parts_.disks.end()) throw StructuralError("unknown descendent disk id '" + id + "'");
  return it->second;
}

std::optional<std::string> Complex::edge_at(const Endpoint& e) const {
  auto it = slot_owner_.find(e);
  if (it == slot_owner_.end()) return std::nullopt;
  return it->second;
}

std::string Complex::fresh_id(const std::string& base, const std::set<std::string>& taken) const {
  for (int k = 1;; ++k) {
    std::string candidate = base + "." + std::to_string(k);
    if (!parts_.edges.contains(candidate) && !parts_.disks.contains(candidate) &&
        !parts_.triples.contains(candidate) && !parts_.branches.contains(candidate) &&
        !taken.contains(candidate)) {
      return candidate;
    }
  }
}

bool operator==(const Complex& a, const Complex& b) {
  return a.parts_.triples == b.parts_.triples && a.parts_.branches == b.parts_.branches &&
         a.parts_.edges == b.parts_.edges && a.parts_.disks == b.parts_.disks;
}

// ---------------------------------------------------------------------------

ValidationReport validate(const Complex& complex) {
  ValidationReport report;
  auto add = [&](Violation::Kind kind, std::string msg) {
    report.violations.push_back({kind, std::move(msg)});
  };

  report.triple_points = complex.triples().size();
  report.branch_points = complex.branches().size();

  for (const auto& [id, tp] : complex.triples()) {
    if (tp.id != id) add(Violation::Kind::DanglingReference, "triple point key '" + id + "' holds id '" + tp.id + "'");
    for (LineType t : kAllLineTypes) {
      if (!tp.line_of(t)) {
        add(Violation::Kind::TypeBijection,
            "triple point " + id + " does not carry exactly one " + std::string(to_string(t)) + " line");
      }
    }
  }

  std::map<Endpoint, std::vector<std::string>> uses;
  for (const auto& [id, edge] : complex.edges()) {
    if (edge.is_circle()) {
      ++report.circles;
      continue;
    }
    ++report.arcs;
    const Arc& arc = edge.arc();
    if (arc.end1 == arc.end2) {
      add(Violation::Kind::DegenerateArc, "edge " + id + " uses " + arc.end1.token() + " at both ends");
    }
    for (const Endpoint* end : {&arc.end1, &arc.end2}) {
      bool resolves = end->is_branch() ? complex.branches().contains(end->owner)
                                       : complex.triples().contains(end->owner) && end->line < 3;
      if (!resolves) {
        add(Violation::Kind::DanglingReference, "edge " + id + " refers to missing " + end->token());
        continue;
      }
      uses[*end].push_back(id);
    }
  }

  auto check_slot = [&](const Endpoint& slot) {
    auto it = uses.find(slot);
    std::size_t n = it == uses.end() ? 0 : it->second.size();
    if (n == 0) {
      add(Violation::Kind::SlotCoverage, slot.token() + " is not used by any edge");
    } else if (n > 1) {
      std::string who;
      for (const auto& e : it->second) who += (who.empty() ? "" : ", ") + e;
      add(Violation::Kind::SlotCoverage, slot.token() + " is used by " + std::to_string(n) + " edge ends (" + who + ")");
    }
  };
  for (const auto& [id, tp] : complex.triples()) {
    for (std::uint8_t line = 0; line < 3; ++line) {
      check_slot(Endpoint::triple(id, line, Side::A));
      check_slot(Endpoint::triple(id, line, Side::B));
    }
  }
  for (const auto& b : complex.branches()) check_slot(Endpoint::branch(b));

  if (2 * report.arcs != 6 * report.triple_points + report.branch_points) {
    std::ostringstream os;
    os << "2*arcs = " << 2 * report.arcs << " but 6*triples + branches = "
       << 6 * report.triple_points + report.branch_points;
    add(Violation::Kind::CountingIdentity, os.str());
  }

  for (const auto& [id, disk] : complex.disks()) {
    bool missing = false;
    for (const auto* e : {&disk.edge1, &disk.edge2}) {
      if (!complex.has_edge(*e)) {
        add(Violation::Kind::DiskEdges, "disk " + id + " refers to missing edge " + *e);
        missing = true;
      }
    }
    if (!missing && disk.edge1 == disk.edge2) {
      add(Violation::Kind::DiskEdges, "disk " + id + " uses edge " + disk.edge1 + " twice");
    }
    if (!disk.levels_intact()) {
      add(Violation::Kind::DiskLevels,
          "disk " + id + " has both boundary arcs at level " + std::string(to_string(disk.level1)));
    }
  }
  return report;
}

void require_well_formed(const Complex& complex) {
  // A disk whose arcs share a level was destroyed by a crossing change; the
  // incidence structure is still sound.
  for (const auto& v : validate(complex).violations) {
    if (v.kind != Violation::Kind::DiskLevels) throw StructuralError("malformed complex: " + v.message);
  }
}

// ---------------------------------------------------------------------------

CurveTrace::CurveTrace(std::vector<DoubleCurve> curves) : curves_(std::move(curves)) {
  std::sort(curves_.begin(), curves_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < curves_.size(); ++i) {
    index_[curves_[i].id] = i;
    for (const auto& e : curves_[i].edges) edge_curve_[e] = curves_[i].id;
  }
}

const DoubleCurve& CurveTrace::curve(const std::string& curve_id) const {
  return curves_[index_of(curve_id)];
}

std::size_t CurveTrace::index_of(const std::string& curve_id) const {
  auto it = index_.find(curve_id);
  if (it == index_.end()) throw StructuralError("unknown curve id '" + curve_id + "'");
  return it->second;
}

const std::string& CurveTrace::curve_of(const std::string& edge_id) const {
  auto it = edge_curve_.find(edge_id);
  if (it == edge_curve_.end()) throw StructuralError("unknown edge id '" + edge_id + "'");
  return it->second;
}

const std::string& CurveTrace::curve_through(const Complex& complex, const std::string& triple,
                                             std::uint8_t line) const {
  auto edge = complex.edge_at(Endpoint::triple(triple, line, Side::A));
  if (!edge) throw StructuralError("no edge at " + Endpoint::triple(triple, line, Side::A).token());
  return curve_of(*edge);
}

namespace {

const Endpoint& other_end(const Arc& arc, const Endpoint& from) {
  return arc.end1 == from ? arc.end2 : arc.end1;
}

std::vector<std::string> canonical_cycle(std::vector<std::string> cycle) {
  auto min_it = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), min_it, cycle.end());
  if (cycle.size() >= 3 && cycle.back() < cycle[1]) std::reverse(cycle.begin() + 1, cycle.end());
  return cycle;
}

}  // namespace

CurveTrace trace_curves(const Complex& complex) {
  require_well_formed(complex);

  std::set<std::string> visited;
  std::vector<DoubleCurve> curves;

  // Walks from `start` (an endpoint of `edge`) until a branch point is reached
  // or the walk returns to the first edge.
  auto walk = [&](const std::string& first_edge, const Endpoint& start) {
    std::vector<std::string> chain;
    std::string edge_id = first_edge;
    Endpoint from = start;
    for (;;) {
      chain.push_back(edge_id);
      visited.insert(edge_id);
      const Endpoint& to = other_end(complex.edge(edge_id).arc(), from);
      if (to.is_branch()) return std::pair{chain, true};
      Endpoint next = to.opposite_slot();
      std::string next_edge = *complex.edge_at(next);
      if (next_edge == first_edge) return std::pair{chain, false};
      edge_id = next_edge;
      from = next;
    }
  };

  for (const auto& b : complex.branches()) {
    Endpoint start = Endpoint::branch(b);
    std::string e = *complex.edge_at(start);
    if (visited.contains(e)) continue;
    auto [chain, open] = walk(e, start);
    DoubleCurve c;
    c.kind = CurveKind::Open;
    c.id = *std::min_element(chain.begin(), chain.end());
    c.edges = std::move(chain);
    curves.push_back(std::move(c));
  }

  for (const auto& [id, edge] : complex.edges()) {
    if (visited.contains(id)) continue;
    DoubleCurve c;
    c.kind = CurveKind::Closed;
    if (edge.is_circle()) {
      visited.insert(id);
      c.edges = {id};
    } else {
      auto [chain, open] = walk(id, edge.arc().end1);
      c.edges = canonical_cycle(std::move(chain));
    }
    c.id = c.edges.front();
    curves.push_back(std::move(c));
  }
  return CurveTrace(std::move(curves));
}

std::string curve_of(const Complex& complex, const std::string& edge_id) {
  complex.edge(edge_id);
  return trace_curves(complex).curve_of(edge_id);
}

Census census(const Complex& complex) {
  auto trace = trace_curves(complex);
  Census c;
  c.triple_points = complex.triples().size();
  c.branch_points = complex.branches().size();
  for (const auto& [id, e] : complex.edges()) (e.is_circle() ? c.circles : c.arcs)++;
  for (const auto& curve : trace.curves()) (curve.kind == CurveKind::Open ? c.open_curves : c.closed_curves)++;
  return c;
}

}  // namespace skd
