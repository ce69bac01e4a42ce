#pragma once

// Abstract singularity complex of a surface-knot diagram: triple points with
// typed lines, branch points, double edges, double-point circles and the
// declared descendent disks. Double curves are traced on demand.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace skd {

/// Sheet pair meeting along a line at a triple point.
enum class LineType : std::uint8_t { BM, BT, MT };

inline constexpr std::array<LineType, 3> kAllLineTypes{LineType::BM, LineType::BT, LineType::MT};

std::string_view to_string(LineType t);
std::optional<LineType> parse_line_type(std::string_view token);

enum class Side : std::uint8_t { A, B };

constexpr Side opposite(Side s) { return s == Side::A ? Side::B : Side::A; }

/// One end of a double edge: a branch slot at a triple point, or a branch point.
struct Endpoint {
  enum class Kind : std::uint8_t { Triple, Branch };

  Kind kind = Kind::Branch;
  std::string owner;  // triple point or branch point id
  std::uint8_t line = 0;
  Side side = Side::A;

  static Endpoint triple(std::string id, std::uint8_t line, Side side) {
    return Endpoint{Kind::Triple, std::move(id), line, side};
  }
  static Endpoint branch(std::string id) { return Endpoint{Kind::Branch, std::move(id), 0, Side::A}; }

  bool is_triple() const { return kind == Kind::Triple; }
  bool is_branch() const { return kind == Kind::Branch; }

  /// The other slot of the same line; only meaningful for triple slots.
  Endpoint opposite_slot() const { return triple(owner, line, opposite(side)); }

  /// `B:<id>` or `T:<id>.<line>.<a|b>`.
  std::string token() const;

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

struct Arc {
  Endpoint end1;
  Endpoint end2;
  friend bool operator==(const Arc&, const Arc&) = default;
};

struct Circle {
  friend bool operator==(const Circle&, const Circle&) = default;
};

struct DoubleEdge {
  std::string id;
  std::variant<Arc, Circle> shape;

  bool is_circle() const { return std::holds_alternative<Circle>(shape); }
  const Arc& arc() const { return std::get<Arc>(shape); }

  friend bool operator==(const DoubleEdge&, const DoubleEdge&) = default;
};

struct TriplePoint {
  std::string id;
  std::array<LineType, 3> lines{LineType::BM, LineType::BT, LineType::MT};

  /// Index of the line carrying `t`, if the labelling is a bijection.
  std::optional<std::uint8_t> line_of(LineType t) const;

  friend bool operator==(const TriplePoint&, const TriplePoint&) = default;
};

/// Corner pairing of a descendent disk. `Cross` joins a1 with b2 and a2 with b1
/// under R-6; `Parallel` joins a1 with b1 and a2 with b2.
enum class Pairing : std::uint8_t { Cross, Parallel };

/// Decker level of a disk boundary arc: upper lies on S_a, lower on S_b.
enum class Level : std::uint8_t { Upper, Lower };

constexpr Level swapped(Level l) { return l == Level::Upper ? Level::Lower : Level::Upper; }
constexpr Pairing toggled(Pairing p) { return p == Pairing::Cross ? Pairing::Parallel : Pairing::Cross; }

std::string_view to_string(Pairing p);
std::string_view to_string(Level l);

/// Combinatorial content of a descendent disk. The corners a1, a2 are end1/end2
/// of edge1 and b1, b2 are end1/end2 of edge2. A disk is intact when its two
/// boundary arcs sit on opposite decker levels.
struct DescendentDisk {
  std::string id;
  std::string edge1;
  std::string edge2;
  Pairing pair = Pairing::Cross;
  Level level1 = Level::Upper;
  Level level2 = Level::Lower;

  bool levels_intact() const { return level1 != level2; }

  friend bool operator==(const DescendentDisk&, const DescendentDisk&) = default;
};

/// Raw material for a complex. Ids are the map keys and must match the
/// records' own id fields.
struct ComplexParts {
  std::map<std::string, TriplePoint> triples;
  std::set<std::string> branches;
  std::map<std::string, DoubleEdge> edges;
  std::map<std::string, DescendentDisk> disks;
};

/// Thrown when an operation requiring a well-formed complex meets a broken one,
/// or when an id lookup fails.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable singularity complex. Construction normalizes orientation only:
/// each arc is stored with end1 < end2 and each disk with edge1 < edge2, with
/// disk pairing and levels adjusted so the meaning is unchanged. Malformed
/// content is kept as is so validate() can report it.
class Complex {
 public:
  Complex() = default;
  explicit Complex(ComplexParts parts);

  const std::map<std::string, TriplePoint>& triples() const { return parts_.triples; }
  const std::set<std::string>& branches() const { return parts_.branches; }
  const std::map<std::string, DoubleEdge>& edges() const { return parts_.edges; }
  const std::map<std::string, DescendentDisk>& disks() const { return parts_.disks; }
  const ComplexParts& parts() const { return parts_; }

  const DoubleEdge& edge(const std::string& id) const;
  const TriplePoint& triple(const std::string& id) const;
  const DescendentDisk& disk(const std::string& id) const;

  bool has_edge(const std::string& id) const { return parts_.edges.contains(id); }

  /// Edge occupying an endpoint, if any. Requires a well-formed complex for a
  /// unique answer; on duplicates the smallest edge id wins.
  std::optional<std::string> edge_at(const Endpoint& e) const;

  /// Id `base.k` for the smallest k >= 1 not used by any edge, disk, triple or
  /// branch point nor contained in `taken`.
  std::string fresh_id(const std::string& base, const std::set<std::string>& taken = {}) const;

  friend bool operator==(const Complex& a, const Complex& b);

 private:
  ComplexParts parts_;
  std::map<Endpoint, std::string> slot_owner_;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  enum class Kind : std::uint8_t {
    DanglingReference,
    SlotCoverage,
    TypeBijection,
    CountingIdentity,
    DegenerateArc,
    DiskEdges,
    DiskLevels,
  };
  Kind kind;
  std::string message;
};

std::string_view to_string(Violation::Kind k);

struct ValidationReport {
  std::vector<Violation> violations;
  std::size_t triple_points = 0;
  std::size_t branch_points = 0;
  std::size_t arcs = 0;
  std::size_t circles = 0;

  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const Complex& complex);

/// Throws StructuralError naming the first incidence violation. Disks with
/// collapsed levels are tolerated.
void require_well_formed(const Complex& complex);

// ---------------------------------------------------------------------------
// Double curves

enum class CurveKind : std::uint8_t { Open, Closed };

std::string_view to_string(CurveKind k);

/// A maximal chain of double edges glued through opposite slots. The id is the
/// smallest edge id on the curve. Edge lists are in canonical form: open curves
/// start at the smaller branch point id, closed curves start at the smallest
/// edge id and run in the direction whose second edge id is smaller.
struct DoubleCurve {
  std::string id;
  std::vector<std::string> edges;
  CurveKind kind = CurveKind::Closed;

  friend bool operator==(const DoubleCurve&, const DoubleCurve&) = default;
};

class CurveTrace {
 public:
  CurveTrace() = default;
  explicit CurveTrace(std::vector<DoubleCurve> curves);

  /// Sorted by curve id.
  const std::vector<DoubleCurve>& curves() const { return curves_; }
  const DoubleCurve& curve(const std::string& curve_id) const;
  bool has_curve(const std::string& curve_id) const { return index_.contains(curve_id); }
  const std::string& curve_of(const std::string& edge_id) const;
  std::size_t index_of(const std::string& curve_id) const;

  /// Curve id through the given line of a triple point.
  const std::string& curve_through(const Complex& complex, const std::string& triple,
                                   std::uint8_t line) const;

 private:
  std::vector<DoubleCurve> curves_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, std::string> edge_curve_;
};

CurveTrace trace_curves(const Complex& complex);

std::string curve_of(const Complex& complex, const std::string& edge_id);

struct Census {
  std::size_t triple_points = 0;
  std::size_t branch_points = 0;
  std::size_t arcs = 0;
  std::size_t circles = 0;
  std::size_t open_curves = 0;
  std::size_t closed_curves = 0;

  friend bool operator==(const Census&, const Census&) = default;
};

Census census(const Complex& complex);

}  // namespace skd
