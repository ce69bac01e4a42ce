#pragma once

// t-descendent Roseman moves as structural rewrites of a singularity complex,
// and transport of an exchangeable union Γ through them.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "skd/complex.hpp"
#include "skd/crossing.hpp"

namespace skd {

/// Moves permitted in a t-descendent sequence. R-2+, R-3+ and R-5+ create triple
/// points and have no representation here.
enum class MoveKind : std::uint8_t { R1Plus, R1Minus, R2Minus, R3Minus, R4Plus, R4Minus, R5Minus, R6 };

inline constexpr std::array<MoveKind, 8> kAllMoveKinds{MoveKind::R1Plus,  MoveKind::R1Minus, MoveKind::R2Minus,
                                                       MoveKind::R3Minus, MoveKind::R4Plus,  MoveKind::R4Minus,
                                                       MoveKind::R5Minus, MoveKind::R6};

/// Script token, e.g. "R1+", "R5-", "R6".
std::string_view to_string(MoveKind k);

enum class KindTokenStatus : std::uint8_t { Allowed, Forbidden, Unknown };

/// Accepts "R1+", "R1-", ..., "R6" and the spelled forms "R1_PLUS", "R2_MINUS".
/// The triple-point creating forward moves R2+, R3+, R5+ are Forbidden.
KindTokenStatus classify_kind_token(std::string_view token, MoveKind* kind = nullptr);

/// A disk declared together with a new curve by R1+ or R4+. It joins the new
/// edge (edge1) with an existing edge (edge2).
struct NewDisk {
  std::string id;
  std::string partner_edge;
  Pairing pair = Pairing::Cross;
  Level level_new = Level::Upper;
  Level level_partner = Level::Lower;

  friend bool operator==(const NewDisk&, const NewDisk&) = default;
};

struct R1PlusMove {
  std::string circle;
  std::optional<NewDisk> disk;
  friend bool operator==(const R1PlusMove&, const R1PlusMove&) = default;
};

struct R1MinusMove {
  std::string circle;
  std::vector<std::string> drop_disks;
  friend bool operator==(const R1MinusMove&, const R1MinusMove&) = default;
};

struct R4PlusMove {
  std::string arc;
  std::string branch1;
  std::string branch2;
  std::optional<NewDisk> disk;
  friend bool operator==(const R4PlusMove&, const R4PlusMove&) = default;
};

struct R4MinusMove {
  std::string arc;
  std::vector<std::string> drop_disks;
  friend bool operator==(const R4MinusMove&, const R4MinusMove&) = default;
};

/// Cancels triple points t1, t2 together with the two closed curves passing
/// through exactly those two points. Curves may be named by any of their edges.
struct R2MinusMove {
  std::string t1;
  std::string t2;
  std::array<std::string, 2> curves;
  std::vector<std::string> drop_disks;
  friend bool operator==(const R2MinusMove&, const R2MinusMove&) = default;
};

/// Removes the paraboloid around `center`: the six triple points adjacent to
/// the center along its lines and the three closed curves joining them.
struct R3MinusMove {
  std::string center;
  std::array<std::string, 6> triples;
  std::array<std::string, 3> curves;
  std::vector<std::string> drop_disks;
  friend bool operator==(const R3MinusMove&, const R3MinusMove&) = default;
};

/// How the two lines of T other than the branch line reconnect once T is gone.
/// Pass: each line closes up on itself. Loop: the edge joining the two lines at
/// T vanishes and the two remaining stubs join.
enum class R5Splice : std::uint8_t { Pass, Loop };

struct R5MinusMove {
  std::string triple;
  std::string edge;  // joins a branch point to `triple`
  R5Splice splice = R5Splice::Pass;
  std::vector<std::string> drop_disks;
  friend bool operator==(const R5MinusMove&, const R5MinusMove&) = default;
};

struct R6Move {
  std::string disk;
  friend bool operator==(const R6Move&, const R6Move&) = default;
};

using MoveInstance = std::variant<R1PlusMove, R1MinusMove, R2MinusMove, R3MinusMove, R4PlusMove, R4MinusMove,
                                  R5MinusMove, R6Move>;

MoveKind kind_of(const MoveInstance& m);

class MoveError : public std::runtime_error {
 public:
  MoveError(MoveKind kind, const std::string& what);
  MoveKind kind() const { return kind_; }

 private:
  MoveKind kind_;
};

/// Result of a rewrite. `edge_image` maps every edge of the input to the edge
/// of the output it became part of, or to nullopt when it was deleted.
struct MoveOutcome {
  Complex result;
  std::map<std::string, std::optional<std::string>> edge_image;
  std::vector<std::string> created_edges;
  std::vector<std::string> dropped_disks;
};

/// Applies one move; throws MoveError when the locus fails a structural check.
/// Never partially applied.
MoveOutcome apply_move_detailed(const Complex& complex, const MoveInstance& m);
Complex apply_move(const Complex& complex, const MoveInstance& m);

/// Γ' on the rewritten complex, per the case tables of the transport lemmas.
/// Throws MoveError for membership patterns those tables exclude.
ExchangeSet transport(const Complex& complex, const ExchangeSet& gamma, const MoveInstance& m);
ExchangeSet transport(const Complex& complex, const ExchangeSet& gamma, const MoveInstance& m,
                      const MoveOutcome& outcome);

/// The same move, expressed on D(Γ). Only declared disk levels change: a new
/// disk whose partner curve lies in Γ has both its levels swapped.
MoveInstance relabel_for_crossing_change(const Complex& complex, const ExchangeSet& gamma, const MoveInstance& m);

struct TrailEntry {
  std::size_t step = 0;  // 1-based
  MoveKind kind = MoveKind::R6;
  std::string fingerprint;
  ExchangeSet gamma;
  bool exchangeable = false;
  bool dd_condition = false;
  std::size_t triple_points = 0;
};

struct SequenceResult {
  Complex complex;
  ExchangeSet gamma;
  std::vector<TrailEntry> trail;
};

class SequenceError : public std::runtime_error {
 public:
  SequenceError(std::size_t step, const std::string& reason);
  std::size_t step() const { return step_; }  // 1-based; 0 for the initial state

 private:
  std::size_t step_;
};

/// Folds apply_move and transport. Γ must be exchangeable and dd-satisfying on
/// the input; both are re-verified after every step.
SequenceResult apply_sequence(const Complex& complex, const ExchangeSet& gamma, std::span<const MoveInstance> seq);

/// True iff every token names a t-descendent move kind. Throws
/// std::invalid_argument on a token that names no move at all.
bool validate_t_descendent(std::span<const std::string> kind_tokens);

}  // namespace skd
