#pragma once

// Crossing change along a union of double curves, exchangeability and the
// descendent-disk condition.

#include <bitset>
#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include "skd/complex.hpp"

namespace skd {

/// A union of double curves of a fixed complex, by curve id.
class ExchangeSet {
 public:
  ExchangeSet() = default;
  ExchangeSet(std::initializer_list<std::string> ids) : curves_(ids) {}
  explicit ExchangeSet(std::set<std::string> ids) : curves_(std::move(ids)) {}

  static ExchangeSet all(const CurveTrace& trace);

  const std::set<std::string>& curves() const { return curves_; }
  bool contains(const std::string& curve_id) const { return curves_.contains(curve_id); }
  std::size_t size() const { return curves_.size(); }
  bool empty() const { return curves_.empty(); }

  void insert(const std::string& id) { curves_.insert(id); }
  void erase(const std::string& id) { curves_.erase(id); }

  /// All curves of the trace not in this set.
  ExchangeSet complement(const CurveTrace& trace) const;

  /// Throws StructuralError for ids that are not curves of the trace.
  void check_against(const CurveTrace& trace) const;

  std::string to_string() const;

  friend bool operator==(const ExchangeSet&, const ExchangeSet&) = default;
  friend auto operator<=>(const ExchangeSet&, const ExchangeSet&) = default;

 private:
  std::set<std::string> curves_;
};

/// Subset of {BM, BT, MT}; bit i corresponds to kAllLineTypes[i].
class LineTypeSet {
 public:
  LineTypeSet() = default;
  LineTypeSet(std::initializer_list<LineType> types) {
    for (auto t : types) insert(t);
  }
  static LineTypeSet from_bits(unsigned bits) {
    LineTypeSet s;
    s.bits_ = std::bitset<3>(bits & 7u);
    return s;
  }

  void insert(LineType t) { bits_.set(static_cast<std::size_t>(t)); }
  bool contains(LineType t) const { return bits_.test(static_cast<std::size_t>(t)); }
  unsigned bits() const { return static_cast<unsigned>(bits_.to_ulong()); }
  std::size_t size() const { return bits_.count(); }
  LineTypeSet complement() const { return from_bits(~bits() & 7u); }
  std::string to_string() const;

  friend bool operator==(const LineTypeSet&, const LineTypeSet&) = default;

 private:
  std::bitset<3> bits_;
};

struct FlipSet {
  std::string triple;
  std::array<bool, 3> flipped_lines{};  // indexed by line number

  LineTypeSet types(const TriplePoint& tp) const;
};

/// Reversing the height relation between the two sheets of every flipped line
/// type (top>middle on MT, top>bottom on BT, middle>bottom on BM) still yields a
/// total order of the three sheets.
bool is_valid_flip(LineTypeSet flipped);

std::vector<FlipSet> flip_sets(const Complex& complex, const CurveTrace& trace, const ExchangeSet& gamma);
std::vector<FlipSet> flip_sets(const Complex& complex, const ExchangeSet& gamma);

bool is_exchangeable(const Complex& complex, const CurveTrace& trace, const ExchangeSet& gamma);
bool is_exchangeable(const Complex& complex, const ExchangeSet& gamma);

/// First triple point whose flip set is invalid, if any.
std::optional<std::string> first_invalid_triple(const Complex& complex, const CurveTrace& trace,
                                                const ExchangeSet& gamma);

class NotExchangeableError : public std::runtime_error {
 public:
  NotExchangeableError(std::string triple, LineTypeSet flipped);
  const std::string& triple() const { return triple_; }

 private:
  std::string triple_;
};

/// D(Γ): line types at every triple point are relabelled by the sheet roles of
/// the new height order; disk arcs on flipped curves swap decker level.
Complex crossing_change(const Complex& complex, const ExchangeSet& gamma);

/// New line type for each line of a triple point after flipping `flipped`.
std::array<LineType, 3> relabel_lines(const std::array<LineType, 3>& lines, LineTypeSet flipped);

bool satisfies_dd_condition(const Complex& complex, const CurveTrace& trace, const ExchangeSet& gamma);
bool satisfies_dd_condition(const Complex& complex, const ExchangeSet& gamma);

}  // namespace skd
