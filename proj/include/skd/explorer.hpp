#pragma once

// Enumeration of exchangeable unions, du-exchangeability against declared
// triviality annotations, and seeded random complexes.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skd/complex.hpp"
#include "skd/crossing.hpp"
#include "skd/oracle.hpp"

namespace skd {

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 20;

struct EnumerationOptions {
  std::optional<std::size_t> max_size;
  std::uint64_t cap = kDefaultEnumerationCap;  // candidate subsets allowed without max_size
  unsigned jobs = 1;
};

class EnumerationRefused : public std::runtime_error {
 public:
  EnumerationRefused(std::size_t curves, std::uint64_t cap);
  std::size_t curves() const { return curves_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::size_t curves_;
  std::uint64_t cap_;
};

/// Every exchangeable Γ, ordered by size and then lexicographically by curve id.
/// Refuses when 2^n exceeds the cap and no max_size is given.
std::vector<ExchangeSet> enumerate_exchangeable(const Complex& complex, const EnumerationOptions& options = {});

/// Number of candidate subsets the enumeration visits.
std::uint64_t candidate_count(std::size_t curves, std::optional<std::size_t> max_size);

struct DuWitness {
  ExchangeSet gamma;
  std::size_t size = 0;
  bool exchangeable = false;
  bool dd = false;
  Verdict verdict = Verdict::Unknown;  // of D(Γ)
  std::string fingerprint;             // of D(Γ)

  bool positive() const { return exchangeable && dd && verdict == Verdict::Trivial; }
};

/// Results for one diagram. best_size bounds the du-exchange index from above
/// for this diagram only; other diagrams of the same surface-knot may do better.
struct DuReport {
  std::vector<DuWitness> witnesses;
  std::optional<std::size_t> best_size;
  std::optional<ExchangeSet> best;

  static constexpr const char* kScope =
      "upper bound from this diagram only; the index minimizes over all diagrams of the surface-knot";
};

/// Lists every exchangeable Γ with its dd flag and the oracle verdict on D(Γ).
/// Γ = ∅ is D itself, so a diagram annotated trivial gives best_size 0.
DuReport du_index_upper_bound(const Complex& complex, const TrivialityOracle& oracle,
                              const EnumerationOptions& options = {});

enum class DuVerdict : std::uint8_t { Yes, No, Unknown };

std::string_view to_string(DuVerdict v);

struct DuExchangeability {
  DuVerdict verdict = DuVerdict::Unknown;
  std::optional<ExchangeSet> witness;
};

/// Yes with a smallest witness when some candidate is fully positive; No when
/// every exchangeable, dd-satisfying Γ is annotated nontrivial; Unknown otherwise.
DuExchangeability is_du_exchangeable(const Complex& complex, const TrivialityOracle& oracle,
                                     const EnumerationOptions& options = {});

struct RandomBudget {
  std::size_t triples = 2;
  std::size_t branches = 2;
  std::size_t circles = 1;
  std::size_t disks = 1;
};

struct RandomComplex {
  Complex complex;
  bool added_branch = false;  // an extra branch point made the endpoint count even
};

/// Triple slots and branch points paired uniformly at random into arcs, plus
/// circles and disks between random edges. Deterministic per seed.
RandomComplex generate_random_complex(std::uint64_t seed, const RandomBudget& budget);

}  // namespace skd
