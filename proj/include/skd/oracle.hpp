#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace skd {

enum class Verdict : std::uint8_t { Trivial, Nontrivial, Unknown };

std::string_view to_string(Verdict v);

/// Declared triviality annotations keyed by complex fingerprint. Nothing here is
/// computed; absent keys are unknown.
class TrivialityOracle {
 public:
  void annotate(std::string fingerprint, Verdict v) { entries_[std::move(fingerprint)] = v; }

  Verdict lookup(const std::string& fingerprint) const {
    auto it = entries_.find(fingerprint);
    return it == entries_.end() ? Verdict::Unknown : it->second;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, Verdict>& entries() const { return entries_; }

  /// Entries of `other` override ours.
  void merge(const TrivialityOracle& other) {
    for (const auto& [k, v] : other.entries_) entries_[k] = v;
  }

 private:
  std::map<std::string, Verdict> entries_;
};

}  // namespace skd
