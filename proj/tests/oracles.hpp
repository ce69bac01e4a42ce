#pragma once

// Reference computations for the tests. None of these call into the code they
// check beyond reading the complex's raw records.

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "skd/complex.hpp"

namespace oracle {

// Sheets 0 bottom, 1 middle, 2 top; the pair each line type relates.
inline std::pair<int, int> sheet_pair(skd::LineType t) {
  switch (t) {
    case skd::LineType::BM: return {0, 1};
    case skd::LineType::BT: return {0, 2};
    case skd::LineType::MT: return {1, 2};
  }
  return {0, 0};
}

// Heights after flipping: some permutation of the three sheets must agree with
// every relation, the flipped ones reversed.
inline std::optional<std::array<int, 3>> consistent_order(const std::set<skd::LineType>& flipped) {
  std::array<int, 3> height{0, 1, 2};
  do {
    bool ok = true;
    for (auto t : skd::kAllLineTypes) {
      auto [lo, hi] = sheet_pair(t);
      bool above = height[hi] > height[lo];
      if (above == flipped.contains(t)) ok = false;
    }
    if (ok) return height;
  } while (std::next_permutation(height.begin(), height.end()));
  return std::nullopt;
}

inline bool acyclic_after_flip(const std::set<skd::LineType>& flipped) {
  return consistent_order(flipped).has_value();
}

inline std::set<skd::LineType> subset_of_bits(unsigned bits) {
  std::set<skd::LineType> s;
  for (unsigned i = 0; i < 3; ++i) {
    if (bits & (1u << i)) s.insert(skd::kAllLineTypes[i]);
  }
  return s;
}

// Union-find over edge ids: edges meeting at opposite slots of one line are on
// the same curve.
class UnionFind {
 public:
  explicit UnionFind(const std::vector<std::string>& ids) {
    for (const auto& id : ids) parent_[id] = id;
  }
  std::string find(std::string x) {
    while (parent_.at(x) != x) x = parent_.at(x);
    return x;
  }
  void unite(const std::string& a, const std::string& b) { parent_[find(a)] = find(b); }

 private:
  std::map<std::string, std::string> parent_;
};

using Partition = std::set<std::set<std::string>>;

inline Partition union_find_partition(const skd::Complex& c) {
  std::vector<std::string> ids;
  std::map<std::string, std::string> slot_edge;  // "T.l.s" -> edge
  for (const auto& [id, e] : c.edges()) {
    ids.push_back(id);
    if (e.is_circle()) continue;
    for (const auto* end : {&e.arc().end1, &e.arc().end2}) {
      if (end->is_triple()) slot_edge[end->token()] = id;
    }
  }
  UnionFind uf(ids);
  for (const auto& [tid, tp] : c.triples()) {
    for (int l = 0; l < 3; ++l) {
      auto a = "T:" + tid + "." + std::to_string(l) + ".a";
      auto b = "T:" + tid + "." + std::to_string(l) + ".b";
      uf.unite(slot_edge.at(a), slot_edge.at(b));
    }
  }
  std::map<std::string, std::set<std::string>> groups;
  for (const auto& id : ids) groups[uf.find(id)].insert(id);
  Partition out;
  for (auto& [root, g] : groups) out.insert(g);
  return out;
}

// Edge group containing the edge at a slot.
inline std::map<std::string, std::size_t> group_index(const Partition& p) {
  std::map<std::string, std::size_t> idx;
  std::size_t i = 0;
  for (const auto& g : p) {
    for (const auto& e : g) idx[e] = i;
    ++i;
  }
  return idx;
}

// Exchangeability of a set of edge groups, from first principles.
inline bool exchangeable_groups(const skd::Complex& c, const Partition& p, const std::set<std::size_t>& chosen) {
  auto idx = group_index(p);
  std::map<std::string, std::string> slot_edge;
  for (const auto& [id, e] : c.edges()) {
    if (e.is_circle()) continue;
    for (const auto* end : {&e.arc().end1, &e.arc().end2}) {
      if (end->is_triple()) slot_edge[end->token()] = id;
    }
  }
  for (const auto& [tid, tp] : c.triples()) {
    std::set<skd::LineType> flipped;
    for (int l = 0; l < 3; ++l) {
      auto edge = slot_edge.at("T:" + tid + "." + std::to_string(l) + ".a");
      if (chosen.contains(idx.at(edge))) flipped.insert(tp.lines[l]);
    }
    if (!acyclic_after_flip(flipped)) return false;
  }
  return true;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace oracle
