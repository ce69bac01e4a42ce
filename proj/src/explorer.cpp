#include "skd/explorer.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <random>
#include <thread>

#include "skd/format.hpp"

namespace skd {

EnumerationRefused::EnumerationRefused(std::size_t curves, std::uint64_t cap)
    : std::runtime_error("refusing to enumerate 2^" + std::to_string(curves) + " subsets of " +
                         std::to_string(curves) + " curves: above the cap of " + std::to_string(cap) +
                         " candidates; pass a maximum size"),
      curves_(curves),
      cap_(cap) {}

std::uint64_t candidate_count(std::size_t n, std::optional<std::size_t> max_size) {
  std::size_t k_max = std::min(n, max_size.value_or(n));
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(n, k)
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (total > UINT64_MAX - binom) return UINT64_MAX;
    total += binom;
    if (k < n) {
      unsigned __int128 next = static_cast<unsigned __int128>(binom) * (n - k) / (k + 1);
      binom = next > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(next);
    }
  }
  return total;
}

namespace {

// Per-triple curve indices of its three lines and the line-type bit of each.
struct TripleMask {
  std::array<std::size_t, 3> curve;
  std::array<unsigned, 3> type_bit;
};

struct Checker {
  std::vector<TripleMask> triples;
  std::array<bool, 8> valid{};

  Checker(const Complex& complex, const CurveTrace& trace) {
    for (unsigned b = 0; b < 8; ++b) valid[b] = is_valid_flip(LineTypeSet::from_bits(b));
    for (const auto& [id, tp] : complex.triples()) {
      TripleMask m{};
      for (std::uint8_t l = 0; l < 3; ++l) {
        m.curve[l] = trace.index_of(trace.curve_through(complex, id, l));
        m.type_bit[l] = 1u << static_cast<unsigned>(tp.lines[l]);
      }
      triples.push_back(m);
    }
  }

  bool exchangeable(const std::vector<bool>& in) const {
    for (const auto& t : triples) {
      unsigned bits = 0;
      for (int l = 0; l < 3; ++l) {
        if (in[t.curve[l]]) bits |= t.type_bit[l];
      }
      if (!valid[bits]) return false;
    }
    return true;
  }
};

// Combinations of {0..n-1} by size, each size in lexicographic order.
std::vector<std::vector<std::size_t>> candidates(std::size_t n, std::size_t k_max) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 0; k <= k_max; ++k) {
    std::vector<std::size_t> c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = i;
    while (true) {
      out.push_back(c);
      std::size_t i = k;
      while (i > 0 && c[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++c[i - 1];
      for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
    }
  }
  return out;
}

template <class F>
void parallel_for(std::size_t count, unsigned jobs, F body) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<ExchangeSet> enumerate_exchangeable(const Complex& complex, const EnumerationOptions& options) {
  auto trace = trace_curves(complex);
  const std::size_t n = trace.curves().size();
  if (!options.max_size && candidate_count(n, std::nullopt) > options.cap) throw EnumerationRefused(n, options.cap);
  const std::size_t k_max = std::min(n, options.max_size.value_or(n));

  Checker checker(complex, trace);
  auto cands = candidates(n, k_max);
  std::vector<char> keep(cands.size(), 0);
  parallel_for(cands.size(), options.jobs, [&](std::size_t i) {
    std::vector<bool> in(n, false);
    for (auto c : cands[i]) in[c] = true;
    keep[i] = checker.exchangeable(in);
  });

  std::vector<ExchangeSet> out;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!keep[i]) continue;
    ExchangeSet s;
    for (auto c : cands[i]) s.insert(trace.curves()[c].id);
    out.push_back(std::move(s));
  }
  return out;
}

DuReport du_index_upper_bound(const Complex& complex, const TrivialityOracle& oracle,
                              const EnumerationOptions& options) {
  auto trace = trace_curves(complex);
  auto sets = enumerate_exchangeable(complex, options);
  DuReport report;
  report.witnesses.resize(sets.size());
  parallel_for(sets.size(), options.jobs, [&](std::size_t i) {
    auto& w = report.witnesses[i];
    w.gamma = sets[i];
    w.size = sets[i].size();
    w.exchangeable = true;
    w.dd = satisfies_dd_condition(complex, trace, sets[i]);
    w.fingerprint = fingerprint(crossing_change(complex, sets[i]));
    w.verdict = oracle.lookup(w.fingerprint);
  });
  for (const auto& w : report.witnesses) {
    if (w.positive() && (!report.best_size || w.size < *report.best_size)) {
      report.best_size = w.size;
      report.best = w.gamma;
    }
  }
  return report;
}

std::string_view to_string(DuVerdict v) {
  switch (v) {
    case DuVerdict::Yes: return "yes";
    case DuVerdict::No: return "no";
    case DuVerdict::Unknown: break;
  }
  return "unknown";
}

DuExchangeability is_du_exchangeable(const Complex& complex, const TrivialityOracle& oracle,
                                     const EnumerationOptions& options) {
  auto report = du_index_upper_bound(complex, oracle, options);
  if (report.best) return {DuVerdict::Yes, report.best};
  // A bounded scan cannot rule anything out.
  if (options.max_size && *options.max_size < trace_curves(complex).curves().size()) return {};
  bool all_nontrivial = std::all_of(report.witnesses.begin(), report.witnesses.end(), [](const DuWitness& w) {
    return !w.dd || w.verdict == Verdict::Nontrivial;
  });
  return {all_nontrivial ? DuVerdict::No : DuVerdict::Unknown, std::nullopt};
}

// ---------------------------------------------------------------------------

namespace {

// Fixed algorithms so a seed yields the same complex with any standard library.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % bound;
}

template <class T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[draw_below(rng, i)]);
}

std::string padded(char prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%03zu", prefix, i);
  return buf;
}

}  // namespace

RandomComplex generate_random_complex(std::uint64_t seed, const RandomBudget& budget) {
  std::mt19937_64 rng(seed);
  ComplexParts parts;
  RandomComplex out;

  std::vector<Endpoint> ends;
  for (std::size_t i = 0; i < budget.triples; ++i) {
    TriplePoint tp{padded('T', i + 1), {}};
    std::vector<LineType> types(kAllLineTypes.begin(), kAllLineTypes.end());
    shuffle(types, rng);
    std::copy(types.begin(), types.end(), tp.lines.begin());
    for (std::uint8_t l = 0; l < 3; ++l) {
      ends.push_back(Endpoint::triple(tp.id, l, Side::A));
      ends.push_back(Endpoint::triple(tp.id, l, Side::B));
    }
    parts.triples[tp.id] = tp;
  }
  std::size_t branches = budget.branches;
  if (branches % 2 == 1) {
    ++branches;
    out.added_branch = true;
  }
  for (std::size_t i = 0; i < branches; ++i) {
    parts.branches.insert(padded('B', i + 1));
    ends.push_back(Endpoint::branch(padded('B', i + 1)));
  }

  shuffle(ends, rng);
  std::vector<std::string> edge_ids;
  for (std::size_t i = 0; i + 1 < ends.size(); i += 2) {
    std::string id = padded('e', i / 2 + 1);
    parts.edges[id] = DoubleEdge{id, Arc{ends[i], ends[i + 1]}};
    edge_ids.push_back(id);
  }
  for (std::size_t i = 0; i < budget.circles; ++i) {
    std::string id = padded('c', i + 1);
    parts.edges[id] = DoubleEdge{id, Circle{}};
    edge_ids.push_back(id);
  }

  if (edge_ids.size() >= 2) {
    for (std::size_t i = 0; i < budget.disks; ++i) {
      auto a = draw_below(rng, edge_ids.size());
      auto b = draw_below(rng, edge_ids.size() - 1);
      if (b >= a) ++b;
      DescendentDisk d{padded('P', i + 1), edge_ids[a], edge_ids[b], draw_below(rng, 2) ? Pairing::Cross : Pairing::Parallel,
                       Level::Upper, Level::Lower};
      if (draw_below(rng, 2)) std::swap(d.level1, d.level2);
      parts.disks[d.id] = d;
    }
  }
  out.complex = Complex(std::move(parts));
  return out;
}

}  // namespace skd
