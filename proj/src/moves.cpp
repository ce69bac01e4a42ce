#include "skd/moves.hpp"

#include <algorithm>
#include <sstream>

#include "skd/format.hpp"

namespace skd {

std::string_view to_string(MoveKind k) {
  switch (k) {
    case MoveKind::R1Plus: return "R1+";
    case MoveKind::R1Minus: return "R1-";
    case MoveKind::R2Minus: return "R2-";
    case MoveKind::R3Minus: return "R3-";
    case MoveKind::R4Plus: return "R4+";
    case MoveKind::R4Minus: return "R4-";
    case MoveKind::R5Minus: return "R5-";
    case MoveKind::R6: return "R6";
  }
  return "?";
}

KindTokenStatus classify_kind_token(std::string_view token, MoveKind* kind) {
  static const std::map<std::string_view, MoveKind> allowed{
      {"R1+", MoveKind::R1Plus},       {"R1_PLUS", MoveKind::R1Plus},   {"R1-", MoveKind::R1Minus},
      {"R1_MINUS", MoveKind::R1Minus}, {"R2-", MoveKind::R2Minus},      {"R2_MINUS", MoveKind::R2Minus},
      {"R3-", MoveKind::R3Minus},      {"R3_MINUS", MoveKind::R3Minus}, {"R4+", MoveKind::R4Plus},
      {"R4_PLUS", MoveKind::R4Plus},   {"R4-", MoveKind::R4Minus},      {"R4_MINUS", MoveKind::R4Minus},
      {"R5-", MoveKind::R5Minus},      {"R5_MINUS", MoveKind::R5Minus}, {"R6", MoveKind::R6},
  };
  static const std::set<std::string_view> forbidden{"R2+", "R2_PLUS", "R3+", "R3_PLUS", "R5+", "R5_PLUS"};
  if (auto it = allowed.find(token); it != allowed.end()) {
    if (kind) *kind = it->second;
    return KindTokenStatus::Allowed;
  }
  return forbidden.contains(token) ? KindTokenStatus::Forbidden : KindTokenStatus::Unknown;
}

MoveKind kind_of(const MoveInstance& m) {
  return std::visit(
      [](const auto& mv) {
        using T = std::decay_t<decltype(mv)>;
        if constexpr (std::is_same_v<T, R1PlusMove>) return MoveKind::R1Plus;
        else if constexpr (std::is_same_v<T, R1MinusMove>) return MoveKind::R1Minus;
        else if constexpr (std::is_same_v<T, R2MinusMove>) return MoveKind::R2Minus;
        else if constexpr (std::is_same_v<T, R3MinusMove>) return MoveKind::R3Minus;
        else if constexpr (std::is_same_v<T, R4PlusMove>) return MoveKind::R4Plus;
        else if constexpr (std::is_same_v<T, R4MinusMove>) return MoveKind::R4Minus;
        else if constexpr (std::is_same_v<T, R5MinusMove>) return MoveKind::R5Minus;
        else return MoveKind::R6;
      },
      m);
}

MoveError::MoveError(MoveKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

SequenceError::SequenceError(std::size_t step, const std::string& reason)
    : std::runtime_error(step == 0 ? "initial state: " + reason : "step " + std::to_string(step) + ": " + reason),
      step_(step) {}

namespace {

const Endpoint& other_end(const Arc& arc, const Endpoint& from) { return arc.end1 == from ? arc.end2 : arc.end1; }

std::size_t closed_count(const CurveTrace& t) {
  return static_cast<std::size_t>(
      std::count_if(t.curves().begin(), t.curves().end(), [](const auto& c) { return c.kind == CurveKind::Closed; }));
}

bool id_in_use(const Complex& d, const std::string& id) {
  return d.edges().contains(id) || d.disks().contains(id) || d.triples().contains(id) || d.branches().contains(id);
}

// Disks touching `affected` edges must be named in `drop`, and `drop` may only
// name such disks.
void check_drop_list(MoveKind kind, const Complex& d, const std::set<std::string>& affected,
                     const std::vector<std::string>& drop) {
  std::set<std::string> listed(drop.begin(), drop.end());
  for (const auto& id : listed) {
    const auto& disk = d.disk(id);
    if (!affected.contains(disk.edge1) && !affected.contains(disk.edge2)) {
      throw MoveError(kind, "disk " + id + " is listed for deletion but touches no edge removed by the move");
    }
  }
  for (const auto& [id, disk] : d.disks()) {
    if ((affected.contains(disk.edge1) || affected.contains(disk.edge2)) && !listed.contains(id)) {
      throw MoveError(kind, "disk " + id + " touches an edge removed by the move and is not listed in drop=");
    }
  }
}

/// Removal of triple points whose slots are either on deleted edges or joined
/// pairwise through a junction. Surviving edge chains through junctions fuse
/// into single edges; chains closing on themselves become circles.
struct Contraction {
  std::set<std::string> removed_triples;
  std::set<std::string> deleted_edges;
  std::map<Endpoint, Endpoint> junction;  // symmetric

  void join(const Endpoint& x, const Endpoint& y) {
    junction[x] = y;
    junction[y] = x;
  }
};

MoveOutcome contract(MoveKind kind, const Complex& d, const Contraction& c, const std::vector<std::string>& drop) {
  for (const auto& t : c.removed_triples) {
    for (std::uint8_t line = 0; line < 3; ++line) {
      for (Side side : {Side::A, Side::B}) {
        Endpoint slot = Endpoint::triple(t, line, side);
        auto e = d.edge_at(slot);
        bool on_deleted = e && c.deleted_edges.contains(*e);
        bool joined = c.junction.contains(slot);
        if (on_deleted == joined) {
          throw MoveError(kind, "slot " + slot.token() + (joined ? " is both deleted and spliced" : " is left orphaned"));
        }
        if (joined) {
          auto partner = d.edge_at(c.junction.at(slot));
          if (partner && c.deleted_edges.contains(*partner)) {
            throw MoveError(kind, "slot " + slot.token() + " is spliced to a deleted edge");
          }
        }
      }
    }
  }
  for (const auto& e : c.deleted_edges) {
    const auto& edge = d.edge(e);
    if (edge.is_circle()) continue;
    for (const auto* end : {&edge.arc().end1, &edge.arc().end2}) {
      if (!end->is_triple() || !c.removed_triples.contains(end->owner)) {
        throw MoveError(kind, "deleting edge " + e + " would orphan " + end->token());
      }
    }
  }

  // Edges that will be fused or deleted.
  std::set<std::string> affected = c.deleted_edges;
  std::set<std::string> spliced;
  for (const auto& [slot, partner] : c.junction) {
    if (auto e = d.edge_at(slot)) spliced.insert(*e);
  }
  affected.insert(spliced.begin(), spliced.end());
  check_drop_list(kind, d, affected, drop);

  MoveOutcome out;
  ComplexParts parts = d.parts();
  for (const auto& t : c.removed_triples) parts.triples.erase(t);
  for (const auto& e : c.deleted_edges) {
    parts.edges.erase(e);
    out.edge_image[e] = std::nullopt;
  }
  for (const auto& id : drop) {
    parts.disks.erase(id);
    out.dropped_disks.push_back(id);
  }

  std::set<std::string> visited;
  std::set<std::string> taken;
  auto emit = [&](std::vector<std::string> chain, std::variant<Arc, Circle> shape) {
    std::string base = *std::min_element(chain.begin(), chain.end());
    std::string id = d.fresh_id(base, taken);
    taken.insert(id);
    for (const auto& e : chain) {
      parts.edges.erase(e);
      out.edge_image[e] = id;
    }
    parts.edges[id] = DoubleEdge{id, std::move(shape)};
    out.created_edges.push_back(id);
  };

  // Chains with a surviving end.
  for (const auto& start_edge : spliced) {
    if (visited.contains(start_edge)) continue;
    const Arc& arc = d.edge(start_edge).arc();
    const Endpoint* start = nullptr;
    if (!c.junction.contains(arc.end1)) start = &arc.end1;
    else if (!c.junction.contains(arc.end2)) start = &arc.end2;
    if (!start) continue;

    std::vector<std::string> chain;
    std::string e = start_edge;
    Endpoint from = *start;
    for (;;) {
      chain.push_back(e);
      visited.insert(e);
      Endpoint to = other_end(d.edge(e).arc(), from);
      auto jt = c.junction.find(to);
      if (jt == c.junction.end()) {
        emit(std::move(chain), Arc{*start, to});
        break;
      }
      from = jt->second;
      e = *d.edge_at(from);
    }
  }
  // Whatever remains runs through junctions only.
  for (const auto& start_edge : spliced) {
    if (visited.contains(start_edge)) continue;
    std::vector<std::string> chain;
    std::string e = start_edge;
    Endpoint from = d.edge(e).arc().end1;
    for (;;) {
      chain.push_back(e);
      visited.insert(e);
      Endpoint to = other_end(d.edge(e).arc(), from);
      from = c.junction.at(to);
      e = *d.edge_at(from);
      if (e == start_edge) break;
    }
    emit(std::move(chain), Circle{});
  }

  for (const auto& [id, edge] : d.edges()) out.edge_image.try_emplace(id, id);
  out.result = Complex(std::move(parts));
  return out;
}

// Number of passes of `curve` through the removed triple points.
std::size_t passes_through(const Complex& d, const CurveTrace& trace, const std::string& curve,
                           const std::set<std::string>& triples) {
  std::size_t n = 0;
  for (const auto& t : triples) {
    for (std::uint8_t line = 0; line < 3; ++line) {
      if (trace.curve_through(d, t, line) == curve) ++n;
    }
  }
  return n;
}

void check_postconditions(MoveKind kind, const Complex& before, const CurveTrace& tb, const MoveOutcome& out,
                          long triple_delta, long closed_delta, long open_delta) {
  auto ta = trace_curves(out.result);
  long dt = static_cast<long>(out.result.triples().size()) - static_cast<long>(before.triples().size());
  long dc = static_cast<long>(closed_count(ta)) - static_cast<long>(closed_count(tb));
  long dopen = static_cast<long>(ta.curves().size() - closed_count(ta)) -
               static_cast<long>(tb.curves().size() - closed_count(tb));
  if (dt != triple_delta || dc != closed_delta || dopen != open_delta) {
    std::ostringstream os;
    os << "postcondition failed: triple/closed/open deltas " << dt << "/" << dc << "/" << dopen << ", expected "
       << triple_delta << "/" << closed_delta << "/" << open_delta;
    throw MoveError(kind, os.str());
  }
}

// Each curve through the removed points loses one edge per pass, except that a
// chain closing into a lone circle keeps that one edge.
void check_shortening(MoveKind kind, const Complex& d, const CurveTrace& tb, const MoveOutcome& out,
                      const std::set<std::string>& curves, const std::set<std::string>& removed) {
  auto ta = trace_curves(out.result);
  for (const auto& cid : curves) {
    const auto& curve = tb.curve(cid);
    std::optional<std::string> image;
    for (const auto& e : curve.edges) {
      if (auto img = out.edge_image.at(e)) {
        image = *img;
        break;
      }
    }
    if (!image) throw MoveError(kind, "postcondition failed: curve " + cid + " vanished");
    const auto& after = ta.curve(ta.curve_of(*image));
    std::size_t passes = passes_through(d, tb, cid, removed);
    std::size_t expected = curve.edges.size() - passes;
    if (after.edges.size() == 1 && out.result.edge(after.edges.front()).is_circle() && expected == 0) expected = 1;
    if (after.edges.size() != expected) {
      throw MoveError(kind, "postcondition failed: curve " + cid + " has " + std::to_string(after.edges.size()) +
                                " edges after the move, expected " + std::to_string(expected));
    }
  }
}

std::string resolve_curve(MoveKind kind, const CurveTrace& trace, const std::string& token) {
  try {
    return trace.curve_of(token);
  } catch (const StructuralError&) {
    throw MoveError(kind, "no double curve contains edge '" + token + "'");
  }
}

// ---------------------------------------------------------------------------

MoveOutcome add_new_disk(MoveKind kind, const Complex& d, ComplexParts parts, const std::string& new_edge,
                         const std::optional<NewDisk>& nd) {
  if (nd) {
    if (id_in_use(d, nd->id) || nd->id == new_edge) throw MoveError(kind, "id '" + nd->id + "' is already in use");
    if (!d.has_edge(nd->partner_edge)) throw MoveError(kind, "disk partner edge '" + nd->partner_edge + "' does not exist");
    if (nd->level_new == nd->level_partner) throw MoveError(kind, "declared disk needs one upper and one lower arc");
    parts.disks[nd->id] = DescendentDisk{nd->id, new_edge, nd->partner_edge, nd->pair, nd->level_new, nd->level_partner};
  }
  MoveOutcome out;
  for (const auto& [id, e] : d.edges()) out.edge_image[id] = id;
  out.created_edges.push_back(new_edge);
  out.result = Complex(std::move(parts));
  return out;
}

MoveOutcome apply_r1_plus(const Complex& d, const R1PlusMove& m) {
  constexpr auto K = MoveKind::R1Plus;
  if (m.circle.empty() || id_in_use(d, m.circle)) throw MoveError(K, "id '" + m.circle + "' is unusable for a new circle");
  ComplexParts parts = d.parts();
  parts.edges[m.circle] = DoubleEdge{m.circle, Circle{}};
  return add_new_disk(K, d, std::move(parts), m.circle, m.disk);
}

MoveOutcome apply_r4_plus(const Complex& d, const R4PlusMove& m) {
  constexpr auto K = MoveKind::R4Plus;
  std::set<std::string> ids{m.arc, m.branch1, m.branch2};
  if (ids.size() != 3) throw MoveError(K, "arc and branch point ids must be distinct");
  for (const auto& id : ids) {
    if (id.empty() || id_in_use(d, id)) throw MoveError(K, "id '" + id + "' is already in use");
  }
  ComplexParts parts = d.parts();
  parts.branches.insert(m.branch1);
  parts.branches.insert(m.branch2);
  parts.edges[m.arc] = DoubleEdge{m.arc, Arc{Endpoint::branch(m.branch1), Endpoint::branch(m.branch2)}};
  return add_new_disk(K, d, std::move(parts), m.arc, m.disk);
}

MoveOutcome remove_whole_curve(MoveKind kind, const Complex& d, const std::string& edge_id,
                               const std::vector<std::string>& drop) {
  check_drop_list(kind, d, {edge_id}, drop);
  MoveOutcome out;
  ComplexParts parts = d.parts();
  const auto& edge = d.edge(edge_id);
  if (!edge.is_circle()) {
    parts.branches.erase(edge.arc().end1.owner);
    parts.branches.erase(edge.arc().end2.owner);
  }
  parts.edges.erase(edge_id);
  for (const auto& id : drop) {
    parts.disks.erase(id);
    out.dropped_disks.push_back(id);
  }
  for (const auto& [id, e] : d.edges()) out.edge_image[id] = id;
  out.edge_image[edge_id] = std::nullopt;
  out.result = Complex(std::move(parts));
  return out;
}

MoveOutcome apply_r1_minus(const Complex& d, const R1MinusMove& m) {
  constexpr auto K = MoveKind::R1Minus;
  if (!d.has_edge(m.circle) || !d.edge(m.circle).is_circle()) {
    throw MoveError(K, "'" + m.circle + "' is not a double-point circle");
  }
  return remove_whole_curve(K, d, m.circle, m.drop_disks);
}

MoveOutcome apply_r4_minus(const Complex& d, const R4MinusMove& m) {
  constexpr auto K = MoveKind::R4Minus;
  if (!d.has_edge(m.arc) || d.edge(m.arc).is_circle() || !d.edge(m.arc).arc().end1.is_branch() ||
      !d.edge(m.arc).arc().end2.is_branch()) {
    throw MoveError(K, "'" + m.arc + "' is not an arc between two branch points");
  }
  return remove_whole_curve(K, d, m.arc, m.drop_disks);
}

// Line of triple `t` used by `curve`, requiring exactly one.
std::uint8_t sole_line(MoveKind kind, const Complex& d, const CurveTrace& trace, const std::string& t,
                       const std::string& curve) {
  std::optional<std::uint8_t> found;
  for (std::uint8_t l = 0; l < 3; ++l) {
    if (trace.curve_through(d, t, l) == curve) {
      if (found) throw MoveError(kind, "curve " + curve + " passes " + t + " more than once");
      found = l;
    }
  }
  if (!found) throw MoveError(kind, "curve " + curve + " does not pass " + t);
  return *found;
}

// Triple points visited by a curve, counted per line pass.
std::map<std::string, int> visits(const Complex& d, const DoubleCurve& curve) {
  std::map<std::string, int> v;
  for (const auto& e : curve.edges) {
    const auto& edge = d.edge(e);
    if (edge.is_circle()) continue;
    for (const auto* end : {&edge.arc().end1, &edge.arc().end2}) {
      if (end->is_triple()) ++v[end->owner];
    }
  }
  for (auto& [t, n] : v) n /= 2;  // each pass enters and leaves through two slots
  return v;
}

MoveOutcome apply_r2_minus(const Complex& d, const CurveTrace& trace, const R2MinusMove& m) {
  constexpr auto K = MoveKind::R2Minus;
  if (m.t1 == m.t2) throw MoveError(K, "t1 and t2 must differ");
  for (const auto* t : {&m.t1, &m.t2}) {
    if (!d.triples().contains(*t)) throw MoveError(K, "unknown triple point '" + *t + "'");
  }
  std::array<std::string, 2> cs{resolve_curve(K, trace, m.curves[0]), resolve_curve(K, trace, m.curves[1])};
  if (cs[0] == cs[1]) throw MoveError(K, "the two cancelled curves must be distinct");

  Contraction c;
  c.removed_triples = {m.t1, m.t2};
  std::array<bool, 3> used1{}, used2{};
  for (const auto& cid : cs) {
    const auto& curve = trace.curve(cid);
    if (curve.kind != CurveKind::Closed) throw MoveError(K, "curve " + cid + " is not closed");
    auto v = visits(d, curve);
    if (v.size() != 2 || !v.contains(m.t1) || !v.contains(m.t2) || v.at(m.t1) != 1 || v.at(m.t2) != 1) {
      throw MoveError(K, "curve " + cid + " must pass through exactly " + m.t1 + " and " + m.t2 + ", once each");
    }
    used1[sole_line(K, d, trace, m.t1, cid)] = true;
    used2[sole_line(K, d, trace, m.t2, cid)] = true;
    c.deleted_edges.insert(curve.edges.begin(), curve.edges.end());
  }
  auto free_line = [](const std::array<bool, 3>& used) {
    return static_cast<std::uint8_t>(std::find(used.begin(), used.end(), false) - used.begin());
  };
  std::uint8_t ls1 = free_line(used1), ls2 = free_line(used2);

  // T1 and T2 must be adjacent along the surviving line.
  bool adjacent = false;
  for (Side s : {Side::A, Side::B}) {
    const auto& arc = d.edge(*d.edge_at(Endpoint::triple(m.t1, ls1, s))).arc();
    const Endpoint& far = other_end(arc, Endpoint::triple(m.t1, ls1, s));
    if (far.is_triple() && far.owner == m.t2 && far.line == ls2) adjacent = true;
  }
  if (!adjacent) throw MoveError(K, m.t1 + " and " + m.t2 + " are not joined by an edge of the surviving curve");

  c.join(Endpoint::triple(m.t1, ls1, Side::A), Endpoint::triple(m.t1, ls1, Side::B));
  c.join(Endpoint::triple(m.t2, ls2, Side::A), Endpoint::triple(m.t2, ls2, Side::B));
  auto out = contract(K, d, c, m.drop_disks);

  check_postconditions(K, d, trace, out, -2, -2, 0);
  check_shortening(K, d, trace, out, {trace.curve_through(d, m.t1, ls1)}, c.removed_triples);
  return out;
}

MoveOutcome apply_r3_minus(const Complex& d, const CurveTrace& trace, const R3MinusMove& m) {
  constexpr auto K = MoveKind::R3Minus;
  if (!d.triples().contains(m.center)) throw MoveError(K, "unknown triple point '" + m.center + "'");
  std::set<std::string> six(m.triples.begin(), m.triples.end());
  if (six.size() != 6) throw MoveError(K, "the six cancelled triple points must be distinct");
  if (six.contains(m.center)) throw MoveError(K, "the center cannot be cancelled");
  for (const auto& t : six) {
    if (!d.triples().contains(t)) throw MoveError(K, "unknown triple point '" + t + "'");
  }
  std::set<std::string> cs;
  for (const auto& tok : m.curves) cs.insert(resolve_curve(K, trace, tok));
  if (cs.size() != 3) throw MoveError(K, "the three cancelled curves must be distinct");

  // The neighbours of the center along its lines are exactly the six points.
  std::map<std::string, std::uint8_t> through;
  for (std::uint8_t l = 0; l < 3; ++l) {
    for (Side s : {Side::A, Side::B}) {
      Endpoint slot = Endpoint::triple(m.center, l, s);
      const Endpoint& far = other_end(d.edge(*d.edge_at(slot)).arc(), slot);
      if (!far.is_triple() || !six.contains(far.owner)) {
        throw MoveError(K, "neighbour of " + slot.token() + " is " + far.token() + ", not one of the six points");
      }
      if (!through.emplace(far.owner, far.line).second) {
        throw MoveError(K, far.owner + " is adjacent to the center more than once");
      }
    }
  }

  Contraction c;
  c.removed_triples = six;
  for (const auto& [x, lx] : through) {
    std::set<std::string> seen;
    for (std::uint8_t l = 0; l < 3; ++l) {
      if (l == lx) continue;
      const auto& cid = trace.curve_through(d, x, l);
      if (!cs.contains(cid)) throw MoveError(K, "line " + std::to_string(l) + " at " + x + " is not on a cancelled curve");
      seen.insert(cid);
    }
    if (seen.size() != 2) throw MoveError(K, x + " must meet two different cancelled curves");
    c.join(Endpoint::triple(x, lx, Side::A), Endpoint::triple(x, lx, Side::B));
  }
  for (const auto& cid : cs) {
    const auto& curve = trace.curve(cid);
    if (curve.kind != CurveKind::Closed) throw MoveError(K, "curve " + cid + " is not closed");
    auto v = visits(d, curve);
    bool ok = v.size() == 4 && std::all_of(v.begin(), v.end(), [&](const auto& kv) {
                return six.contains(kv.first) && kv.second == 1;
              });
    if (!ok) throw MoveError(K, "curve " + cid + " must pass four of the six points once each");
    c.deleted_edges.insert(curve.edges.begin(), curve.edges.end());
  }

  auto out = contract(K, d, c, m.drop_disks);
  check_postconditions(K, d, trace, out, -6, -3, 0);
  std::set<std::string> center_curves;
  for (std::uint8_t l = 0; l < 3; ++l) center_curves.insert(trace.curve_through(d, m.center, l));
  check_shortening(K, d, trace, out, center_curves, six);
  return out;
}

MoveOutcome apply_r5_minus(const Complex& d, const CurveTrace& trace, const R5MinusMove& m) {
  constexpr auto K = MoveKind::R5Minus;
  if (!d.triples().contains(m.triple)) throw MoveError(K, "unknown triple point '" + m.triple + "'");
  if (!d.has_edge(m.edge) || d.edge(m.edge).is_circle()) throw MoveError(K, "'" + m.edge + "' is not an arc");
  const Arc& arc = d.edge(m.edge).arc();
  const Endpoint* at_t = nullptr;
  if (arc.end1.is_branch() && arc.end2.is_triple() && arc.end2.owner == m.triple) at_t = &arc.end2;
  if (arc.end2.is_branch() && arc.end1.is_triple() && arc.end1.owner == m.triple) at_t = &arc.end1;
  if (!at_t) throw MoveError(K, "edge " + m.edge + " does not join a branch point to " + m.triple);

  Contraction c;
  c.removed_triples = {m.triple};
  const std::uint8_t lb = at_t->line;
  c.join(Endpoint::triple(m.triple, lb, Side::A), Endpoint::triple(m.triple, lb, Side::B));
  std::array<std::uint8_t, 2> others{};
  for (std::uint8_t l = 0, k = 0; l < 3; ++l) {
    if (l != lb) others[k++] = l;
  }

  if (m.splice == R5Splice::Pass) {
    for (auto l : others) c.join(Endpoint::triple(m.triple, l, Side::A), Endpoint::triple(m.triple, l, Side::B));
  } else {
    std::vector<std::pair<std::string, std::pair<Side, Side>>> loops;
    for (Side s1 : {Side::A, Side::B}) {
      Endpoint x = Endpoint::triple(m.triple, others[0], s1);
      const auto& e = *d.edge_at(x);
      const Endpoint& far = other_end(d.edge(e).arc(), x);
      if (far.is_triple() && far.owner == m.triple && far.line == others[1]) loops.push_back({e, {s1, far.side}});
    }
    if (loops.empty()) throw MoveError(K, "no loop edge joins lines " + std::to_string(others[0]) + " and " +
                                              std::to_string(others[1]) + " at " + m.triple);
    if (loops.size() > 1) throw MoveError(K, "loop splice is ambiguous at " + m.triple);
    const auto& [g, sides] = loops.front();
    c.deleted_edges.insert(g);
    c.join(Endpoint::triple(m.triple, others[0], opposite(sides.first)),
           Endpoint::triple(m.triple, others[1], opposite(sides.second)));
  }

  auto out = contract(K, d, c, m.drop_disks);
  check_postconditions(K, d, trace, out, -1, 0, 0);
  const auto& gs = trace.curve_of(m.edge);
  bool shared = trace.curve_through(d, m.triple, others[0]) == gs || trace.curve_through(d, m.triple, others[1]) == gs;
  if (!shared) check_shortening(K, d, trace, out, {gs}, c.removed_triples);
  return out;
}

MoveOutcome apply_r6(const Complex& d, const CurveTrace& trace, const R6Move& m) {
  constexpr auto K = MoveKind::R6;
  if (!d.disks().contains(m.disk)) throw MoveError(K, "unknown descendent disk '" + m.disk + "'");
  const auto& disk = d.disk(m.disk);
  if (!disk.levels_intact()) throw MoveError(K, "disk " + m.disk + " has both arcs on one level");
  const auto& e1 = d.edge(disk.edge1);
  const auto& e2 = d.edge(disk.edge2);
  if (e1.is_circle() || e2.is_circle()) throw MoveError(K, "disk " + m.disk + " must join two arcs");

  const Endpoint &a1 = e1.arc().end1, &a2 = e1.arc().end2, &b1 = e2.arc().end1, &b2 = e2.arc().end2;
  Arc n1 = disk.pair == Pairing::Cross ? Arc{a1, b2} : Arc{a1, b1};
  Arc n2 = disk.pair == Pairing::Cross ? Arc{a2, b1} : Arc{a2, b2};

  // Dual pairing: the one that rewires (n1, n2) back to {a1,a2}, {b1,b2}.
  auto same_pair = [](const Endpoint& x, const Endpoint& y, const Endpoint& p, const Endpoint& q) {
    return (x == p && y == q) || (x == q && y == p);
  };
  auto restores = [&](Pairing p) {
    Arc r1 = p == Pairing::Cross ? Arc{n1.end1, n2.end2} : Arc{n1.end1, n2.end1};
    Arc r2 = p == Pairing::Cross ? Arc{n1.end2, n2.end1} : Arc{n1.end2, n2.end2};
    return (same_pair(r1.end1, r1.end2, a1, a2) && same_pair(r2.end1, r2.end2, b1, b2)) ||
           (same_pair(r1.end1, r1.end2, b1, b2) && same_pair(r2.end1, r2.end2, a1, a2));
  };
  Pairing dual = restores(Pairing::Cross) ? Pairing::Cross : Pairing::Parallel;

  std::string id1 = d.fresh_id(disk.edge1);
  std::string id2 = d.fresh_id(disk.edge2, {id1});
  std::string disk_id = d.fresh_id(m.disk, {id1, id2});

  MoveOutcome out;
  ComplexParts parts = d.parts();
  parts.edges.erase(disk.edge1);
  parts.edges.erase(disk.edge2);
  parts.edges[id1] = DoubleEdge{id1, n1};
  parts.edges[id2] = DoubleEdge{id2, n2};
  for (const auto& [id, other] : d.disks()) {
    if (id == m.disk) continue;
    if (other.edge1 == disk.edge1 || other.edge1 == disk.edge2 || other.edge2 == disk.edge1 ||
        other.edge2 == disk.edge2) {
      parts.disks.erase(id);
      out.dropped_disks.push_back(id);
    }
  }
  parts.disks.erase(m.disk);
  parts.disks[disk_id] = DescendentDisk{disk_id, id1, id2, dual, disk.level1, disk.level2};

  for (const auto& [id, e] : d.edges()) out.edge_image[id] = id;
  out.edge_image[disk.edge1] = id1;
  out.edge_image[disk.edge2] = id2;
  out.created_edges = {id1, id2};
  out.result = Complex(std::move(parts));

  auto after = trace_curves(out.result);
  long delta = static_cast<long>(after.curves().size()) - static_cast<long>(trace.curves().size());
  if (delta < -1 || delta > 1) {
    throw MoveError(K, "postcondition failed: curve count changed by " + std::to_string(delta));
  }
  return out;
}

}  // namespace

MoveOutcome apply_move_detailed(const Complex& complex, const MoveInstance& m) {
  auto trace = trace_curves(complex);
  return std::visit(
      [&](const auto& mv) -> MoveOutcome {
        using T = std::decay_t<decltype(mv)>;
        if constexpr (std::is_same_v<T, R1PlusMove>) return apply_r1_plus(complex, mv);
        else if constexpr (std::is_same_v<T, R1MinusMove>) return apply_r1_minus(complex, mv);
        else if constexpr (std::is_same_v<T, R2MinusMove>) return apply_r2_minus(complex, trace, mv);
        else if constexpr (std::is_same_v<T, R3MinusMove>) return apply_r3_minus(complex, trace, mv);
        else if constexpr (std::is_same_v<T, R4PlusMove>) return apply_r4_plus(complex, mv);
        else if constexpr (std::is_same_v<T, R4MinusMove>) return apply_r4_minus(complex, mv);
        else if constexpr (std::is_same_v<T, R5MinusMove>) return apply_r5_minus(complex, trace, mv);
        else return apply_r6(complex, trace, mv);
      },
      m);
}

Complex apply_move(const Complex& complex, const MoveInstance& m) { return apply_move_detailed(complex, m).result; }

// ---------------------------------------------------------------------------

ExchangeSet transport(const Complex& complex, const ExchangeSet& gamma, const MoveInstance& m) {
  return transport(complex, gamma, m, apply_move_detailed(complex, m));
}

ExchangeSet transport(const Complex& complex, const ExchangeSet& gamma, const MoveInstance& m,
                      const MoveOutcome& outcome) {
  const MoveKind kind = kind_of(m);
  const auto before = trace_curves(complex);
  const auto after = trace_curves(outcome.result);
  gamma.check_against(before);

  // γ ↦ γ': the curve of D' holding what is left of γ.
  auto image = [&](const std::string& cid) -> std::optional<std::string> {
    for (const auto& e : before.curve(cid).edges) {
      if (const auto& img = outcome.edge_image.at(e)) return after.curve_of(*img);
    }
    return std::nullopt;
  };
  // Curves of Γ outside `touched`, carried to D'.
  auto carry_rest = [&](const std::set<std::string>& touched) {
    ExchangeSet out;
    for (const auto& cid : gamma.curves()) {
      if (touched.contains(cid)) continue;
      if (auto img = image(cid)) out.insert(*img);
    }
    return out;
  };
  auto in = [&](const std::string& cid) { return gamma.contains(cid); };

  switch (kind) {
    case MoveKind::R1Plus:
    case MoveKind::R4Plus: {
      // Γ' = Γ ∪ γ' when the new curve shares a declared disk with some γ_s ⊂ Γ.
      const auto& nd = kind == MoveKind::R1Plus ? std::get<R1PlusMove>(m).disk : std::get<R4PlusMove>(m).disk;
      ExchangeSet out = carry_rest({});
      if (nd && in(before.curve_of(nd->partner_edge))) out.insert(after.curve_of(outcome.created_edges.front()));
      return out;
    }
    case MoveKind::R1Minus:
    case MoveKind::R4Minus: {
      // Γ' = Γ^(w) if γ_w ⊂ Γ, else Γ.
      const auto& e = kind == MoveKind::R1Minus ? std::get<R1MinusMove>(m).circle : std::get<R4MinusMove>(m).arc;
      return carry_rest({before.curve_of(e)});
    }
    case MoveKind::R2Minus:
    case MoveKind::R5Minus: {
      std::string gs;
      std::set<std::string> cancelled;
      if (kind == MoveKind::R2Minus) {
        const auto& mv = std::get<R2MinusMove>(m);
        for (const auto& tok : mv.curves) cancelled.insert(before.curve_of(tok));
        for (std::uint8_t l = 0; l < 3; ++l) {
          const auto& cid = before.curve_through(complex, mv.t1, l);
          if (!cancelled.contains(cid)) gs = cid;
        }
      } else {
        gs = before.curve_of(std::get<R5MinusMove>(m).edge);
      }
      // Γ' = Γ^(s) ∪ γ'_s if γ_s ⊂ Γ, else Γ. Cancelled curves leave with their triple points.
      std::set<std::string> touched = cancelled;
      touched.insert(gs);
      ExchangeSet out = carry_rest(touched);
      if (in(gs)) out.insert(*image(gs));
      return out;
    }
    case MoveKind::R3Minus: {
      const auto& mv = std::get<R3MinusMove>(m);
      const auto& center = complex.triple(mv.center);
      const auto& gs = before.curve_through(complex, mv.center, *center.line_of(LineType::BM));
      const auto& gw = before.curve_through(complex, mv.center, *center.line_of(LineType::MT));
      const auto& gk = before.curve_through(complex, mv.center, *center.line_of(LineType::BT));
      const bool s = in(gs), w = in(gw), k = in(gk);
      std::set<std::string> replaced;
      if (!s && !w && !k) {
      } else if (s && !w && !k) {
        replaced = {gs};
      } else if (!s && w && !k) {
        replaced = {gw};
      } else if (s && !w && k) {
        replaced = {gs, gk};
      } else if (!s && w && k) {
        replaced = {gw, gk};
      } else if (s && w && k) {
        replaced = {gs, gw, gk};
      } else {
        throw MoveError(kind, std::string("membership pattern ") + (k ? "{γ_k}" : "{γ_s, γ_w}") +
                                  " at the center has no Γ' (flip set at " + mv.center + " is not a total order)");
      }
      std::set<std::string> touched{gs, gw, gk};
      for (const auto& tok : mv.curves) touched.insert(before.curve_of(tok));
      ExchangeSet out = carry_rest(touched);
      for (const auto& cid : replaced) out.insert(*image(cid));
      return out;
    }
    case MoveKind::R6: {
      const auto& disk = complex.disk(std::get<R6Move>(m).disk);
      const auto& gs = before.curve_of(disk.edge1);
      const auto& gw = before.curve_of(disk.edge2);
      if (in(gs) != in(gw)) {
        throw MoveError(kind, "disk " + disk.id + " joins a curve inside Γ to one outside it (descendent disk condition fails)");
      }
      if (!in(gs)) return carry_rest({});
      // Γ' = Γ^(s,w) ∪ γ'_s ∪ γ'_w.
      ExchangeSet out = carry_rest({gs, gw});
      out.insert(after.curve_of(*outcome.edge_image.at(disk.edge1)));
      out.insert(after.curve_of(*outcome.edge_image.at(disk.edge2)));
      return out;
    }
  }
  return gamma;
}

MoveInstance relabel_for_crossing_change(const Complex& complex, const ExchangeSet& gamma, const MoveInstance& m) {
  auto trace = trace_curves(complex);
  auto relabel = [&](std::optional<NewDisk>& nd) {
    if (nd && gamma.contains(trace.curve_of(nd->partner_edge))) {
      nd->level_new = swapped(nd->level_new);
      nd->level_partner = swapped(nd->level_partner);
    }
  };
  MoveInstance out = m;
  if (auto* r1 = std::get_if<R1PlusMove>(&out)) relabel(r1->disk);
  if (auto* r4 = std::get_if<R4PlusMove>(&out)) relabel(r4->disk);
  return out;
}

// ---------------------------------------------------------------------------

SequenceResult apply_sequence(const Complex& complex, const ExchangeSet& gamma, std::span<const MoveInstance> seq) {
  SequenceResult res{complex, gamma, {}};
  {
    auto trace = trace_curves(complex);
    gamma.check_against(trace);
    if (auto bad = first_invalid_triple(complex, trace, gamma)) {
      throw SequenceError(0, "Γ is not exchangeable (triple point " + *bad + ")");
    }
    if (!satisfies_dd_condition(complex, trace, gamma)) throw SequenceError(0, "Γ fails the descendent disk condition");
  }
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const std::size_t step = i + 1;
    try {
      auto outcome = apply_move_detailed(res.complex, seq[i]);
      auto next_gamma = transport(res.complex, res.gamma, seq[i], outcome);
      auto trace = trace_curves(outcome.result);
      TrailEntry entry;
      entry.step = step;
      entry.kind = kind_of(seq[i]);
      entry.fingerprint = fingerprint(outcome.result);
      entry.gamma = next_gamma;
      entry.exchangeable = is_exchangeable(outcome.result, trace, next_gamma);
      entry.dd_condition = satisfies_dd_condition(outcome.result, trace, next_gamma);
      entry.triple_points = outcome.result.triples().size();
      if (!entry.exchangeable) throw SequenceError(step, "transported Γ is not exchangeable");
      if (!entry.dd_condition) throw SequenceError(step, "transported Γ fails the descendent disk condition");
      res.complex = std::move(outcome.result);
      res.gamma = std::move(next_gamma);
      res.trail.push_back(std::move(entry));
    } catch (const SequenceError&) {
      throw;
    } catch (const std::exception& ex) {
      throw SequenceError(step, ex.what());
    }
  }
  return res;
}

bool validate_t_descendent(std::span<const std::string> kind_tokens) {
  bool ok = true;
  for (const auto& tok : kind_tokens) {
    switch (classify_kind_token(tok)) {
      case KindTokenStatus::Allowed: break;
      case KindTokenStatus::Forbidden: ok = false; break;
      case KindTokenStatus::Unknown: throw std::invalid_argument("unknown move kind '" + tok + "'");
    }
  }
  return ok;
}

}  // namespace skd
