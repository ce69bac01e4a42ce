#include "skd/format.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>

namespace skd {

std::string Diagnostic::to_string(std::string_view source) const {
  std::ostringstream os;
  if (!source.empty()) os << source << ':';
  if (line > 0) os << line << ':' << column << ": ";
  os << message;
  return os.str();
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& ds, const std::string& source) {
  std::string out;
  for (const auto& d : ds) out += (out.empty() ? "" : "\n") + d.to_string(source);
  return out;
}

struct Token {
  std::string text;
  std::size_t column = 0;
};

std::vector<std::pair<std::size_t, std::vector<Token>>> tokenize_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::vector<Token>>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) toks.push_back({std::string(line.substr(start, i - start)), start + 1});
    }
    if (!toks.empty()) out.emplace_back(line_no, std::move(toks));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::optional<Endpoint> parse_endpoint(const std::string& tok) {
  if (tok.size() > 2 && tok.starts_with("B:")) return Endpoint::branch(tok.substr(2));
  if (!tok.starts_with("T:")) return std::nullopt;
  std::string body = tok.substr(2);
  auto last = body.rfind('.');
  if (last == std::string::npos || last == 0) return std::nullopt;
  auto mid = body.rfind('.', last - 1);
  if (mid == std::string::npos || mid == 0) return std::nullopt;
  std::string id = body.substr(0, mid);
  std::string line = body.substr(mid + 1, last - mid - 1);
  std::string side = body.substr(last + 1);
  if (line.size() != 1 || line[0] < '0' || line[0] > '2') return std::nullopt;
  if (side != "a" && side != "b") return std::nullopt;
  return Endpoint::triple(id, static_cast<std::uint8_t>(line[0] - '0'), side == "a" ? Side::A : Side::B);
}

std::optional<std::pair<std::string, std::string>> split_kv(const std::string& tok) {
  auto eq = tok.find('=');
  if (eq == std::string::npos || eq == 0) return std::nullopt;
  return std::pair{tok.substr(0, eq), tok.substr(eq + 1)};
}

std::optional<Pairing> parse_pairing(const std::string& s) {
  if (s == "cross") return Pairing::Cross;
  if (s == "parallel") return Pairing::Parallel;
  return std::nullopt;
}

std::optional<Level> parse_level(const std::string& s) {
  if (s == "upper") return Level::Upper;
  if (s == "lower") return Level::Lower;
  return std::nullopt;
}

std::optional<Verdict> parse_verdict(const std::string& s) {
  if (s == "trivial") return Verdict::Trivial;
  if (s == "nontrivial") return Verdict::Nontrivial;
  return std::nullopt;
}

}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diagnostics, std::string source)
    : std::runtime_error(join_diagnostics(diagnostics, source)), diagnostics_(std::move(diagnostics)) {}

// ---------------------------------------------------------------------------

SkdParse parse_skd_lenient(std::string_view text) {
  SkdParse out;
  auto diag = [&](std::size_t line, std::size_t col, std::string msg) {
    out.diagnostics.push_back({line, col, std::move(msg)});
  };

  struct EndUse {
    std::size_t line, column;
    std::string edge;
  };
  std::map<Endpoint, std::vector<EndUse>> uses;
  std::map<std::string, std::size_t> record_line;  // "T:id" / "B:id" → line
  std::map<std::string, std::size_t> edge_line, disk_line;
  std::vector<std::pair<std::size_t, std::pair<Token, Endpoint>>> endpoint_refs;

  for (const auto& [line_no, toks] : tokenize_lines(text)) {
    const std::string& kind = toks[0].text;
    auto need = [&](std::size_t n) {
      if (toks.size() < n) {
        diag(line_no, toks.back().column, "'" + kind + "' record needs " + std::to_string(n - 1) + " fields");
        return false;
      }
      return true;
    };

    if (kind == "triple") {
      if (!need(3)) continue;
      const auto& id = toks[1].text;
      if (out.parts.triples.contains(id)) {
        diag(line_no, toks[1].column, "duplicate triple point id '" + id + "' (first on line " +
                                          std::to_string(record_line["T:" + id]) + ")");
        continue;
      }
      auto kv = split_kv(toks[2].text);
      if (!kv || kv->first != "lines") {
        diag(line_no, toks[2].column, "expected lines=<type>,<type>,<type>");
        continue;
      }
      auto parts = split(kv->second, ',');
      TriplePoint tp{id, {}};
      bool ok = parts.size() == 3;
      for (std::size_t i = 0; ok && i < 3; ++i) {
        auto t = parse_line_type(parts[i]);
        if (!t) ok = false;
        else tp.lines[i] = *t;
      }
      if (!ok) {
        diag(line_no, toks[2].column, "lines= needs three of bm, bt, mt");
        continue;
      }
      if (!tp.line_of(LineType::BM) || !tp.line_of(LineType::BT) || !tp.line_of(LineType::MT)) {
        diag(line_no, toks[2].column, "line types at " + id + " are not a permutation of bm, bt, mt");
      }
      if (toks.size() > 3) diag(line_no, toks[3].column, "unexpected field '" + toks[3].text + "'");
      out.parts.triples[id] = tp;
      record_line["T:" + id] = line_no;
    } else if (kind == "branch") {
      if (!need(2)) continue;
      const auto& id = toks[1].text;
      if (!out.parts.branches.insert(id).second) {
        diag(line_no, toks[1].column, "duplicate branch point id '" + id + "' (first on line " +
                                          std::to_string(record_line["B:" + id]) + ")");
        continue;
      }
      record_line["B:" + id] = line_no;
      if (toks.size() > 2) diag(line_no, toks[2].column, "unexpected field '" + toks[2].text + "'");
    } else if (kind == "edge" || kind == "circle") {
      if (!need(kind == "edge" ? 4 : 2)) continue;
      const auto& id = toks[1].text;
      if (out.parts.edges.contains(id)) {
        diag(line_no, toks[1].column,
             "duplicate edge id '" + id + "' (first on line " + std::to_string(edge_line[id]) + ")");
        continue;
      }
      edge_line[id] = line_no;
      if (kind == "circle") {
        out.parts.edges[id] = DoubleEdge{id, Circle{}};
        if (toks.size() > 2) diag(line_no, toks[2].column, "unexpected field '" + toks[2].text + "'");
        continue;
      }
      auto e1 = parse_endpoint(toks[2].text);
      auto e2 = parse_endpoint(toks[3].text);
      if (!e1) diag(line_no, toks[2].column, "bad endpoint '" + toks[2].text + "'");
      if (!e2) diag(line_no, toks[3].column, "bad endpoint '" + toks[3].text + "'");
      if (toks.size() > 4) diag(line_no, toks[4].column, "unexpected field '" + toks[4].text + "'");
      if (!e1 || !e2) continue;
      out.parts.edges[id] = DoubleEdge{id, Arc{*e1, *e2}};
      endpoint_refs.push_back({line_no, {toks[2], *e1}});
      endpoint_refs.push_back({line_no, {toks[3], *e2}});
      uses[*e1].push_back({line_no, toks[2].column, id});
      uses[*e2].push_back({line_no, toks[3].column, id});
    } else if (kind == "disk") {
      if (!need(4)) continue;
      const auto& id = toks[1].text;
      if (out.parts.disks.contains(id)) {
        diag(line_no, toks[1].column,
             "duplicate disk id '" + id + "' (first on line " + std::to_string(disk_line[id]) + ")");
        continue;
      }
      DescendentDisk disk{id, "", "", Pairing::Cross, Level::Upper, Level::Lower};
      bool ok = true;
      for (std::size_t i = 2; i < toks.size(); ++i) {
        auto kv = split_kv(toks[i].text);
        std::optional<Pairing> p;
        std::optional<Level> l;
        if (!kv) {
          diag(line_no, toks[i].column, "expected key=value, got '" + toks[i].text + "'");
          ok = false;
        } else if (kv->first == "e1") {
          disk.edge1 = kv->second;
        } else if (kv->first == "e2") {
          disk.edge2 = kv->second;
        } else if (kv->first == "pair" && (p = parse_pairing(kv->second))) {
          disk.pair = *p;
        } else if (kv->first == "level1" && (l = parse_level(kv->second))) {
          disk.level1 = *l;
        } else if (kv->first == "level2" && (l = parse_level(kv->second))) {
          disk.level2 = *l;
        } else {
          diag(line_no, toks[i].column, "bad disk field '" + toks[i].text + "'");
          ok = false;
        }
      }
      if (disk.edge1.empty() || disk.edge2.empty()) {
        diag(line_no, toks[0].column, "disk " + id + " needs e1= and e2=");
        ok = false;
      }
      if (!ok) continue;
      out.parts.disks[id] = disk;
      disk_line[id] = line_no;
    } else if (kind == "oracle") {
      if (!need(3)) continue;
      auto v = parse_verdict(toks[2].text);
      if (!v) {
        diag(line_no, toks[2].column, "oracle verdict must be trivial or nontrivial");
        continue;
      }
      out.oracle.annotate(toks[1].text, *v);
    } else {
      diag(line_no, toks[0].column, "unknown record kind '" + kind + "'");
    }
  }

  // References and slot use.
  for (const auto& [line_no, ref] : endpoint_refs) {
    const auto& [tok, ep] = ref;
    bool ok = ep.is_branch() ? out.parts.branches.contains(ep.owner) : out.parts.triples.contains(ep.owner);
    if (!ok) {
      diag(line_no, tok.column,
           "dangling reference: no " + std::string(ep.is_branch() ? "branch point" : "triple point") + " '" + ep.owner + "'");
    }
  }
  for (const auto& [ep, list] : uses) {
    if (list.size() < 2) continue;
    for (const auto& u : list) {
      std::string others;
      for (const auto& v : list) {
        if (&v != &u) others += (others.empty() ? "" : ", ") + v.edge + " (line " + std::to_string(v.line) + ")";
      }
      diag(u.line, u.column, "slot " + ep.token() + " of edge " + u.edge + " is also claimed by " + others);
    }
  }
  for (const auto& [id, tp] : out.parts.triples) {
    for (std::uint8_t l = 0; l < 3; ++l) {
      for (Side s : {Side::A, Side::B}) {
        auto ep = Endpoint::triple(id, l, s);
        if (!uses.contains(ep)) diag(record_line["T:" + id], 1, "slot " + ep.token() + " is not used by any edge");
      }
    }
  }
  for (const auto& b : out.parts.branches) {
    if (!uses.contains(Endpoint::branch(b))) diag(record_line["B:" + b], 1, "branch point " + b + " has no edge");
  }
  for (const auto& [id, disk] : out.parts.disks) {
    std::size_t ln = disk_line[id];
    for (const auto* e : {&disk.edge1, &disk.edge2}) {
      if (!out.parts.edges.contains(*e)) diag(ln, 1, "disk " + id + " refers to missing edge '" + *e + "'");
    }
    if (disk.edge1 == disk.edge2) diag(ln, 1, "disk " + id + " must join two different edges");
    if (!disk.levels_intact()) diag(ln, 1, "disk " + id + " needs one upper and one lower arc");
  }
  std::stable_sort(out.diagnostics.begin(), out.diagnostics.end(),
                   [](const auto& a, const auto& b) { return std::tie(a.line, a.column) < std::tie(b.line, b.column); });
  return out;
}

SkdDocument parse_skd(std::string_view text, std::string source) {
  auto raw = parse_skd_lenient(text);
  if (!raw.diagnostics.empty()) throw ParseError(std::move(raw.diagnostics), std::move(source));
  Complex complex(std::move(raw.parts));
  auto report = validate(complex);
  if (!report.ok()) {
    std::vector<Diagnostic> ds;
    for (const auto& v : report.violations) ds.push_back({0, 0, v.message});
    throw ParseError(std::move(ds), std::move(source));
  }
  return SkdDocument{std::move(complex), std::move(raw.oracle)};
}

TrivialityOracle parse_oracle(std::string_view text, std::string source) {
  auto raw = parse_skd_lenient(text);
  if (!raw.parts.triples.empty() || !raw.parts.edges.empty() || !raw.parts.branches.empty() ||
      !raw.parts.disks.empty()) {
    raw.diagnostics.push_back({0, 0, "oracle file may only contain oracle records"});
  }
  if (!raw.diagnostics.empty()) throw ParseError(std::move(raw.diagnostics), std::move(source));
  return raw.oracle;
}

// ---------------------------------------------------------------------------

std::string serialize_canonical(const Complex& complex) {
  std::ostringstream os;
  for (const auto& [id, tp] : complex.triples()) {
    os << "triple " << id << " lines=" << to_string(tp.lines[0]) << ',' << to_string(tp.lines[1]) << ','
       << to_string(tp.lines[2]) << '\n';
  }
  for (const auto& b : complex.branches()) os << "branch " << b << '\n';
  for (const auto& [id, e] : complex.edges()) {
    if (e.is_circle()) os << "circle " << id << '\n';
    else os << "edge " << id << ' ' << e.arc().end1.token() << ' ' << e.arc().end2.token() << '\n';
  }
  for (const auto& [id, d] : complex.disks()) {
    os << "disk " << id << " e1=" << d.edge1 << " e2=" << d.edge2 << " pair=" << to_string(d.pair)
       << " level1=" << to_string(d.level1) << " level2=" << to_string(d.level2) << '\n';
  }
  return os.str();
}

std::string serialize_document(const SkdDocument& doc) {
  std::string out = serialize_canonical(doc.complex);
  for (const auto& [fp, v] : doc.oracle.entries()) {
    if (v != Verdict::Unknown) out += "oracle " + fp + " " + std::string(to_string(v)) + "\n";
  }
  return out;
}

std::string fingerprint(const Complex& complex) {
  const std::string text = serialize_canonical(complex);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
  return os.str();
}

// ---------------------------------------------------------------------------

std::vector<SkmRecord> read_skm_records(std::string_view text, std::string source) {
  std::vector<SkmRecord> out;
  std::vector<Diagnostic> ds;
  for (const auto& [line_no, toks] : tokenize_lines(text)) {
    SkmRecord rec{line_no, toks[0].text, {}};
    for (std::size_t i = 1; i < toks.size(); ++i) {
      auto kv = split_kv(toks[i].text);
      if (!kv) {
        ds.push_back({line_no, toks[i].column, "expected key=value, got '" + toks[i].text + "'"});
        continue;
      }
      rec.params.push_back(*kv);
    }
    out.push_back(std::move(rec));
  }
  if (!ds.empty()) throw ParseError(std::move(ds), std::move(source));
  return out;
}

namespace {

class Locus {
 public:
  Locus(const SkmRecord& rec, std::vector<Diagnostic>& ds) : rec_(rec), ds_(ds) {
    for (const auto& [k, v] : rec.params) {
      if (!values_.emplace(k, v).second) fail("duplicate key '" + k + "'");
    }
  }

  std::string required(const std::string& key) {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end() || it->second.empty()) {
      fail("missing " + key + "=");
      return {};
    }
    return it->second;
  }

  std::optional<std::string> optional(const std::string& key) {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<std::string> list(const std::string& key, std::size_t exact = 0) {
    auto v = exact ? std::optional(required(key)) : optional(key);
    if (!v || v->empty()) return {};
    auto parts = split(*v, ',');
    if (exact && parts.size() != exact) fail(key + "= needs exactly " + std::to_string(exact) + " ids");
    return parts;
  }

  template <class T, class F>
  T choice(const std::string& key, T fallback, F parse) {
    auto v = optional(key);
    if (!v) return fallback;
    auto parsed = parse(*v);
    if (!parsed) {
      fail("bad value for " + key + "=: '" + *v + "'");
      return fallback;
    }
    return *parsed;
  }

  void finish() {
    for (const auto& [k, v] : values_) {
      if (!used_.contains(k)) fail("unknown key '" + k + "' for " + rec_.kind_token);
    }
  }

  void fail(const std::string& msg) { ds_.push_back({rec_.line, 1, msg}); }

 private:
  const SkmRecord& rec_;
  std::vector<Diagnostic>& ds_;
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

std::optional<NewDisk> read_new_disk(Locus& l) {
  auto id = l.optional("disk");
  if (!id) {
    for (const char* k : {"partner", "pair", "level_new", "level_partner"}) {
      if (l.optional(k)) l.fail(std::string(k) + "= requires disk=");
    }
    return std::nullopt;
  }
  NewDisk nd;
  nd.id = *id;
  nd.partner_edge = l.required("partner");
  nd.pair = l.choice("pair", Pairing::Cross, parse_pairing);
  nd.level_new = l.choice("level_new", Level::Upper, parse_level);
  nd.level_partner = l.choice("level_partner", Level::Lower, parse_level);
  return nd;
}

template <std::size_t N>
std::array<std::string, N> to_array(const std::vector<std::string>& v) {
  std::array<std::string, N> out{};
  for (std::size_t i = 0; i < N && i < v.size(); ++i) out[i] = v[i];
  return out;
}

}  // namespace

std::vector<MoveInstance> parse_skm(std::string_view text, std::string source) {
  auto records = read_skm_records(text, source);
  std::vector<Diagnostic> ds;
  std::vector<MoveInstance> out;
  for (const auto& rec : records) {
    MoveKind kind{};
    switch (classify_kind_token(rec.kind_token, &kind)) {
      case KindTokenStatus::Forbidden:
        ds.push_back({rec.line, 1, "t-descendent violation: " + rec.kind_token +
                                       " creates triple points and is excluded from t-descendent sequences"});
        continue;
      case KindTokenStatus::Unknown:
        ds.push_back({rec.line, 1, "unknown move kind '" + rec.kind_token + "'"});
        continue;
      case KindTokenStatus::Allowed: break;
    }
    Locus l(rec, ds);
    auto splice = [](const std::string& s) -> std::optional<R5Splice> {
      if (s == "pass") return R5Splice::Pass;
      if (s == "loop") return R5Splice::Loop;
      return std::nullopt;
    };
    switch (kind) {
      case MoveKind::R1Plus: {
        R1PlusMove mv{l.required("circle"), {}};
        mv.disk = read_new_disk(l);
        out.emplace_back(std::move(mv));
        break;
      }
      case MoveKind::R1Minus: out.emplace_back(R1MinusMove{l.required("circle"), l.list("drop")}); break;
      case MoveKind::R2Minus:
        out.emplace_back(
            R2MinusMove{l.required("t1"), l.required("t2"), to_array<2>(l.list("curves", 2)), l.list("drop")});
        break;
      case MoveKind::R3Minus:
        out.emplace_back(R3MinusMove{l.required("center"), to_array<6>(l.list("triples", 6)),
                                     to_array<3>(l.list("curves", 3)), l.list("drop")});
        break;
      case MoveKind::R4Plus: {
        R4PlusMove mv{l.required("arc"), l.required("b1"), l.required("b2"), {}};
        mv.disk = read_new_disk(l);
        out.emplace_back(std::move(mv));
        break;
      }
      case MoveKind::R4Minus: out.emplace_back(R4MinusMove{l.required("arc"), l.list("drop")}); break;
      case MoveKind::R5Minus:
        out.emplace_back(R5MinusMove{l.required("triple"), l.required("edge"), l.choice("splice", R5Splice::Pass, splice),
                                     l.list("drop")});
        break;
      case MoveKind::R6: out.emplace_back(R6Move{l.required("disk")}); break;
    }
    l.finish();
  }
  if (!ds.empty()) throw ParseError(std::move(ds), std::move(source));
  return out;
}

std::string format_move(const MoveInstance& m) {
  std::ostringstream os;
  os << to_string(kind_of(m));
  auto list = [](const auto& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
    return s;
  };
  auto drop = [&](const std::vector<std::string>& d) {
    if (!d.empty()) os << " drop=" << list(d);
  };
  auto disk = [&](const std::optional<NewDisk>& nd) {
    if (!nd) return;
    os << " disk=" << nd->id << " partner=" << nd->partner_edge << " pair=" << to_string(nd->pair)
       << " level_new=" << to_string(nd->level_new) << " level_partner=" << to_string(nd->level_partner);
  };
  std::visit(
      [&](const auto& mv) {
        using T = std::decay_t<decltype(mv)>;
        if constexpr (std::is_same_v<T, R1PlusMove>) {
          os << " circle=" << mv.circle;
          disk(mv.disk);
        } else if constexpr (std::is_same_v<T, R1MinusMove>) {
          os << " circle=" << mv.circle;
          drop(mv.drop_disks);
        } else if constexpr (std::is_same_v<T, R2MinusMove>) {
          os << " t1=" << mv.t1 << " t2=" << mv.t2 << " curves=" << list(mv.curves);
          drop(mv.drop_disks);
        } else if constexpr (std::is_same_v<T, R3MinusMove>) {
          os << " center=" << mv.center << " triples=" << list(mv.triples) << " curves=" << list(mv.curves);
          drop(mv.drop_disks);
        } else if constexpr (std::is_same_v<T, R4PlusMove>) {
          os << " arc=" << mv.arc << " b1=" << mv.branch1 << " b2=" << mv.branch2;
          disk(mv.disk);
        } else if constexpr (std::is_same_v<T, R4MinusMove>) {
          os << " arc=" << mv.arc;
          drop(mv.drop_disks);
        } else if constexpr (std::is_same_v<T, R5MinusMove>) {
          os << " triple=" << mv.triple << " edge=" << mv.edge
             << " splice=" << (mv.splice == R5Splice::Pass ? "pass" : "loop");
          drop(mv.drop_disks);
        } else {
          os << " disk=" << mv.disk;
        }
      },
      m);
  return os.str();
}

}  // namespace skd
