#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "skd/explorer.hpp"
#include "skd/schematic.hpp"
#include "support.hpp"

using namespace skd;

namespace {

std::vector<Diagnostic> diagnostics_of(const std::string& text) {
  try {
    parse_skd(text);
  } catch (const ParseError& e) {
    return e.diagnostics();
  }
  return {};
}

bool mentions(const std::vector<Diagnostic>& ds, const std::string& needle) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.message.find(needle) != std::string::npos; });
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("two edges claiming one slot: a diagnostic on each line") {
  auto ds = diagnostics_of(
      "triple T1 lines=bm,bt,mt\n"
      "edge x T:T1.0.a T:T1.0.b\n"
      "edge y T:T1.0.a T:T1.1.a\n"
      "edge z T:T1.1.b T:T1.2.a\n");
  std::vector<Diagnostic> claims;
  for (const auto& d : ds) {
    if (d.message.find("T:T1.0.a") != std::string::npos && d.message.find("also claimed") != std::string::npos) {
      claims.push_back(d);
    }
  }
  REQUIRE(claims.size() == 2);
  CHECK(claims[0].line == 2);
  CHECK(claims[0].column == 8);
  CHECK(claims[1].line == 3);
  CHECK(claims[0].message.find("line 3") != std::string::npos);
  CHECK(claims[1].message.find("line 2") != std::string::npos);
}

TEST_CASE("errors are collected past the first") {
  auto ds = diagnostics_of(
      "triple T1 lines=bm,bm,mt\n"
      "circle a\n"
      "circle a\n"
      "edge e B:nowhere B:also\n"
      "bogus record\n"
      "disk P e1=a e2=missing\n");
  CHECK(mentions(ds, "not a permutation"));
  CHECK(mentions(ds, "duplicate edge id 'a'"));
  CHECK(mentions(ds, "dangling reference"));
  CHECK(mentions(ds, "unknown record kind"));
  CHECK(mentions(ds, "missing edge"));
  CHECK(mentions(ds, "not used by any edge"));
  for (std::size_t i = 1; i < ds.size(); ++i) CHECK(ds[i - 1].line <= ds[i].line);
}

TEST_CASE("diagnostic locations") {
  auto ds = diagnostics_of("circle a\n  edge e T:X.9.a B:p\n");
  REQUIRE_FALSE(ds.empty());
  CHECK(ds[0].line == 2);
  CHECK(ds[0].column == 10);
  CHECK(ds[0].to_string("f.skd").rfind("f.skd:2:10: ", 0) == 0);
}

TEST_CASE("bad fields") {
  CHECK(mentions(diagnostics_of("triple T lines=bm,bt\n"), "three of"));
  CHECK(mentions(diagnostics_of("circle a\ncircle b\ndisk P e1=a e2=b pair=diagonal\n"), "bad disk field"));
  CHECK(mentions(diagnostics_of("circle a\ncircle b\ndisk P e1=a e2=b level1=upper level2=upper\n"), "one upper"));
  CHECK(mentions(diagnostics_of("oracle abc maybe\n"), "trivial or nontrivial"));
  CHECK(mentions(diagnostics_of("branch p\nbranch p\n"), "duplicate branch"));
  CHECK(mentions(diagnostics_of("triple T lines=bm,bt,mt\ntriple T lines=bm,bt,mt\n"), "duplicate triple"));
}

TEST_CASE("comments and blank lines") {
  auto doc = parse_skd("# header\n\ncircle a   # trailing\n");
  CHECK(doc.complex.edges().size() == 1);
}

TEST_CASE("round trip through canonical text") {
  for (const auto& name : support::all_fixtures()) {
    CAPTURE(name);
    auto doc = support::load(name);
    auto text = serialize_canonical(doc.complex);
    auto again = parse_skd(text).complex;
    CHECK(again == doc.complex);
    CHECK(serialize_canonical(again) == text);
    auto with_oracle = parse_skd(serialize_document(doc));
    CHECK(with_oracle.oracle.entries() == doc.oracle.entries());
  }
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto c = generate_random_complex(seed, {seed % 4, 2, 1, 2}).complex;
    CHECK(parse_skd(serialize_canonical(c)).complex == c);
  }
}

TEST_CASE("fingerprint ignores record order") {
  auto text = oracle::read_file(support::fixture_path("trefoil.skd"));
  std::vector<std::string> lines;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) lines.push_back(l);
  auto base = fingerprint(parse_skd(text).complex);
  std::mt19937 rng(9);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string shuffled;
    for (const auto& l : lines) shuffled += l + "\n";
    CHECK(fingerprint(parse_skd(shuffled).complex) == base);
  }
}

TEST_CASE("trefoil fingerprint is stable") {
  auto c = support::load("trefoil.skd").complex;
  CHECK(fingerprint(c) == "ce56e10605a9dcdcf2671bf3dfcb1261c77ec8d6154ac890631aad1dc47990c7");
  CHECK(fingerprint(c).size() == 64);
}

TEST_CASE("oracle sidecar") {
  auto o = parse_oracle("oracle abc trivial\noracle def nontrivial\n");
  CHECK(o.lookup("abc") == Verdict::Trivial);
  CHECK(o.lookup("def") == Verdict::Nontrivial);
  CHECK(o.lookup("xyz") == Verdict::Unknown);
  CHECK_THROWS_AS(parse_oracle("circle a\n"), ParseError);
}

TEST_CASE("move scripts") {
  auto moves = parse_skm(oracle::read_file(support::fixture_path("theorem.skm")));
  REQUIRE(moves.size() == 3);
  CHECK(kind_of(moves[0]) == MoveKind::R1Plus);
  CHECK(std::get<R1PlusMove>(moves[0]).disk->partner_edge == "c1");
  CHECK(std::get<R1MinusMove>(moves[2]).drop_disks == std::vector<std::string>{"P2"});
  for (const auto& m : moves) CHECK(parse_skm(format_move(m)).at(0) == m);

  auto all = parse_skm(
      "R2- t1=a t2=b curves=x,y drop=d\n"
      "R3- center=c triples=1,2,3,4,5,6 curves=x,y,z\n"
      "R4+ arc=q b1=u b2=v\nR4- arc=q\nR5- triple=t edge=e splice=loop\nR6 disk=P\n");
  for (const auto& m : all) CHECK(parse_skm(format_move(m)).at(0) == m);
}

TEST_CASE("move script errors") {
  auto error_of = [](const std::string& text) {
    try {
      parse_skm(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(error_of("R2+ t1=a t2=b\n").find("t-descendent violation: R2+") != std::string::npos);
  CHECK(error_of("R3_PLUS\n").find("t-descendent violation") != std::string::npos);
  CHECK(error_of("R9 x=1\n").find("unknown move kind") != std::string::npos);
  CHECK(error_of("R6 disk=P color=red\n").find("unknown key 'color'") != std::string::npos);
  CHECK(error_of("R6\n").find("missing disk=") != std::string::npos);
  CHECK(error_of("R3- center=c triples=1,2 curves=x,y,z\n").find("exactly 6") != std::string::npos);
  CHECK(error_of("R1+ circle=n partner=x\n").find("requires disk=") != std::string::npos);
  CHECK(error_of("R5- triple=t edge=e splice=twist\n").find("bad value") != std::string::npos);
  CHECK(error_of("R6 disk\n").find("key=value") != std::string::npos);
}

TEST_CASE("schematic") {
  SUBCASE("single circle") {
    auto dot = export_schematic(parse_skd("circle C1\n").complex);
    CHECK(dot.find("\"C:C1\" -- \"C:C1\"") != std::string::npos);
    CHECK(count(dot, " -- ") == 1);
  }
  SUBCASE("node and edge counts match the census") {
    for (const auto& name : support::all_fixtures()) {
      CAPTURE(name);
      auto c = support::load(name).complex;
      auto cen = census(c);
      auto dot = export_schematic(c);
      CHECK(count(dot, " -- ") == cen.arcs + cen.circles);
      CHECK(count(dot, "[shape=") == cen.triple_points + cen.branch_points + cen.circles);
    }
  }
  SUBCASE("trefoil") {
    auto dot = export_schematic(support::load("trefoil.skd").complex);
    for (const char* label : {"[a1]", "[b1]", "[c1]"}) CHECK(dot.find(label) != std::string::npos);
    CHECK(count(dot, "shape=box") == 4);
    for (const char* t : {"T1", "T2", "T3", "T4"}) {
      auto at = dot.find("label=\"" + std::string(t) + "\\n");
      REQUIRE(at != std::string::npos);
      auto line = dot.substr(at, dot.find('\n', at) - at);
      for (const char* ty : {"bm", "bt", "mt"}) CHECK(line.find(ty) != std::string::npos);
    }
    std::set<std::string> colors;
    for (auto pos = dot.find("color=\""); pos != std::string::npos; pos = dot.find("color=\"", pos + 1)) {
      colors.insert(dot.substr(pos + 7, 7));
    }
    CHECK(colors.size() == 3);
  }
}
