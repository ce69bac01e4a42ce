#include <doctest.h>

#include "oracles.hpp"
#include "skd/cli.hpp"
#include "support.hpp"

using namespace skd;
using support::move;

namespace {

ExchangeSet gamma_of(const Complex& c, const std::string& text) { return resolve_gamma(c, trace_curves(c), text); }

std::size_t count_kind(const CurveTrace& t, CurveKind k) {
  return static_cast<std::size_t>(
      std::count_if(t.curves().begin(), t.curves().end(), [&](const DoubleCurve& c) { return c.kind == k; }));
}

}  // namespace

TEST_CASE("kind tokens") {
  MoveKind k{};
  CHECK(classify_kind_token("R5-", &k) == KindTokenStatus::Allowed);
  CHECK(k == MoveKind::R5Minus);
  CHECK(classify_kind_token("R1_PLUS", &k) == KindTokenStatus::Allowed);
  CHECK(k == MoveKind::R1Plus);
  for (const char* bad : {"R2+", "R3+", "R5+", "R3_PLUS"}) CHECK(classify_kind_token(bad) == KindTokenStatus::Forbidden);
  CHECK(classify_kind_token("R7") == KindTokenStatus::Unknown);
  for (auto kind : kAllMoveKinds) CHECK(classify_kind_token(to_string(kind)) == KindTokenStatus::Allowed);

  std::vector<std::string> ok{"R1+", "R6", "R3-"}, forbidden{"R1+", "R2+"}, unknown{"R9"};
  CHECK(validate_t_descendent(ok));
  CHECK_FALSE(validate_t_descendent(forbidden));
  CHECK_THROWS_AS(validate_t_descendent(unknown), std::invalid_argument);
}

TEST_CASE("transport suite") {
  for (const auto& tc : support::transport_cases()) {
    CAPTURE(tc.name);
    auto d = support::load(tc.fixture).complex;
    auto m = move(tc.move);
    auto gamma = gamma_of(d, tc.gamma);
    auto tb = trace_curves(d);
    REQUIRE(is_exchangeable(d, tb, gamma));
    REQUIRE(satisfies_dd_condition(d, tb, gamma));

    auto out = apply_move_detailed(d, m);
    REQUIRE(validate(out.result).ok());
    auto ta = trace_curves(out.result);
    auto g2 = transport(d, gamma, m, out);
    CHECK(is_exchangeable(out.result, ta, g2));
    CHECK(satisfies_dd_condition(out.result, ta, g2));

    CHECK(static_cast<long>(out.result.triples().size()) - static_cast<long>(d.triples().size()) == tc.d_triples);
    long d_closed = static_cast<long>(count_kind(ta, CurveKind::Closed)) - static_cast<long>(count_kind(tb, CurveKind::Closed));
    long d_open = static_cast<long>(count_kind(ta, CurveKind::Open)) - static_cast<long>(count_kind(tb, CurveKind::Open));
    if (tc.d_closed) CHECK(d_closed == *tc.d_closed);
    if (tc.d_open) CHECK(d_open == *tc.d_open);
    if (!tc.d_closed) CHECK(std::abs(d_closed + d_open) <= 1);
    for (const auto& s : tc.shortening) {
      CHECK(support::open_curve_length(d, s.branch) == s.before);
      CHECK(support::open_curve_length(out.result, s.branch) == s.after);
    }
    // Partition stays consistent after the rewrite.
    std::set<std::set<std::string>> traced;
    for (const auto& c : ta.curves()) traced.insert({c.edges.begin(), c.edges.end()});
    CHECK(traced == oracle::union_find_partition(out.result));
  }
}

TEST_CASE("commutation square") {
  for (const auto& tc : support::transport_cases()) {
    CAPTURE(tc.name);
    auto d = support::load(tc.fixture).complex;
    auto m = move(tc.move);
    auto gamma = gamma_of(d, tc.gamma);
    auto left = apply_move(crossing_change(d, gamma), relabel_for_crossing_change(d, gamma, m));
    auto right = crossing_change(apply_move(d, m), transport(d, gamma, m));
    CHECK(fingerprint(left) == fingerprint(right));
    CHECK(left == right);
  }
}

TEST_CASE("R3-: the two missing membership patterns") {
  auto d = support::load("r3.skd").complex;
  auto t = trace_curves(d);
  auto m = move(support::transport_cases()[10].move);
  for (const auto* g : {"k1", "s1,w1"}) {
    CAPTURE(g);
    auto gamma = gamma_of(d, g);
    CHECK_THROWS_AS(transport(d, gamma, m), MoveError);
    for (const auto& fs : flip_sets(d, t, gamma)) {
      if (fs.triple == "Tc") CHECK_FALSE(is_valid_flip(fs.types(d.triple("Tc"))));
    }
  }
}

TEST_CASE("R6 rejects a disk splitting Γ") {
  auto d = support::load("r6.skd").complex;
  auto gamma = gamma_of(d, "a1");  // not exchangeable either; the disk check must fire first
  CHECK_THROWS_AS(transport(d, gamma, move("R6 disk=P1")), MoveError);
}

TEST_CASE("R6 replaces the disk by its dual") {
  auto d = support::load("r6.skd").complex;
  auto out = apply_move_detailed(d, move("R6 disk=P1"));
  CHECK_FALSE(out.result.has_edge("a3"));
  CHECK(out.result.has_edge("a3.1"));
  CHECK(out.result.has_edge("b3.1"));
  CHECK(out.result.disks().contains("P1.1"));
  CHECK_FALSE(out.result.disks().contains("P1"));
  // Applying R6 on the dual disk restores the original complex up to ids.
  auto back = apply_move(out.result, move("R6 disk=P1.1"));
  CHECK(census(back) == census(d));
  const auto& a = back.edge("a3.1.1").arc();
  CHECK(((a.end1 == d.edge("a3").arc().end1 && a.end2 == d.edge("a3").arc().end2) ||
         (a.end1 == d.edge("b3").arc().end1 && a.end2 == d.edge("b3").arc().end2)));
}

TEST_CASE("R6 on the closed curve changes the curve count by at most one") {
  auto d = support::load("r6.skd").complex;
  for (auto pair : {"parallel", "cross"}) {
    CAPTURE(pair);
    auto text = serialize_canonical(d);
    auto at = text.find("disk P3");
    auto line_end = text.find('\n', at);
    text.replace(at, line_end - at, std::string("disk P3 e1=c1 e2=c3 pair=") + pair + " level1=upper level2=lower");
    auto dd = parse_skd(text).complex;
    auto out = apply_move(dd, move("R6 disk=P3"));
    auto before = trace_curves(dd).curves().size();
    auto after = trace_curves(out).curves().size();
    CHECK(std::abs(static_cast<long>(after) - static_cast<long>(before)) <= 1);
    CHECK(validate(out).ok());
  }
}

TEST_CASE("locus checks") {
  auto r2 = support::load("r2.skd").complex;
  CHECK_THROWS_AS(apply_move(r2, move("R2- t1=T1 t2=T1 curves=c1a,c2a")), MoveError);
  CHECK_THROWS_AS(apply_move(r2, move("R2- t1=T1 t2=T2 curves=c1a,c1b")), MoveError);
  CHECK_THROWS_AS(apply_move(r2, move("R2- t1=T1 t2=T2 curves=c1a,s1")), MoveError);
  CHECK_THROWS_AS(apply_move(r2, move("R1- circle=z1")), MoveError);  // disk Pz must be dropped
  CHECK_NOTHROW(apply_move(r2, move("R1- circle=z1 drop=Pz")));
  CHECK_THROWS_AS(apply_move(r2, move("R1- circle=s1")), MoveError);
  CHECK_THROWS_AS(apply_move(r2, move("R1+ circle=z1")), MoveError);
  CHECK_THROWS_AS(apply_move(r2, move("R4- arc=s2")), MoveError);

  auto r3 = support::load("r3.skd").complex;
  CHECK_THROWS_AS(apply_move(r3, move("R3- center=Tc triples=Xs1,Xs2,Xw1,Xw2,Xk1,Xk2 curves=A1,B1,C1")), MoveError);
  CHECK_THROWS_AS(apply_move(r3, move("R3- center=Xs1 triples=Tc,Xs2,Xw1,Xw2,Xk1,Xk2 curves=A1,B1,C1 drop=Q1")),
                  MoveError);
  CHECK_THROWS_AS(apply_move(r3, move("R3- center=Tc triples=Xs1,Xs2,Xw1,Xw2,Xk1,Xk2 curves=A1,B1,s1 drop=Q1")),
                  MoveError);

  auto r5 = support::load("r5_pass.skd").complex;
  CHECK_THROWS_AS(apply_move(r5, move("R5- triple=T edge=e1 splice=loop drop=D1")), MoveError);
  CHECK_THROWS_AS(apply_move(r5, move("R5- triple=T edge=g1 drop=D1")), MoveError);
  auto r5l = support::load("r5_loop.skd").complex;
  CHECK_THROWS_AS(apply_move(r5l, move("R5- triple=T edge=g")), MoveError);

  auto small = support::load("small.skd").complex;
  CHECK_THROWS_AS(apply_move(small, move("R1+ circle=n disk=N partner=nope")), MoveError);
  CHECK_THROWS_AS(apply_move(small, move("R1+ circle=n disk=N partner=l0 level_new=upper level_partner=upper")),
                  MoveError);
  CHECK_THROWS_AS(apply_move(small, move("R4+ arc=n b1=x b2=x")), MoveError);
  CHECK_THROWS_AS(apply_move(small, move("R1- circle=o1 drop=Dq,Dq2")), StructuralError);
}

TEST_CASE("a failed move leaves its input untouched") {
  auto d = support::load("r2.skd").complex;
  auto copy = d;
  CHECK_THROWS(apply_move(d, move("R1- circle=z1")));
  CHECK(d == copy);
}

TEST_CASE("edge images") {
  auto d = support::load("r2.skd").complex;
  auto out = apply_move_detailed(d, move("R2- t1=T1 t2=T2 curves=c1a,c2a"));
  CHECK(out.edge_image.at("c1a") == std::nullopt);
  CHECK(out.edge_image.at("s1") == std::optional<std::string>("s1.1"));
  CHECK(out.edge_image.at("s3") == std::optional<std::string>("s1.1"));
  CHECK(out.edge_image.at("z1") == std::optional<std::string>("z1"));
  CHECK(out.created_edges == std::vector<std::string>{"s1.1"});
}

TEST_CASE("sequence on the trefoil keeps Γ exchangeable and dd-satisfying") {
  auto d = support::load("trefoil.skd").complex;
  auto script = parse_skm(oracle::read_file(support::fixture_path("theorem.skm")));
  auto res = apply_sequence(d, {"c1"}, script);
  REQUIRE(res.trail.size() == 3);
  for (const auto& e : res.trail) {
    CHECK(e.exchangeable);
    CHECK(e.dd_condition);
    CHECK(e.triple_points == 4);
  }
  CHECK(res.trail[0].gamma == ExchangeSet{"c1", "n1"});
  CHECK(res.gamma == ExchangeSet{"c1"});
}

TEST_CASE("sequence errors name the step") {
  auto d = support::load("trefoil.skd").complex;
  std::vector<MoveInstance> script{move("R1+ circle=n1"), move("R1- circle=zz")};
  try {
    apply_sequence(d, {}, script);
    FAIL("expected SequenceError");
  } catch (const SequenceError& e) {
    CHECK(e.step() == 2);
  }
  std::vector<MoveInstance> none;
  CHECK_THROWS_AS(apply_sequence(d, {"a1"}, none), SequenceError);
}
