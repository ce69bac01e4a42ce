#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "skd/format.hpp"
#include "skd/moves.hpp"

namespace support {

inline std::string fixture_path(const std::string& name) { return std::string(SKD_FIXTURE_DIR) + "/" + name; }

inline skd::SkdDocument load(const std::string& name) {
  return skd::parse_skd(oracle::read_file(fixture_path(name)), name);
}

inline const std::vector<std::string>& all_fixtures() {
  static const std::vector<std::string> names{"trefoil.skd", "r2.skd",      "r3.skd",   "r5_pass.skd",
                                              "r5_loop.skd", "r6.skd",      "small.skd"};
  return names;
}

inline skd::MoveInstance move(const std::string& line) { return skd::parse_skm(line).at(0); }

// Length of the open curve ending at a branch point.
struct Shortening {
  std::string branch;
  std::size_t before;
  std::size_t after;
};

struct TransportCase {
  std::string name;
  std::string fixture;
  std::string move;
  std::string gamma;
  long d_triples = 0;
  std::optional<long> d_closed;  // unset: only |Δcurves| <= 1 is required
  std::optional<long> d_open;
  std::vector<Shortening> shortening;
};

inline const std::vector<TransportCase>& transport_cases() {
  static const std::string r3 = "R3- center=Tc triples=Xs1,Xs2,Xw1,Xw2,Xk1,Xk2 curves=A1,B1,C1 drop=Q1";
  static const std::vector<Shortening> r3_short{{"ps1", 4, 2}, {"pw1", 4, 2}, {"pk1", 4, 2}};
  static const std::vector<TransportCase> cases{
      {"R1+ partner in gamma", "small.skd", "R1+ circle=n1 disk=N partner=l0", "l0", 0, 1, 0, {}},
      {"R1+ partner outside gamma", "small.skd", "R1+ circle=n1 disk=N partner=l0", "l1,l2", 0, 1, 0, {}},
      {"R1- circle in gamma", "small.skd", "R1- circle=o1 drop=Dq", "o1,q", 0, -1, 0, {}},
      {"R1- circle outside gamma", "small.skd", "R1- circle=o1 drop=Dq", "l0", 0, -1, 0, {}},
      {"R4+ partner in gamma", "small.skd", "R4+ arc=n b1=nb1 b2=nb2 disk=N partner=o1", "o1,q", 0, 0, 1, {}},
      {"R4+ partner outside gamma", "small.skd", "R4+ arc=n b1=nb1 b2=nb2 disk=N partner=o1", "", 0, 0, 1, {}},
      {"R4- arc in gamma", "small.skd", "R4- arc=q drop=Dq", "o1,q", 0, 0, -1, {}},
      {"R4- arc outside gamma", "small.skd", "R4- arc=q drop=Dq", "l0", 0, 0, -1, {}},
      {"R2- surviving curve in gamma", "r2.skd", "R2- t1=T1 t2=T2 curves=c1a,c2a", "s1,z1,z2", -2, -2, 0,
       {{"p1", 3, 1}}},
      {"R2- surviving curve outside gamma", "r2.skd", "R2- t1=T1 t2=T2 curves=c1a,c2a", "c1a", -2, -2, 0,
       {{"p1", 3, 1}}},
      {"R3- none", "r3.skd", r3, "", -6, -3, 0, r3_short},
      {"R3- s", "r3.skd", r3, "s1", -6, -3, 0, r3_short},
      {"R3- w", "r3.skd", r3, "w1", -6, -3, 0, r3_short},
      {"R3- s k", "r3.skd", r3, "s1,k1", -6, -3, 0, r3_short},
      {"R3- w k", "r3.skd", r3, "w1,k1", -6, -3, 0, r3_short},
      {"R3- s w k", "r3.skd", r3, "s1,w1,k1,z2,z3", -6, -3, 0, r3_short},
      {"R5- pass, branch curve in gamma", "r5_pass.skd", "R5- triple=T edge=e1 splice=pass drop=D1", "e1", -1, 0, 0,
       {{"p", 2, 1}}},
      {"R5- pass, branch curve outside gamma", "r5_pass.skd", "R5- triple=T edge=e1 splice=pass drop=D1", "g2,z1",
       -1, 0, 0, {{"p", 2, 1}}},
      {"R5- loop, branch curve in gamma", "r5_loop.skd", "R5- triple=T edge=e1 splice=loop", "e1", -1, 0, 0,
       {{"p", 2, 1}}},
      {"R5- loop, branch curve outside gamma", "r5_loop.skd", "R5- triple=T edge=e1 splice=loop", "h1", -1, 0, 0,
       {{"p", 2, 1}}},
      {"R6 open curves in gamma", "r6.skd", "R6 disk=P1", "open", 0, std::nullopt, std::nullopt, {}},
      {"R6 open curves outside gamma", "r6.skd", "R6 disk=P1", "closed", 0, std::nullopt, std::nullopt, {}},
      {"R6 closed curve in gamma", "r6.skd", "R6 disk=P3", "closed", 0, std::nullopt, std::nullopt, {}},
      {"R6 closed curve outside gamma", "r6.skd", "R6 disk=P3", "open", 0, std::nullopt, std::nullopt, {}},
  };
  return cases;
}

// Edge count of the open curve through a branch point.
inline std::size_t open_curve_length(const skd::Complex& c, const std::string& branch) {
  auto trace = skd::trace_curves(c);
  for (const auto& curve : trace.curves()) {
    if (curve.kind != skd::CurveKind::Open) continue;
    for (const auto& e : curve.edges) {
      const auto& arc = c.edge(e).arc();
      if ((arc.end1.is_branch() && arc.end1.owner == branch) || (arc.end2.is_branch() && arc.end2.owner == branch)) {
        return curve.edges.size();
      }
    }
  }
  return 0;
}

}  // namespace support
