#include "skd/oracle.hpp"

namespace skd {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Trivial: return "trivial";
    case Verdict::Nontrivial: return "nontrivial";
    case Verdict::Unknown: break;
  }
  return "unknown";
}

}  // namespace skd
