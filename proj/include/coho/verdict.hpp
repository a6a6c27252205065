#pragma once

#include <string>

#include "coho/kmatrix.hpp"

namespace coho {

// Outcome of a decision procedure that is either exact or certified only
// through a finite degree window.
enum class VerdictStatus { Yes, No, YesUpToDegree, Undetermined };

std::string to_string(VerdictStatus s);

// Exact answers carry certified_degree = -1; degree-bounded ones carry the
// last degree actually checked. No comes with a concrete witness vector
// (canonical coordinates, tagged by its degree); `note` explains the route.
struct Verdict {
  VerdictStatus status = VerdictStatus::Undetermined;
  int certified_degree = -1;
  int witness_degree = -1;
  KVec witness;
  std::string note;

  bool yes() const {
    return status == VerdictStatus::Yes || status == VerdictStatus::YesUpToDegree;
  }
  bool no() const { return status == VerdictStatus::No; }
};

}  // namespace coho
