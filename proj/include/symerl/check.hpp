#pragma once

// Final satisfiability gate for answer stores: searches for a ground
// instantiation of the focus terms (the inputs) that satisfies every
// constraint in the store.

#include <vector>

#include "symerl/store.hpp"
#include "symerl/term.hpp"

namespace symerl {

struct SatOptions {
  int witness_depth = 4;          // maximum term depth of invented structure
  std::size_t node_limit = 50000; // search nodes before giving up
};

enum class SatVerdict { Sat, Unsat, Unknown };

struct SatResult {
  SatVerdict verdict = SatVerdict::Unknown;
  std::vector<Term> witness;  // Sat: ground instances of the focus terms
};

SatResult check_sat(const Store& s, const std::vector<Term>& focus, VarPool& pool, const SatOptions& opts = {});

// Default instantiation for whatever is still open in `t`: tags become atom
// (or the first tag their domain allows), atom payloads 'a', numbers 0, other
// holes the atom 'a'.
Term default_ground(const Store& s, const Term& t);

}  // namespace symerl
