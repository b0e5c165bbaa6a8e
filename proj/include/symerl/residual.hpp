#pragma once

// Rendering of answer constraints in the lit/cons/dif notation:
//
//   In=[cons(lit(Type,_V),lit(list,nil))], dif(Type,int), dif(Type,float)
//
// Variables are named from their hints; a variable occurring once in the
// whole answer gets a leading underscore.

#include <string>
#include <string_view>
#include <vector>

#include "symerl/store.hpp"

namespace symerl {

struct ResidualItem {
  std::string name;         // e.g. "In"
  std::vector<Term> terms;
  bool as_list = true;      // render as [t1,...]; otherwise the single term
};

struct Residual {
  std::vector<std::string> bindings;     // "In=[...]"
  std::vector<std::vector<std::string>> items;  // each item's terms, rendered
  std::vector<std::string> constraints;  // "dif(Type,int)", "N > 0", ...

  // Bindings, then `extra` (e.g. "Err=badarith"), then constraints.
  std::string text(const std::vector<std::string>& extra = {}) const;
};

Residual residual(const Store& s, const std::vector<ResidualItem>& items);

// A term in the answer notation; variables print as `_G<id>`.
std::string render_term(const Term& t);

// Linear constraint with variables named by `name_of`.
std::string render_lin(const LinCon& c, const std::vector<std::pair<VarId, std::string>>& names);

// Answer text with whitespace removed and variables renamed V1, V2, ... by
// first occurrence. Two answers are the same up to renaming iff their
// canonical forms are equal.
std::string canonical_answer(std::string_view text);

}  // namespace symerl
