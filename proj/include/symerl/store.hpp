#pragma once

// Constraint store: a triangular substitution plus suspended non-match
// constraints, tag domains, numeric-tag joins and linear arithmetic.
//
// Stores have value semantics. Copying one is the snapshot operation; every
// search branch owns its copy. Operations return false once the store is
// unsatisfiable and leave it marked so.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "symerl/linarith.hpp"
#include "symerl/term.hpp"

namespace symerl {

// `t` matches `pat` under no instantiation of `locals` (the pattern's own
// variables). With no locals this is Prolog's dif/2.
struct NotMatch {
  Term t;
  Term pat;
  std::vector<VarId> locals;
  std::uint64_t seq = 0;        // insertion order
  std::vector<VarId> watch;     // re-examined when one of these is bound
};

// The tag of an arithmetic result: float if any operand is float, else int.
struct NumJoin {
  Term result;
  std::vector<Term> operands;
};

class Store {
 public:
  explicit Store(LinLimits limits = {}) : limits_(limits) {}

  bool ok() const { return !unsat_; }
  // Set when some result was left unconstrained (nonlinear arithmetic), so a
  // satisfiable store may still describe infeasible executions.
  bool approximate() const { return approximate_; }
  void mark_approximate() { approximate_ = true; }
  // Set when the arithmetic check could not decide (integer search bound or
  // elimination cap hit).
  bool arith_unknown() const { return arith_unknown_; }

  // Follows bindings at the top level only.
  Term deref(const Term& t) const;
  // Applies the substitution everywhere.
  Term resolve(const Term& t) const;

  bool unify(const Term& a, const Term& b);
  bool add_not_match(const Term& t, const Term& pat, const std::vector<VarId>& locals);
  bool add_dif(const Term& a, const Term& b) { return add_not_match(a, b, {}); }
  // Narrows a tag (variable or constant) to the tags in `mask`.
  bool restrict_tag(const Term& tag, std::uint8_t mask);
  bool add_tag_is(const Term& tag, TypeTag t) { return restrict_tag(tag, tag_bit(t)); }
  bool add_tag_not(const Term& tag, TypeTag t) { return restrict_tag(tag, kAllTags & ~tag_bit(t)); }
  bool add_lin(const LinCon& c);
  bool add_num_join(const Term& result, const std::vector<Term>& operands);

  // Registers literal payload variables in `t` with their tags. unify does
  // this for both sides; terms built outside unify (inputs, arithmetic
  // results) must be noted before their payloads are used arithmetically.
  void note(const Term& t);

  // Linear view of a numeric payload: a constant or a single variable.
  std::optional<LinExpr> lin_of(const Term& payload);

  // Tags a tag term may still take.
  std::uint8_t tag_domain(const Term& tag) const;
  // Whether the payload variable is known to hold an integer.
  bool is_int_var(VarId v) const;

  // Runs the arithmetic check now, regardless of the incremental skip rule.
  LinVerdict check_arith();
  // Same, returning a model on Sat.
  LinResult solve_arith();

  // The bindings of non-local variables under which `nm.t` would match
  // `nm.pat`; nullopt when it can never match.
  std::optional<std::vector<std::pair<Term, Term>>> match_bindings(const NotMatch& nm) const;

  const std::vector<NotMatch>& not_matches() const { return not_matches_; }
  const std::vector<NumJoin>& joins() const { return joins_; }
  const std::vector<LinCon>& lin() const { return lin_; }
  const std::map<VarId, std::uint8_t>& domains() const { return domains_; }
  const LinLimits& limits() const { return limits_; }
  // Payload variable -> its literal's tag term.
  const std::map<VarId, std::pair<Term, Term>>& owners() const { return owners_; }
  // Variable terms by id for every variable the arithmetic layer knows.
  const std::map<VarId, Term>& lin_var_terms() const { return lin_terms_; }
  std::size_t binding_count() const { return subst_.size(); }

 private:
  enum class Decision { Discharged, Entailed, Open };

  bool run(const Term& a, const Term& b);
  bool solve_eqs();
  bool bind(const Term& v, const Term& t);
  bool occurs(VarId v, const Term& t) const;
  bool settle();
  bool propagate_owners(bool& changed);
  bool propagate_joins(bool& changed);
  bool wake();
  Decision decide(NotMatch& nm, std::optional<std::pair<Term, Term>>& as_ne) const;
  Store trial_copy(const std::vector<VarId>& locals) const;
  void normalize_lin();
  LinExpr resolve_lin(const LinExpr& e, bool& bad);
  bool lin_check_if_dirty();
  bool fail() {
    unsat_ = true;
    return false;
  }

  LinLimits limits_;
  std::map<VarId, Term> subst_;
  std::map<VarId, std::uint8_t> domains_;
  std::map<VarId, std::pair<Term, Term>> owners_;
  std::vector<NotMatch> not_matches_;
  std::vector<NumJoin> joins_;
  std::vector<LinCon> lin_;
  std::set<VarId> lin_vars_;
  std::map<VarId, Term> lin_terms_;
  std::uint64_t next_seq_ = 0;
  bool unsat_ = false;
  bool approximate_ = false;
  bool arith_unknown_ = false;
  bool lin_dirty_ = false;

  // Per-operation scratch.
  std::vector<std::pair<Term, Term>> work_;
  std::vector<Term> trail_;  // variables bound by the current operation
  std::set<VarId> prefer_;   // bound first in var-var unification
  bool trial_ = false;       // no wake-ups
};

}  // namespace symerl
