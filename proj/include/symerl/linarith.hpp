#pragma once

// Linear arithmetic over exact rationals: satisfiability by Gaussian
// elimination of equalities followed by Fourier-Motzkin elimination, lazy
// case splits on disequalities, and bounded branch-and-bound for integer
// variables.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "symerl/term.hpp"

namespace symerl {

struct LinExpr {
  std::map<VarId, Rational> coeffs;  // no zero entries
  Rational constant;

  static LinExpr var(VarId v, Rational c = 1);
  static LinExpr constant_of(Rational c);

  bool is_constant() const { return coeffs.empty(); }
  Rational coeff(VarId v) const;

  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(const Rational& k);
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, const Rational& k) { return a *= k; }
  friend bool operator==(const LinExpr&, const LinExpr&) = default;

  // Replaces v by `by` (v must not occur in `by`).
  void substitute(VarId v, const LinExpr& by);
  Rational eval(const std::map<VarId, Rational>& model) const;  // missing vars read as 0
};

enum class LinRel { Eq, Ne, Lt, Le };

// `expr rel 0`.
struct LinCon {
  LinExpr expr;
  LinRel rel = LinRel::Eq;

  static LinCon make(LinExpr lhs, LinRel rel, LinExpr rhs) { return {std::move(lhs) - rhs, rel}; }
  bool holds(const std::map<VarId, Rational>& model) const;
  friend bool operator==(const LinCon&, const LinCon&) = default;
};

enum class LinVerdict { Sat, Unsat, Unknown };

struct LinLimits {
  int int_enum_bound = 64;            // branch-and-bound depth
  std::size_t max_constraints = 4000; // Fourier-Motzkin blow-up cap
};

struct LinResult {
  LinVerdict verdict = LinVerdict::Unknown;
  std::map<VarId, Rational> model;  // Sat only; covers every variable mentioned
};

LinResult lin_solve(const std::vector<LinCon>& cs, const std::set<VarId>& int_vars, const LinLimits& limits = {});

// Constraints over `keep` implied by `cs` over the rationals. Disequalities
// that still mention eliminated variables are dropped.
std::vector<LinCon> lin_project(const std::vector<LinCon>& cs, const std::set<VarId>& keep,
                                const LinLimits& limits = {});

// Truth value of a constraint without variables.
bool lin_constant_ok(const LinCon& c);

bool is_integral(const Rational& r);
Integer floor_of(const Rational& r);
Integer ceil_of(const Rational& r);

}  // namespace symerl
