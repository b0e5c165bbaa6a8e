#pragma once

// Test oracles that share no code with the engine beyond the term type:
// a bounded ground universe, a direct constraint evaluator and generators
// for random stores and modules.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "symerl/ast.hpp"
#include "symerl/linarith.hpp"
#include "symerl/store.hpp"
#include "symerl/translator.hpp"

namespace symtest {

using symerl::Term;
using symerl::VarId;

std::string fixture_path(const std::string& name);
std::string read_file(const std::string& path);
symerl::FunTable load_fixture(const std::string& name);
symerl::FunTable load_source(const std::string& text);

// Every fixture module with the functions it exports.
struct FixtureFun {
  std::string file;
  symerl::FunName fun;
};
std::vector<FixtureFun> fixture_functions();

// Literals of the bounded universe: atoms a and b, integers -3..3, [] and,
// when `floats` is set, the float 0.5.
std::vector<Term> universe_leaves(bool floats = false);
// All ground terms of depth <= d built from those leaves with list cells
// and tuples of arity 0..2.
std::vector<Term> universe(int depth, bool floats = false);

// Ground assignment: value vars to terms, tag vars to tag constants,
// payload vars to payload constants.
using Assignment = std::map<VarId, Term>;

Term substitute(const Term& t, const Assignment& a);

// One-way matching of a (possibly non-ground) pattern against a ground term;
// only variables in `locals` may be bound, all others must already be
// substituted away.
bool ground_match(const Term& pat, const Term& t, Assignment& locals);

struct Constraint {
  enum class Kind { Eq, NotMatch, Tag, Lin };

  Kind kind = Kind::Eq;
  Term a, b;                    // Eq: a = b; NotMatch: a vs pattern b
  std::vector<VarId> locals;    // NotMatch
  std::uint8_t mask = 0;        // Tag: a is a tag term
  symerl::LinCon lin;           // Lin over payload variables

  std::string to_string() const;
};

// Evaluates the constraint under a ground assignment covering its outer
// variables.
bool holds(const Constraint& c, const Assignment& a);

// Feeds the constraints to a fresh store; false as soon as one is refused.
bool apply(symerl::Store& s, const std::vector<Constraint>& cs);

// A random problem over up to two value holes X, Y and two literal holes
// lit(T1,P1), lit(T2,P2).
struct RandomProblem {
  std::vector<Term> value_vars;              // X, Y (those in use)
  std::vector<std::pair<Term, Term>> lits;   // (tag var, payload var)
  std::vector<Constraint> constraints;

  std::vector<Term> focus() const;
};

RandomProblem random_problem(std::mt19937& rng, symerl::VarPool& pool);

// Notes the problem's holes (as the interpreter notes its inputs), then
// applies its constraints.
bool apply(symerl::Store& s, const RandomProblem& p);

// Exhaustive search over the bounded universe. Value holes range over
// terms of depth <= value_depth, literal holes over the universe leaves.
// Returns a satisfying assignment if any; `extra`, when given, must hold too.
std::optional<Assignment> brute_force(const RandomProblem& p, int value_depth, bool floats,
                                      const std::function<bool(const Assignment&)>& extra = {});

// A random well-scoped module in the supported subset.
symerl::SourceModule random_module(std::mt19937& rng, int index);

}  // namespace symtest
