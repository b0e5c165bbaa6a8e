#pragma once

// Bounded symbolic evaluation. Each expression form that reduces (let, case,
// apply, call, primop, try) needs a positive bound and evaluates its parts
// with the bound decremented by one; variables, literals and constructors
// cost nothing. A reduction attempted at bound 0 cuts its branch.
//
// Evaluation is a depth-first enumeration of branches. Every branch carries
// its own store; branches are produced in clause order, and within a builtin
// the non-error outcomes come before the error ones.

#include <cstddef>
#include <functional>
#include <vector>

#include "symerl/check.hpp"
#include "symerl/env.hpp"
#include "symerl/store.hpp"
#include "symerl/translator.hpp"

namespace symerl {

struct Branch {
  Store store;
  Env env;
  Term result;  // the ErrorVal when env.error_flag()
  int steps_left = 0;

  bool is_error() const { return env.error_flag(); }
};

struct Outcome {
  std::vector<Branch> branches;
  bool bound_exhausted = false;
};

class Interpreter {
 public:
  // Receives each final branch; returning false stops the enumeration.
  using Sink = std::function<bool(Branch&&)>;

  Interpreter(const FunTable& tbl, VarPool& pool) : tbl_(tbl), pool_(pool) {}

  void eval(int bound, const Env& env, const Expr& e, const Store& store, const Sink& sink);

  bool bound_exhausted() const { return exhausted_; }
  bool stopped() const { return stop_; }
  std::size_t cuts() const { return cuts_; }

 private:
  using K = std::function<void(Branch)>;

  struct Num {
    Term tag;
    Term payload;
  };
  using NumK = std::function<void(Store, Num)>;
  using StoreK = std::function<void(Store)>;
  using ListK = std::function<void(Store, bool error, std::vector<Term>, int)>;

  void ev(int bound, const Env& env, const Expr& e, Store st, const K& k);
  void ev_list(int bound, const Env& env, const std::vector<Expr>& es, std::size_t i, std::vector<Term> acc,
               int steps, Store st, const ListK& k);
  void ev_clauses(int bound, const Env& env, const Term& v, const std::vector<Clause>& cs, std::size_t i, Store st,
                  int steps, const K& k);
  void builtin(const std::string& name, const std::vector<Term>& args, Store st, const Env& env, int steps,
               const K& k);

  Term pattern_term(const Pattern& p, std::vector<std::pair<std::string, Term>>& vars, std::vector<VarId>& locals);

  void numeric(Store st, const Term& x, std::uint8_t want, const NumK& ok, const StoreK& bad);
  void boolean(Store st, const Term& x, const std::function<void(Store, bool)>& ok, const StoreK& bad);
  void tag_test(Store st, const Term& x, std::uint8_t mask, const StoreK& yes, const StoreK& no);
  void exact_eq(Store st, const Term& a, const Term& b, const StoreK& yes, const StoreK& no);
  void arith(const std::string& op, Store st, const Num& a, const Num& b, const Env& env, int steps, const K& k);
  void divrem(const std::string& op, Store st, const Num& a, const Num& b, const Env& env, int steps, const K& k);

  Term numeric_result(Store& st, const Term& tag_a, const Term& tag_b);

  const FunTable& tbl_;
  VarPool& pool_;
  bool exhausted_ = false;
  bool stop_ = false;
  std::size_t cuts_ = 0;
};

// Evaluates `cfg` and collects every final branch.
Outcome eval(int bound, const Config& cfg, const Store& store, const FunTable& tbl, VarPool& pool);

struct RunAnswer {
  Branch branch;
  SatResult sat;
};

struct RunOptions {
  SatOptions sat;
  // Called for each satisfiable or undecided error branch; returning false
  // stops the search.
  std::function<bool(RunAnswer&&)> on_error;
};

struct RunOutcome {
  std::vector<RunAnswer> errors;  // only filled when no on_error callback is given
  bool bound_exhausted = false;
  bool stopped = false;
  std::size_t value_branches = 0;
};

// Binds the formals of `f` to `inputs` and evaluates `apply f(formals)`.
// Error branches whose store is unsatisfiable are dropped. Throws
// std::invalid_argument on an arity mismatch and FunctionNotFound.
RunOutcome run(const FunTable& tbl, const FunName& f, int bound, const std::vector<Term>& inputs,
               const Store& store, VarPool& pool, const RunOptions& opts = {});

}  // namespace symerl
