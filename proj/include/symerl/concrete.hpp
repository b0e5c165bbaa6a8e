#pragma once

// Ground, single-path evaluator with the same bound accounting as the
// symbolic interpreter. Used to confirm witnesses and as a differential
// oracle.

#include <string>
#include <vector>

#include "symerl/env.hpp"
#include "symerl/translator.hpp"

namespace symerl {

struct ConcreteResult {
  enum class Kind { Value, Error, FuelExhausted };

  Kind kind = Kind::FuelExhausted;
  Term value;          // Value: the result; Error: the ErrorVal
  std::string error;   // Error: its name

  bool is_error() const { return kind == Kind::Error; }
  std::string to_string() const;
};

ConcreteResult concrete_eval(const FunTable& tbl, const Env& env, const Expr& e, int fuel);

// Throws std::invalid_argument on an arity mismatch or non-ground input, and
// FunctionNotFound.
ConcreteResult concrete_run(const FunTable& tbl, const FunName& f, const std::vector<Term>& inputs, int fuel);

}  // namespace symerl
