#pragma once

// Turns a parsed module into the function table the interpreters execute.
// Every case expression gets a trailing catch-all clause that raises
// match_fail, so clause selection is total at run time.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symerl/ast.hpp"
#include "symerl/frontend.hpp"

namespace symerl {

struct FunTable {
  std::string module;
  std::map<FunName, FunDef> functions;
  std::vector<FunName> order;  // definition order

  const FunDef* find(const FunName& f) const {
    auto it = functions.find(f);
    return it == functions.end() ? nullptr : &it->second;
  }
};

struct TranslateResult {
  std::optional<FunTable> table;
  std::vector<Diagnostic> diagnostics;
};

TranslateResult translate_module(const SourceModule& m);

// Appends `<Fresh> when 'true' -> primop 'match_fail'({'case_clause', Fresh})`
// to a case expression. Existing clauses are untouched; not idempotent.
Expr insert_catchall(Expr case_expr, const std::string& fresh_var);
// Same, choosing the next unused '@cN' name in `case_expr`.
Expr insert_catchall(Expr case_expr);

class FunctionNotFound : public std::runtime_error {
 public:
  explicit FunctionNotFound(const FunName& f) : std::runtime_error("function " + f.to_string() + " not found") {}
};

struct FunLookup {
  const std::vector<std::string>& params;
  const Expr& body;
};

// Throws FunctionNotFound.
FunLookup lookup_fun(const FunTable& t, const FunName& f);

// The builtins callable as `call 'erlang':Name(...)`.
bool is_supported_builtin(const std::string& module, const std::string& name, std::size_t arity);

// True when every case expression in the table ends with a catch-all clause
// (bare variable pattern, guard 'true', body primop match_fail).
bool cases_have_catchall(const FunTable& t);
bool is_catchall_clause(const Clause& c);

// One `fundef(...)` line per function in the lit/var/cons fact notation.
std::string dump_facts(const FunTable& t);

}  // namespace symerl
