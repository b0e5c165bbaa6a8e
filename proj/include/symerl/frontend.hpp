#pragma once

// Concrete syntax for the Core Erlang subset.
//
//   module 'sum_list' ['sum'/1] =
//     'sum'/1 = fun (L) ->
//       case L of
//         <[]> when 'true' -> 0;
//         <[H|T]> when 'true' ->
//           let <S> = apply 'sum'/1 (T) in call 'erlang':'+' (H, S)
//       end
//     end
//
// Atoms are quoted ('a') or bare lowercase identifiers; variables start with
// an uppercase letter, '_' or '@'. `%` starts a line comment. Clause
// separators `;`, the `<...>` wrappers around patterns and let variables, the
// `when` guard and the export list are all optional.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symerl/ast.hpp"

namespace symerl {

struct Diagnostic {
  enum class Severity { Error, Warning };

  Severity severity = Severity::Error;
  int line = 1;
  int column = 1;
  std::string message;

  std::string to_string() const;
};

bool has_errors(const std::vector<Diagnostic>& diags);

struct ParseResult {
  std::optional<SourceModule> module;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return module.has_value(); }
};

// Parses a whole module and checks variable scoping, duplicate definitions
// and exports. Never throws on malformed input.
ParseResult parse_module(std::string_view text);

// Comma-separated patterns, e.g. "[X|_], {'a', 3}". Used for user-provided
// input skeletons, where variables denote symbolic holes.
struct PatternListResult {
  std::optional<std::vector<Pattern>> patterns;
  std::vector<Diagnostic> diagnostics;
};
PatternListResult parse_patterns(std::string_view text);

std::string pretty_print(const SourceModule& m);
std::string pretty_expr(const Expr& e);
std::string pretty_pattern(const Pattern& p);
std::string pretty_literal(const Term& t);  // ground literal terms only

}  // namespace symerl
