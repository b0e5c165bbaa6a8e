#pragma once

// Abstract syntax of the first-order sequential Core Erlang subset.

#include <compare>
#include <string>
#include <vector>

#include "symerl/term.hpp"

namespace symerl {

struct FunName {
  std::string name;
  unsigned arity = 0;

  friend bool operator==(const FunName&, const FunName&) = default;
  friend auto operator<=>(const FunName& a, const FunName& b) {
    if (auto c = a.name <=> b.name; c != 0) return c;
    return a.arity <=> b.arity;
  }
  std::string to_string() const { return name + "/" + std::to_string(arity); }
};

struct Pattern {
  enum class Kind { Var, Lit, Cons, Tuple };

  Kind kind = Kind::Var;
  std::string name;             // Var
  Term lit;                     // Lit: a ground literal term
  std::vector<Pattern> elems;   // Cons: {head, tail}; Tuple: elements

  static Pattern var(std::string n) { Pattern p; p.kind = Kind::Var; p.name = std::move(n); return p; }
  static Pattern literal(Term t) { Pattern p; p.kind = Kind::Lit; p.lit = std::move(t); return p; }
  static Pattern cons(Pattern h, Pattern t) {
    Pattern p;
    p.kind = Kind::Cons;
    p.elems.push_back(std::move(h));
    p.elems.push_back(std::move(t));
    return p;
  }
  static Pattern tuple(std::vector<Pattern> es) { Pattern p; p.kind = Kind::Tuple; p.elems = std::move(es); return p; }

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

// Variable names bound by a pattern, in left-to-right order.
void pattern_vars(const Pattern& p, std::vector<std::string>& out);

struct Clause;

struct Expr {
  enum class Kind { Var, Lit, Cons, Tuple, Let, Case, Apply, Call, PrimOp, Try };

  Kind kind = Kind::Lit;
  std::string name;                // Var name; Call function; PrimOp name
  std::string module;              // Call module
  FunName fname;                   // Apply target
  Term lit;                        // Lit
  std::vector<std::string> vars;   // Let: bound vars; Try: {ok var, catch var}
  std::vector<Expr> args;          // Cons {h,t}; Tuple; Let {rhs, body}; Case {scrutinee};
                                   // Apply/Call/PrimOp arguments; Try {e1, e2, e3}
  std::vector<Clause> clauses;     // Case

  static Expr var(std::string n);
  static Expr literal(Term t);
  static Expr cons(Expr h, Expr t);
  static Expr tuple(std::vector<Expr> es);
  static Expr let(std::vector<std::string> vs, Expr rhs, Expr body);
  static Expr case_of(Expr scrutinee, std::vector<Clause> cs);
  static Expr apply(FunName f, std::vector<Expr> as);
  static Expr call(std::string mod, std::string fn, std::vector<Expr> as);
  static Expr primop(std::string n, std::vector<Expr> as);
  static Expr try_of(Expr e1, std::string ok_var, Expr e2, std::string catch_var, Expr e3);

  bool is_value_form() const { return kind == Kind::Var || kind == Kind::Lit; }

  friend bool operator==(const Expr&, const Expr&);
};

struct Clause {
  std::vector<Pattern> pats;
  Expr guard;
  Expr body;

  friend bool operator==(const Clause&, const Clause&) = default;
};

struct FunDef {
  FunName fname;
  std::vector<std::string> params;
  Expr body;

  friend bool operator==(const FunDef&, const FunDef&) = default;
};

struct SourcePos {
  int line = 1;
  int column = 1;
};

struct SourceModule {
  std::string name;
  std::vector<FunName> exports;
  std::vector<FunDef> functions;
  // Definition site of each function, parallel to `functions`. Not part of
  // structural equality.
  std::vector<SourcePos> positions;

  friend bool operator==(const SourceModule& a, const SourceModule& b) {
    return a.name == b.name && a.exports == b.exports && a.functions == b.functions;
  }
};

}  // namespace symerl
