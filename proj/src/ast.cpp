#include "symerl/ast.hpp"

namespace symerl {

void pattern_vars(const Pattern& p, std::vector<std::string>& out) {
  if (p.kind == Pattern::Kind::Var) {
    out.push_back(p.name);
    return;
  }
  for (const Pattern& e : p.elems) pattern_vars(e, out);
}

Expr Expr::var(std::string n) {
  Expr e;
  e.kind = Kind::Var;
  e.name = std::move(n);
  return e;
}

Expr Expr::literal(Term t) {
  Expr e;
  e.kind = Kind::Lit;
  e.lit = std::move(t);
  return e;
}

Expr Expr::cons(Expr h, Expr t) {
  Expr e;
  e.kind = Kind::Cons;
  e.args.push_back(std::move(h));
  e.args.push_back(std::move(t));
  return e;
}

Expr Expr::tuple(std::vector<Expr> es) {
  Expr e;
  e.kind = Kind::Tuple;
  e.args = std::move(es);
  return e;
}

Expr Expr::let(std::vector<std::string> vs, Expr rhs, Expr body) {
  Expr e;
  e.kind = Kind::Let;
  e.vars = std::move(vs);
  e.args.push_back(std::move(rhs));
  e.args.push_back(std::move(body));
  return e;
}

Expr Expr::case_of(Expr scrutinee, std::vector<Clause> cs) {
  Expr e;
  e.kind = Kind::Case;
  e.args.push_back(std::move(scrutinee));
  e.clauses = std::move(cs);
  return e;
}

Expr Expr::apply(FunName f, std::vector<Expr> as) {
  Expr e;
  e.kind = Kind::Apply;
  e.fname = std::move(f);
  e.args = std::move(as);
  return e;
}

Expr Expr::call(std::string mod, std::string fn, std::vector<Expr> as) {
  Expr e;
  e.kind = Kind::Call;
  e.module = std::move(mod);
  e.name = std::move(fn);
  e.args = std::move(as);
  return e;
}

Expr Expr::primop(std::string n, std::vector<Expr> as) {
  Expr e;
  e.kind = Kind::PrimOp;
  e.name = std::move(n);
  e.args = std::move(as);
  return e;
}

Expr Expr::try_of(Expr e1, std::string ok_var, Expr e2, std::string catch_var, Expr e3) {
  Expr e;
  e.kind = Kind::Try;
  e.vars = {std::move(ok_var), std::move(catch_var)};
  e.args.push_back(std::move(e1));
  e.args.push_back(std::move(e2));
  e.args.push_back(std::move(e3));
  return e;
}

bool operator==(const Expr& a, const Expr& b) {
  return a.kind == b.kind && a.name == b.name && a.module == b.module && a.fname == b.fname &&
         a.lit == b.lit && a.vars == b.vars && a.args == b.args && a.clauses == b.clauses;
}

}  // namespace symerl
