#include "symerl/concrete.hpp"

#include <map>
#include <stdexcept>

#include "symerl/residual.hpp"

namespace symerl {

namespace {

using R = ConcreteResult;

R value(Term t) { return R{R::Kind::Value, std::move(t), {}}; }
R raise(const std::string& name) { return R{R::Kind::Error, Term::error(name), name}; }
R exhausted() { return R{}; }

bool has_tag(const Term& t, TypeTag tag) {
  return t.kind() == TermKind::Lit && t.kid(0).tag_value() == tag;
}
bool is_number(const Term& t) { return has_tag(t, TypeTag::Int) || has_tag(t, TypeTag::Float); }
Rational num(const Term& t) {
  const Term& p = t.kid(1);
  return p.kind() == TermKind::IntConst ? Rational(p.int_value()) : p.float_value();
}
Term number(bool is_float, const Rational& r) {
  return is_float ? Term::floating(r) : Term::integer(boost::multiprecision::numerator(r));
}
bool is_bool(const Term& t) { return is_atom(t, "true") || is_atom(t, "false"); }

bool match(const Pattern& p, const Term& v, std::vector<std::pair<std::string, Term>>& out) {
  switch (p.kind) {
    case Pattern::Kind::Var:
      if (p.name != "_") out.emplace_back(p.name, v);
      return true;
    case Pattern::Kind::Lit: return p.lit == v;
    case Pattern::Kind::Cons:
      return v.kind() == TermKind::Cons && match(p.elems[0], v.kid(0), out) && match(p.elems[1], v.kid(1), out);
    case Pattern::Kind::Tuple:
      if (v.kind() != TermKind::Tuple || v.arity() != p.elems.size()) return false;
      for (std::size_t i = 0; i < p.elems.size(); ++i)
        if (!match(p.elems[i], v.kid(i), out)) return false;
      return true;
  }
  return false;
}

R apply_builtin(const std::string& name, const std::vector<Term>& a) {
  const std::size_t n = a.size();
  if (n == 2 && (name == "+" || name == "-" || name == "*")) {
    if (!is_number(a[0]) || !is_number(a[1])) return raise("badarith");
    bool f = has_tag(a[0], TypeTag::Float) || has_tag(a[1], TypeTag::Float);
    Rational x = num(a[0]), y = num(a[1]);
    Rational r = name == "+" ? Rational(x + y) : name == "-" ? Rational(x - y) : Rational(x * y);
    return value(number(f, r));
  }
  if (n == 2 && (name == "div" || name == "rem")) {
    if (!has_tag(a[0], TypeTag::Int) || !has_tag(a[1], TypeTag::Int)) return raise("badarith");
    const Integer& x = a[0].kid(1).int_value();
    const Integer& y = a[1].kid(1).int_value();
    if (y == 0) return raise("badarith");
    return value(Term::integer(name == "div" ? Integer(x / y) : Integer(x % y)));
  }
  if (n == 1 && (name == "-" || name == "+")) {
    if (!is_number(a[0])) return raise("badarith");
    if (name == "+") return value(a[0]);
    return value(number(has_tag(a[0], TypeTag::Float), -num(a[0])));
  }
  if (n == 2 && (name == "<" || name == "=<" || name == ">" || name == ">=")) {
    if (!is_number(a[0]) || !is_number(a[1])) return raise("badarith");
    Rational x = num(a[0]), y = num(a[1]);
    bool r = name == "<" ? x < y : name == "=<" ? x <= y : name == ">" ? x > y : x >= y;
    return value(Term::boolean(r));
  }
  if (n == 2 && (name == "==" || name == "/=")) {
    bool same = (is_number(a[0]) && is_number(a[1])) ? num(a[0]) == num(a[1]) : a[0] == a[1];
    return value(Term::boolean(same == (name == "==")));
  }
  if (n == 2 && (name == "=:=" || name == "=/=")) return value(Term::boolean((a[0] == a[1]) == (name == "=:=")));
  if (n == 2 && (name == "and" || name == "or")) {
    if (!is_bool(a[0]) || !is_bool(a[1])) return raise("badarg");
    bool x = is_true(a[0]), y = is_true(a[1]);
    return value(Term::boolean(name == "and" ? (x && y) : (x || y)));
  }
  if (n == 1 && name == "not") {
    if (!is_bool(a[0])) return raise("badarg");
    return value(Term::boolean(!is_true(a[0])));
  }
  if (n == 1) {
    const Term& x = a[0];
    if (name == "is_integer") return value(Term::boolean(has_tag(x, TypeTag::Int)));
    if (name == "is_float") return value(Term::boolean(has_tag(x, TypeTag::Float)));
    if (name == "is_atom") return value(Term::boolean(has_tag(x, TypeTag::Atom)));
    if (name == "is_number") return value(Term::boolean(is_number(x)));
    if (name == "is_list") return value(Term::boolean(has_tag(x, TypeTag::List) || x.kind() == TermKind::Cons));
    if (name == "is_tuple") return value(Term::boolean(x.kind() == TermKind::Tuple));
  }
  throw InternalError("unsupported builtin erlang:" + name + "/" + std::to_string(n));
}

class Eval {
 public:
  explicit Eval(const FunTable& tbl) : tbl_(tbl) {}

  R eval(int fuel, const Env& env, const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Var: return value(env.at(e.name));
      case Expr::Kind::Lit: return value(e.lit);
      case Expr::Kind::Cons:
      case Expr::Kind::Tuple: {
        std::vector<Term> vs;
        if (auto r = list(fuel, env, e.args, vs)) return *r;
        return value(e.kind == Expr::Kind::Cons ? Term::cons(vs[0], vs[1]) : Term::tuple(std::move(vs)));
      }
      default: break;
    }
    if (fuel <= 0) return exhausted();
    const int f1 = fuel - 1;
    switch (e.kind) {
      case Expr::Kind::Let: {
        R r = eval(f1, env, e.args[0]);
        if (r.kind != R::Kind::Value) return r;
        return eval(f1, env.bind(e.vars[0], r.value), e.args[1]);
      }
      case Expr::Kind::Case: {
        R r = eval(f1, env, e.args[0]);
        if (r.kind != R::Kind::Value) return r;
        for (const Clause& c : e.clauses) {
          std::vector<std::pair<std::string, Term>> bs;
          if (!match(c.pats[0], r.value, bs)) continue;
          Env ce = env;
          for (auto& [n, t] : bs) ce = ce.bind(n, t);
          R g = eval(f1, ce, c.guard);
          if (g.kind == R::Kind::FuelExhausted) return g;
          if (g.kind == R::Kind::Error || !is_true(g.value)) continue;
          return eval(f1, ce, c.body);
        }
        throw InternalError("no case clause matched (missing catch-all)");
      }
      case Expr::Kind::Apply: {
        std::vector<Term> vs;
        if (auto r = list(f1, env, e.args, vs)) return *r;
        FunLookup fl = lookup_fun(tbl_, e.fname);
        Env callee;
        for (std::size_t i = 0; i < vs.size(); ++i) callee = callee.bind(fl.params[i], vs[i]);
        return eval(f1, callee, fl.body);
      }
      case Expr::Kind::Call: {
        std::vector<Term> vs;
        if (auto r = list(f1, env, e.args, vs)) return *r;
        return apply_builtin(e.name, vs);
      }
      case Expr::Kind::PrimOp: {
        std::vector<Term> vs;
        if (auto r = list(f1, env, e.args, vs)) return *r;
        return raise(e.name);
      }
      case Expr::Kind::Try: {
        R r = eval(f1, env, e.args[0]);
        if (r.kind == R::Kind::FuelExhausted) return r;
        if (r.kind == R::Kind::Value) return eval(f1, env.bind(e.vars[0], r.value), e.args[1]);
        return eval(f1, env.bind(e.vars[1], r.value), e.args[2]);
      }
      default: return exhausted();
    }
  }

 private:
  // Left to right; returns the first non-value result, if any.
  std::optional<R> list(int fuel, const Env& env, const std::vector<Expr>& es, std::vector<Term>& out) {
    for (const Expr& x : es) {
      R r = eval(fuel, env, x);
      if (r.kind != R::Kind::Value) return r;
      out.push_back(std::move(r.value));
    }
    return std::nullopt;
  }

  const FunTable& tbl_;
};

}  // namespace

std::string ConcreteResult::to_string() const {
  switch (kind) {
    case Kind::Value: return render_term(value);
    case Kind::Error: return "error(" + error + ")";
    case Kind::FuelExhausted: return "fuel exhausted";
  }
  return {};
}

ConcreteResult concrete_eval(const FunTable& tbl, const Env& env, const Expr& e, int fuel) {
  return Eval(tbl).eval(fuel, env, e);
}

ConcreteResult concrete_run(const FunTable& tbl, const FunName& f, const std::vector<Term>& inputs, int fuel) {
  FunLookup fl = lookup_fun(tbl, f);
  if (inputs.size() != fl.params.size())
    throw std::invalid_argument(f.to_string() + " expects " + std::to_string(fl.params.size()) + " input(s)");
  Env env;
  std::vector<Expr> actuals;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!term_is_ground(inputs[i])) throw std::invalid_argument("concrete_run needs ground inputs");
    env = env.bind(fl.params[i], inputs[i]);
    actuals.push_back(Expr::var(fl.params[i]));
  }
  return concrete_eval(tbl, env, Expr::apply(f, std::move(actuals)), fuel);
}

}  // namespace symerl
