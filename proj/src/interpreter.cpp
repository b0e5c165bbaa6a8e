#include "symerl/interpreter.hpp"

#include <algorithm>
#include <stdexcept>

namespace symerl {

namespace {

bool ground_number(const Term& payload) {
  return payload.kind() == TermKind::IntConst || payload.kind() == TermKind::FloatConst;
}

Rational number_value(const Term& payload) {
  return payload.kind() == TermKind::IntConst ? Rational(payload.int_value()) : payload.float_value();
}

Term make_number(TypeTag tag, const Rational& v) {
  if (tag == TypeTag::Int) return Term::integer(boost::multiprecision::numerator(v));
  return Term::floating(v);
}

}  // namespace

void Interpreter::eval(int bound, const Env& env, const Expr& e, const Store& store, const Sink& sink) {
  ev(bound, env, e, store, [&](Branch b) {
    if (!stop_ && !sink(std::move(b))) stop_ = true;
  });
}

Term Interpreter::pattern_term(const Pattern& p, std::vector<std::pair<std::string, Term>>& vars,
                               std::vector<VarId>& locals) {
  switch (p.kind) {
    case Pattern::Kind::Var: {
      Term v = pool_.fresh(p.name);
      locals.push_back(v.var_id());
      if (p.name != "_") vars.emplace_back(p.name, v);
      return v;
    }
    case Pattern::Kind::Lit: return p.lit;
    case Pattern::Kind::Cons:
      return Term::cons(pattern_term(p.elems[0], vars, locals), pattern_term(p.elems[1], vars, locals));
    case Pattern::Kind::Tuple: {
      std::vector<Term> es;
      for (const Pattern& q : p.elems) es.push_back(pattern_term(q, vars, locals));
      return Term::tuple(std::move(es));
    }
  }
  return Term();
}

void Interpreter::ev_list(int bound, const Env& env, const std::vector<Expr>& es, std::size_t i,
                          std::vector<Term> acc, int steps, Store st, const ListK& k) {
  if (stop_) return;
  if (i == es.size()) {
    k(std::move(st), false, std::move(acc), steps);
    return;
  }
  ev(bound, env, es[i], std::move(st), [&](Branch b) {
    int s = std::min(steps, b.steps_left);
    if (b.is_error()) {
      k(std::move(b.store), true, {b.result}, s);
      return;
    }
    std::vector<Term> next = acc;
    next.push_back(b.result);
    ev_list(bound, env, es, i + 1, std::move(next), s, std::move(b.store), k);
  });
}

void Interpreter::ev(int bound, const Env& env, const Expr& e, Store st, const K& k) {
  if (stop_) return;
  auto cut = [&] {
    exhausted_ = true;
    ++cuts_;
  };
  // Results of sub-evaluations are reported under the caller's environment,
  // carrying only the error flag back.
  auto back = [&](Branch b) { k(Branch{std::move(b.store), env.with_error_flag(b.is_error()), b.result, b.steps_left}); };

  switch (e.kind) {
    case Expr::Kind::Var: k(Branch{std::move(st), env, env.at(e.name), bound}); return;
    case Expr::Kind::Lit: k(Branch{std::move(st), env, e.lit, bound}); return;

    case Expr::Kind::Cons:
    case Expr::Kind::Tuple:
      ev_list(bound, env, e.args, 0, {}, bound, std::move(st), [&](Store s, bool err, std::vector<Term> vs, int steps) {
        if (err) {
          k(Branch{std::move(s), env.with_error_flag(true), vs[0], steps});
          return;
        }
        Term t = e.kind == Expr::Kind::Cons ? Term::cons(vs[0], vs[1]) : Term::tuple(std::move(vs));
        k(Branch{std::move(s), env, t, steps});
      });
      return;

    case Expr::Kind::Let: {
      if (bound <= 0) return cut();
      int b1 = bound - 1;
      ev(b1, env, e.args[0], std::move(st), [&](Branch r) {
        if (r.is_error()) return back(std::move(r));
        ev(b1, env.bind(e.vars[0], r.result), e.args[1], std::move(r.store), back);
      });
      return;
    }

    case Expr::Kind::Case: {
      if (bound <= 0) return cut();
      int b1 = bound - 1;
      ev(b1, env, e.args[0], std::move(st), [&](Branch r) {
        if (r.is_error()) return back(std::move(r));
        ev_clauses(b1, env, r.result, e.clauses, 0, std::move(r.store), r.steps_left, k);
      });
      return;
    }

    case Expr::Kind::Apply: {
      if (bound <= 0) return cut();
      int b1 = bound - 1;
      ev_list(b1, env, e.args, 0, {}, b1, std::move(st), [&](Store s, bool err, std::vector<Term> vs, int steps) {
        if (err) {
          k(Branch{std::move(s), env.with_error_flag(true), vs[0], steps});
          return;
        }
        FunLookup fl = lookup_fun(tbl_, e.fname);
        Env callee;
        for (std::size_t i = 0; i < fl.params.size(); ++i) callee = callee.bind(fl.params[i], vs[i]);
        ev(b1, callee, fl.body, std::move(s), back);
      });
      return;
    }

    case Expr::Kind::Call: {
      if (bound <= 0) return cut();
      int b1 = bound - 1;
      ev_list(b1, env, e.args, 0, {}, b1, std::move(st), [&](Store s, bool err, std::vector<Term> vs, int steps) {
        if (err) {
          k(Branch{std::move(s), env.with_error_flag(true), vs[0], steps});
          return;
        }
        builtin(e.name, vs, std::move(s), env, steps, k);
      });
      return;
    }

    case Expr::Kind::PrimOp: {
      if (bound <= 0) return cut();
      int b1 = bound - 1;
      ev_list(b1, env, e.args, 0, {}, b1, std::move(st), [&](Store s, bool err, std::vector<Term> vs, int steps) {
        if (err) {
          k(Branch{std::move(s), env.with_error_flag(true), vs[0], steps});
          return;
        }
        k(Branch{std::move(s), env.with_error_flag(true), Term::error(e.name), steps});
      });
      return;
    }

    case Expr::Kind::Try: {
      if (bound <= 0) return cut();
      int b1 = bound - 1;
      ev(b1, env, e.args[0], std::move(st), [&](Branch r) {
        if (!r.is_error()) {
          ev(b1, env.bind(e.vars[0], r.result), e.args[1], std::move(r.store), back);
        } else {
          // The handler runs with the flag cleared and the error as data.
          ev(b1, env.with_error_flag(false).bind(e.vars[1], r.result), e.args[2], std::move(r.store), back);
        }
      });
      return;
    }
  }
}

void Interpreter::ev_clauses(int bound, const Env& env, const Term& v, const std::vector<Clause>& cs, std::size_t i,
                             Store st, int steps, const K& k) {
  if (stop_ || i == cs.size()) return;
  const Clause& c = cs[i];
  std::vector<std::pair<std::string, Term>> vars;
  std::vector<VarId> locals;
  Term pat = pattern_term(c.pats[0], vars, locals);

  auto next = [&](Store s) { ev_clauses(bound, env, v, cs, i + 1, std::move(s), steps, k); };

  {
    Store m = st;
    if (m.unify(v, pat)) {
      Env ce = env;
      for (const auto& [n, t] : vars) ce = ce.bind(n, t);
      auto body = [&](Store s) {
        ev(bound, ce, c.body, std::move(s), [&](Branch b) {
          k(Branch{std::move(b.store), env.with_error_flag(b.is_error()), b.result, b.steps_left});
        });
      };
      ev(bound, ce, c.guard, std::move(m), [&](Branch g) {
        // Guard errors and non-true guard values fall through.
        if (g.is_error()) return next(std::move(g.store));
        Term r = g.store.resolve(g.result);
        if (term_is_ground(r)) {
          if (is_true(r))
            body(std::move(g.store));
          else
            next(std::move(g.store));
          return;
        }
        Store t = g.store;
        if (t.unify(r, Term::boolean(true))) body(std::move(t));
        Store f = std::move(g.store);
        if (f.add_dif(r, Term::boolean(true))) next(std::move(f));
      });
    }
  }
  if (stop_) return;
  if (st.add_not_match(v, pat, locals)) next(std::move(st));
}

// ---- builtins ----

void Interpreter::numeric(Store st, const Term& x0, std::uint8_t want, const NumK& ok, const StoreK& bad) {
  Term x = st.deref(x0);
  if (x.kind() == TermKind::Lit) {
    Term tag = st.deref(x.kid(0));
    Term payload = st.deref(x.kid(1));
    if (!tag.is_var()) {
      if (want & tag_bit(tag.tag_value()))
        ok(std::move(st), Num{tag, payload});
      else
        bad(std::move(st));
      return;
    }
    Store a = st;
    if (a.restrict_tag(tag, want)) {
      a.note(x);
      ok(std::move(a), Num{tag, payload});
    }
    if (stop_) return;
    if (st.restrict_tag(tag, kAllTags & ~want)) bad(std::move(st));
    return;
  }
  if (!x.is_var()) {
    bad(std::move(st));
    return;
  }
  {
    Store a = st;
    Term tag = pool_.fresh("Type", VarSort::Tag);
    Term n = pool_.fresh("N", VarSort::Payload);
    if (a.restrict_tag(tag, want) && a.unify(x, Term::lit(tag, n))) ok(std::move(a), Num{a.deref(tag), a.deref(n)});
  }
  if (stop_) return;
  {
    Store b = st;
    Term tag = pool_.fresh("Type", VarSort::Tag);
    Term v = pool_.fresh("V", VarSort::Payload);
    if (b.restrict_tag(tag, kAllTags & ~want) && b.unify(x, Term::lit(tag, v))) bad(std::move(b));
  }
  if (stop_) return;
  {
    Term tag = pool_.fresh("Type", VarSort::Tag);
    Term v = pool_.fresh("V", VarSort::Payload);
    if (st.add_not_match(x, Term::lit(tag, v), {tag.var_id(), v.var_id()})) bad(std::move(st));
  }
}

void Interpreter::boolean(Store st, const Term& x, const std::function<void(Store, bool)>& ok, const StoreK& bad) {
  for (bool b : {true, false}) {
    Store s = st;
    if (s.unify(x, Term::boolean(b))) ok(std::move(s), b);
    if (stop_) return;
  }
  if (st.add_dif(x, Term::boolean(true)) && st.add_dif(x, Term::boolean(false))) bad(std::move(st));
}

void Interpreter::tag_test(Store st, const Term& x0, std::uint8_t mask, const StoreK& yes, const StoreK& no) {
  Term x = st.deref(x0);
  if (x.kind() == TermKind::Lit) {
    Store a = st;
    if (a.restrict_tag(x.kid(0), mask)) yes(std::move(a));
    if (stop_) return;
    if (st.restrict_tag(x.kid(0), kAllTags & ~mask)) no(std::move(st));
    return;
  }
  if (!x.is_var()) {
    no(std::move(st));
    return;
  }
  {
    Store a = st;
    Term tag = pool_.fresh("Type", VarSort::Tag);
    Term v = pool_.fresh("V", VarSort::Payload);
    if (a.restrict_tag(tag, mask) && a.unify(x, Term::lit(tag, v))) yes(std::move(a));
  }
  if (stop_) return;
  if (mask != kAllTags) {
    Store b = st;
    Term tag = pool_.fresh("Type", VarSort::Tag);
    Term v = pool_.fresh("V", VarSort::Payload);
    if (b.restrict_tag(tag, kAllTags & ~mask) && b.unify(x, Term::lit(tag, v))) no(std::move(b));
  }
  if (stop_) return;
  Term tag = pool_.fresh("Type", VarSort::Tag);
  Term v = pool_.fresh("V", VarSort::Payload);
  if (st.add_not_match(x, Term::lit(tag, v), {tag.var_id(), v.var_id()})) no(std::move(st));
}

void Interpreter::exact_eq(Store st, const Term& a, const Term& b, const StoreK& yes, const StoreK& no) {
  Store t = st;
  if (t.unify(a, b)) yes(std::move(t));
  if (stop_) return;
  if (st.add_dif(a, b)) no(std::move(st));
}

Term Interpreter::numeric_result(Store& st, const Term& tag_a, const Term& tag_b) {
  Term ta = st.deref(tag_a), tb = st.deref(tag_b);
  if (!ta.is_var() && !tb.is_var()) {
    bool f = ta.tag_value() == TypeTag::Float || tb.tag_value() == TypeTag::Float;
    return Term::tag(f ? TypeTag::Float : TypeTag::Int);
  }
  Term r = pool_.fresh("Type", VarSort::Tag);
  st.add_num_join(r, {ta, tb});
  return st.deref(r);
}

void Interpreter::arith(const std::string& op, Store st, const Num& a, const Num& b, const Env& env, int steps,
                        const K& k) {
  Term pa = st.deref(a.payload), pb = st.deref(b.payload);
  Term ta = st.deref(a.tag), tb = st.deref(b.tag);
  auto emit = [&](Store s, Term v) { k(Branch{std::move(s), env, std::move(v), steps}); };
  if (ground_number(pa) && ground_number(pb) && !ta.is_var() && !tb.is_var()) {
    Rational x = number_value(pa), y = number_value(pb);
    Rational r = op == "+" ? Rational(x + y) : op == "-" ? Rational(x - y) : Rational(x * y);
    bool f = ta.tag_value() == TypeTag::Float || tb.tag_value() == TypeTag::Float;
    return emit(std::move(st), make_number(f ? TypeTag::Float : TypeTag::Int, r));
  }
  Term tag = numeric_result(st, ta, tb);
  if (!st.ok()) return;
  Term n = pool_.fresh("N", VarSort::Payload);
  Term result = Term::lit(tag, n);
  st.note(result);
  auto ln = st.lin_of(n), la = st.lin_of(pa), lb = st.lin_of(pb);
  if (!ln || !la || !lb) return;
  std::optional<LinExpr> rhs;
  if (op == "+") rhs = *la + *lb;
  if (op == "-") rhs = *la - *lb;
  if (op == "*") {
    if (la->is_constant()) rhs = *lb * la->constant;
    else if (lb->is_constant()) rhs = *la * lb->constant;
  }
  if (rhs) {
    if (!st.add_lin(LinCon::make(*ln, LinRel::Eq, *rhs))) return;
  } else {
    st.mark_approximate();
  }
  emit(std::move(st), result);
}

void Interpreter::divrem(const std::string& op, Store st, const Num& a, const Num& b, const Env& env, int steps,
                         const K& k) {
  Term pa = st.deref(a.payload), pb = st.deref(b.payload);
  auto emit = [&](Store s, Term v) { k(Branch{std::move(s), env, std::move(v), steps}); };
  auto badarith = [&](Store s) { k(Branch{std::move(s), env.with_error_flag(true), Term::error("badarith"), steps}); };
  if (pb.kind() == TermKind::IntConst && pb.int_value() == 0) return badarith(std::move(st));
  if (pa.kind() == TermKind::IntConst && pb.kind() == TermKind::IntConst) {
    // cpp_int division truncates toward zero and rem takes the dividend's sign.
    Integer r = op == "div" ? Integer(pa.int_value() / pb.int_value()) : Integer(pa.int_value() % pb.int_value());
    return emit(std::move(st), Term::integer(r));
  }
  auto ldiv = st.lin_of(pb);
  auto lnum = st.lin_of(pa);
  if (!ldiv || !lnum) return;
  if (pb.kind() != TermKind::IntConst) {
    // Symbolic divisor: zero raises, anything else is left unconstrained.
    Store z = st;
    if (z.add_lin(LinCon{*ldiv, LinRel::Eq})) {
      Store nz = st;
      if (nz.add_lin(LinCon{*ldiv, LinRel::Ne})) {
        Term n = pool_.fresh("N", VarSort::Payload);
        Term result = Term::lit(Term::tag(TypeTag::Int), n);
        nz.note(result);
        nz.lin_of(n);
        nz.mark_approximate();
        emit(std::move(nz), result);
      }
      if (stop_) return;
      badarith(std::move(z));
      return;
    }
    Term n = pool_.fresh("N", VarSort::Payload);
    Term result = Term::lit(Term::tag(TypeTag::Int), n);
    st.note(result);
    st.mark_approximate();
    emit(std::move(st), result);
    return;
  }
  Rational d(pb.int_value());
  Rational bound = abs(d) - 1;
  for (bool nonneg : {true, false}) {
    Store s = st;
    Term q = pool_.fresh("Q", VarSort::Payload), r = pool_.fresh("R", VarSort::Payload);
    Term lq = Term::lit(Term::tag(TypeTag::Int), q), lr = Term::lit(Term::tag(TypeTag::Int), r);
    s.note(lq);
    s.note(lr);
    LinExpr eq = LinExpr::var(q.var_id(), d) + *s.lin_of(r);
    bool ok = s.add_lin(LinCon::make(*lnum, LinRel::Eq, eq));
    if (nonneg) {
      ok = ok && s.add_lin(LinCon::make(LinExpr::constant_of(0), LinRel::Le, *lnum)) &&
           s.add_lin(LinCon::make(LinExpr::constant_of(0), LinRel::Le, LinExpr::var(r.var_id()))) &&
           s.add_lin(LinCon::make(LinExpr::var(r.var_id()), LinRel::Le, LinExpr::constant_of(bound)));
    } else {
      ok = ok && s.add_lin(LinCon::make(*lnum, LinRel::Lt, LinExpr::constant_of(0))) &&
           s.add_lin(LinCon::make(LinExpr::constant_of(-bound), LinRel::Le, LinExpr::var(r.var_id()))) &&
           s.add_lin(LinCon::make(LinExpr::var(r.var_id()), LinRel::Le, LinExpr::constant_of(0)));
    }
    if (ok) emit(std::move(s), op == "div" ? lq : lr);
    if (stop_) return;
  }
}

void Interpreter::builtin(const std::string& name, const std::vector<Term>& args, Store st, const Env& env, int steps,
                          const K& k) {
  auto emit = [&](Store s, Term v) { k(Branch{std::move(s), env, std::move(v), steps}); };
  auto raise = [&](const char* err) {
    return [&, err](Store s) { k(Branch{std::move(s), env.with_error_flag(true), Term::error(err), steps}); };
  };
  auto emit_bool = [&](bool b) { return [&, b](Store s) { emit(std::move(s), Term::boolean(b)); }; };
  const std::size_t n = args.size();

  if (n == 2 && (name == "+" || name == "-" || name == "*")) {
    numeric(std::move(st), args[0], kNumericTags, [&](Store s1, Num a) {
      numeric(std::move(s1), args[1], kNumericTags,
              [&](Store s2, Num b) { arith(name, std::move(s2), a, b, env, steps, k); }, raise("badarith"));
    }, raise("badarith"));
    return;
  }
  if (n == 2 && (name == "div" || name == "rem")) {
    const std::uint8_t ints = tag_bit(TypeTag::Int);
    numeric(std::move(st), args[0], ints, [&](Store s1, Num a) {
      numeric(std::move(s1), args[1], ints, [&](Store s2, Num b) { divrem(name, std::move(s2), a, b, env, steps, k); },
              raise("badarith"));
    }, raise("badarith"));
    return;
  }
  if (n == 1 && (name == "-" || name == "+")) {
    numeric(std::move(st), args[0], kNumericTags, [&](Store s, Num a) {
      if (name == "+") return emit(std::move(s), Term::lit(a.tag, a.payload));
      Term p = s.deref(a.payload);
      if (ground_number(p) && !s.deref(a.tag).is_var())
        return emit(std::move(s), make_number(s.deref(a.tag).tag_value(), -number_value(p)));
      Term r = pool_.fresh("N", VarSort::Payload);
      Term result = Term::lit(a.tag, r);
      s.note(result);
      auto lr = s.lin_of(r), la = s.lin_of(p);
      if (lr && la && s.add_lin(LinCon::make(*lr, LinRel::Eq, *la * Rational(-1)))) emit(std::move(s), result);
    }, raise("badarith"));
    return;
  }
  if (n == 2 && (name == "<" || name == "=<" || name == ">" || name == ">=")) {
    numeric(std::move(st), args[0], kNumericTags, [&](Store s1, Num a) {
      numeric(std::move(s1), args[1], kNumericTags, [&](Store s2, Num b) {
        // Normalize to x < y or x =< y.
        bool strict = name == "<" || name == ">";
        bool swap = name == ">" || name == ">=";
        Term px = s2.deref(swap ? b.payload : a.payload), py = s2.deref(swap ? a.payload : b.payload);
        if (ground_number(px) && ground_number(py)) {
          Rational x = number_value(px), y = number_value(py);
          return emit(std::move(s2), Term::boolean(strict ? x < y : x <= y));
        }
        auto lx = s2.lin_of(px), ly = s2.lin_of(py);
        if (!lx || !ly) return;
        Store t = s2;
        if (t.add_lin(LinCon::make(*lx, strict ? LinRel::Lt : LinRel::Le, *ly))) emit(std::move(t), Term::boolean(true));
        if (stop_) return;
        if (s2.add_lin(LinCon::make(*ly, strict ? LinRel::Le : LinRel::Lt, *lx))) emit(std::move(s2), Term::boolean(false));
      }, raise("badarith"));
    }, raise("badarith"));
    return;
  }
  if (n == 2 && (name == "==" || name == "/=")) {
    bool eq = name == "==";
    numeric(std::move(st), args[0], kNumericTags, [&](Store s1, Num a) {
      numeric(std::move(s1), args[1], kNumericTags, [&](Store s2, Num b) {
        Term px = s2.deref(a.payload), py = s2.deref(b.payload);
        if (ground_number(px) && ground_number(py))
          return emit(std::move(s2), Term::boolean((number_value(px) == number_value(py)) == eq));
        auto lx = s2.lin_of(px), ly = s2.lin_of(py);
        if (!lx || !ly) return;
        Store t = s2;
        if (t.add_lin(LinCon::make(*lx, LinRel::Eq, *ly))) emit(std::move(t), Term::boolean(eq));
        if (stop_) return;
        if (s2.add_lin(LinCon::make(*lx, LinRel::Ne, *ly))) emit(std::move(s2), Term::boolean(!eq));
      }, emit_bool(!eq));
    }, [&](Store s1) { exact_eq(std::move(s1), args[0], args[1], emit_bool(eq), emit_bool(!eq)); });
    return;
  }
  if (n == 2 && (name == "=:=" || name == "=/=")) {
    bool eq = name == "=:=";
    exact_eq(std::move(st), args[0], args[1], emit_bool(eq), emit_bool(!eq));
    return;
  }
  if (n == 2 && (name == "and" || name == "or")) {
    boolean(std::move(st), args[0], [&](Store s1, bool x) {
      boolean(std::move(s1), args[1], [&](Store s2, bool y) {
        emit(std::move(s2), Term::boolean(name == "and" ? (x && y) : (x || y)));
      }, raise("badarg"));
    }, raise("badarg"));
    return;
  }
  if (n == 1 && name == "not") {
    boolean(std::move(st), args[0], [&](Store s, bool x) { emit(std::move(s), Term::boolean(!x)); }, raise("badarg"));
    return;
  }
  if (n == 1 && (name == "is_integer" || name == "is_float" || name == "is_atom" || name == "is_number")) {
    std::uint8_t mask = name == "is_integer" ? tag_bit(TypeTag::Int)
                        : name == "is_float" ? tag_bit(TypeTag::Float)
                        : name == "is_atom"  ? tag_bit(TypeTag::Atom)
                                             : kNumericTags;
    tag_test(std::move(st), args[0], mask, emit_bool(true), emit_bool(false));
    return;
  }
  if (n == 1 && name == "is_list") {
    Term x = st.deref(args[0]);
    if (x.kind() == TermKind::Lit) {
      tag_test(std::move(st), x, tag_bit(TypeTag::List), emit_bool(true), emit_bool(false));
      return;
    }
    if (!x.is_var()) return emit(std::move(st), Term::boolean(x.kind() == TermKind::Cons));
    {
      Store a = st;
      if (a.unify(x, Term::nil())) emit(std::move(a), Term::boolean(true));
    }
    if (stop_) return;
    {
      Store b = st;
      if (b.unify(x, Term::cons(pool_.fresh("H"), pool_.fresh("T")))) emit(std::move(b), Term::boolean(true));
    }
    if (stop_) return;
    Term h = pool_.fresh("H"), t = pool_.fresh("T");
    if (st.add_dif(x, Term::nil()) && st.add_not_match(x, Term::cons(h, t), {h.var_id(), t.var_id()}))
      emit(std::move(st), Term::boolean(false));
    return;
  }
  if (n == 1 && name == "is_tuple") {
    Term x = st.deref(args[0]);
    if (!x.is_var()) return emit(std::move(st), Term::boolean(x.kind() == TermKind::Tuple));
    {
      Store a = st;
      Term tg = pool_.fresh("Type", VarSort::Tag), v = pool_.fresh("V", VarSort::Payload);
      Term h = pool_.fresh("H"), t = pool_.fresh("T");
      if (a.add_not_match(x, Term::lit(tg, v), {tg.var_id(), v.var_id()}) &&
          a.add_not_match(x, Term::cons(h, t), {h.var_id(), t.var_id()}))
        emit(std::move(a), Term::boolean(true));
    }
    if (stop_) return;
    {
      Store b = st;
      if (b.unify(x, Term::lit(pool_.fresh("Type", VarSort::Tag), pool_.fresh("V", VarSort::Payload))))
        emit(std::move(b), Term::boolean(false));
    }
    if (stop_) return;
    if (st.unify(x, Term::cons(pool_.fresh("H"), pool_.fresh("T")))) emit(std::move(st), Term::boolean(false));
    return;
  }
  throw InternalError("unsupported builtin erlang:" + name + "/" + std::to_string(n));
}

Outcome eval(int bound, const Config& cfg, const Store& store, const FunTable& tbl, VarPool& pool) {
  Outcome out;
  Interpreter in(tbl, pool);
  in.eval(bound, cfg.env, cfg.expr, store, [&](Branch&& b) {
    out.branches.push_back(std::move(b));
    return true;
  });
  out.bound_exhausted = in.bound_exhausted();
  return out;
}

RunOutcome run(const FunTable& tbl, const FunName& f, int bound, const std::vector<Term>& inputs, const Store& store,
               VarPool& pool, const RunOptions& opts) {
  FunLookup fl = lookup_fun(tbl, f);
  if (inputs.size() != fl.params.size())
    throw std::invalid_argument(f.to_string() + " expects " + std::to_string(fl.params.size()) + " input(s), got " +
                                std::to_string(inputs.size()));
  Env env;
  std::vector<Expr> actuals;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    env = env.bind(fl.params[i], inputs[i]);
    actuals.push_back(Expr::var(fl.params[i]));
  }
  Store s = store;
  for (const Term& t : inputs) s.note(t);
  Expr call = Expr::apply(f, std::move(actuals));

  RunOutcome out;
  Interpreter in(tbl, pool);
  in.eval(bound, env, call, s, [&](Branch&& b) {
    if (!b.is_error()) {
      ++out.value_branches;
      return true;
    }
    SatResult sat = check_sat(b.store, inputs, pool, opts.sat);
    if (sat.verdict == SatVerdict::Unsat) return true;
    RunAnswer a{std::move(b), std::move(sat)};
    if (opts.on_error) return opts.on_error(std::move(a));
    out.errors.push_back(std::move(a));
    return true;
  });
  out.bound_exhausted = in.bound_exhausted();
  out.stopped = in.stopped();
  return out;
}

}  // namespace symerl
