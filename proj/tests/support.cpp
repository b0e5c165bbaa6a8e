#include "support.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "symerl/frontend.hpp"

#ifndef SYMERL_FIXTURE_DIR
#error "SYMERL_FIXTURE_DIR must be defined"
#endif

namespace symtest {

using namespace symerl;

std::string fixture_path(const std::string& name) { return std::string(SYMERL_FIXTURE_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FunTable load_source(const std::string& text) {
  ParseResult pr = parse_module(text);
  if (!pr.ok() || has_errors(pr.diagnostics)) {
    std::string msg = "parse failed:";
    for (const auto& d : pr.diagnostics) msg += " " + d.to_string();
    throw std::runtime_error(msg);
  }
  TranslateResult tr = translate_module(*pr.module);
  if (!tr.table) {
    std::string msg = "translation failed:";
    for (const auto& d : tr.diagnostics) msg += " " + d.to_string();
    throw std::runtime_error(msg);
  }
  return *tr.table;
}

FunTable load_fixture(const std::string& name) { return load_source(read_file(fixture_path(name))); }

std::vector<FixtureFun> fixture_functions() {
  return {
      {"sum_list.cerl-min", {"sum", 1}},   {"clamp.cerl-min", {"clamp", 1}},
      {"sign.cerl-min", {"sign", 1}},      {"shapes.cerl-min", {"area", 1}},
      {"shapes.cerl-min", {"safe_area", 1}}, {"lookup.cerl-min", {"lookup", 2}},
      {"flags.cerl-min", {"both", 2}},     {"flags.cerl-min", {"negate", 1}},
      {"flags.cerl-min", {"is_small", 1}},
  };
}

std::vector<Term> universe_leaves(bool floats) {
  std::vector<Term> out{Term::atom("a"), Term::atom("b")};
  for (int i = -3; i <= 3; ++i) out.push_back(Term::integer(i));
  out.push_back(Term::nil());
  if (floats) out.push_back(Term::floating(Rational(1, 2)));
  return out;
}

std::vector<Term> universe(int depth, bool floats) {
  std::vector<Term> out = universe_leaves(floats);
  for (int d = 2; d <= depth; ++d) {
    std::vector<Term> prev = out;
    out = universe_leaves(floats);
    for (const Term& h : prev)
      for (const Term& t : prev) out.push_back(Term::cons(h, t));
    out.push_back(Term::tuple({}));
    for (const Term& x : prev) out.push_back(Term::tuple({x}));
    for (const Term& x : prev)
      for (const Term& y : prev) out.push_back(Term::tuple({x, y}));
  }
  return out;
}

Term substitute(const Term& t, const Assignment& a) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = a.find(t.var_id());
      return it == a.end() ? t : it->second;
    }
    case TermKind::Lit: return Term::lit(substitute(t.kid(0), a), substitute(t.kid(1), a));
    case TermKind::Cons: return Term::cons(substitute(t.kid(0), a), substitute(t.kid(1), a));
    case TermKind::Tuple: {
      std::vector<Term> ks;
      for (const Term& k : t.kids()) ks.push_back(substitute(k, a));
      return Term::tuple(std::move(ks));
    }
    default: return t;
  }
}

bool ground_match(const Term& pat, const Term& t, Assignment& locals) {
  if (pat.is_var()) {
    auto it = locals.find(pat.var_id());
    if (it == locals.end()) throw std::logic_error("unsubstituted outer variable in pattern");
    if (it->second.kind() == TermKind::Var && it->second.var_id() == pat.var_id()) {
      it->second = t;  // first occurrence binds
      return true;
    }
    return it->second == t;
  }
  if (pat.kind() != t.kind()) return false;
  switch (pat.kind()) {
    case TermKind::Lit:
    case TermKind::Cons:
    case TermKind::Tuple:
      if (pat.arity() != t.arity()) return false;
      for (std::size_t i = 0; i < pat.arity(); ++i)
        if (!ground_match(pat.kid(i), t.kid(i), locals)) return false;
      return true;
    default: return pat == t;
  }
}

namespace {

std::optional<Rational> numeric_value(const Term& payload) {
  if (payload.kind() == TermKind::IntConst) return Rational(payload.int_value());
  if (payload.kind() == TermKind::FloatConst) return payload.float_value();
  return std::nullopt;
}

void outer_vars(const Term& t, const std::set<VarId>& skip, std::set<VarId>& out) {
  if (t.is_var()) {
    if (!skip.count(t.var_id())) out.insert(t.var_id());
    return;
  }
  if (t.kind() == TermKind::Lit || t.kind() == TermKind::Cons || t.kind() == TermKind::Tuple)
    for (const Term& k : t.kids()) outer_vars(k, skip, out);
}

std::set<VarId> constraint_vars(const Constraint& c) {
  std::set<VarId> out;
  std::set<VarId> locals(c.locals.begin(), c.locals.end());
  switch (c.kind) {
    case Constraint::Kind::Eq:
    case Constraint::Kind::NotMatch:
      outer_vars(c.a, locals, out);
      outer_vars(c.b, locals, out);
      break;
    case Constraint::Kind::Tag: outer_vars(c.a, {}, out); break;
    case Constraint::Kind::Lin:
      for (const auto& [v, k] : c.lin.expr.coeffs) out.insert(v);
      break;
  }
  return out;
}

std::string lin_text(const LinCon& c) {
  std::ostringstream os;
  for (const auto& [v, k] : c.expr.coeffs) os << k << "*_" << v << " + ";
  os << c.expr.constant;
  const char* rel[] = {" = 0", " != 0", " < 0", " =< 0"};
  os << rel[static_cast<int>(c.rel)];
  return os.str();
}

// Follows the assignment at the top of a term.
const Term& walk(const Term& t, const Assignment& a) {
  if (!t.is_var()) return t;
  auto it = a.find(t.var_id());
  return it == a.end() ? t : it->second;
}

bool compound(const Term& t) {
  return t.kind() == TermKind::Lit || t.kind() == TermKind::Cons || t.kind() == TermKind::Tuple;
}

// x == y after substituting `a` into both, without building either.
bool equal_under(const Term& x0, const Term& y0, const Assignment& a) {
  const Term& x = walk(x0, a);
  const Term& y = walk(y0, a);
  if (x.kind() != y.kind()) return false;
  if (!compound(x)) return x == y;
  if (x.arity() != y.arity()) return false;
  for (std::size_t i = 0; i < x.arity(); ++i)
    if (!equal_under(x.kid(i), y.kid(i), a)) return false;
  return true;
}

// ground_match with `a` substituted into both sides on the fly.
bool match_under(const Term& p0, const Term& t0, const Assignment& a, Assignment& locals) {
  if (p0.is_var()) {
    auto it = locals.find(p0.var_id());
    if (it != locals.end()) {
      if (it->second.is_var() && it->second.var_id() == p0.var_id()) {
        it->second = t0;  // first occurrence binds (t0 may still mention holes)
        return true;
      }
      return equal_under(it->second, t0, a);
    }
  }
  const Term& p = walk(p0, a);
  const Term& t = walk(t0, a);
  if (p.kind() != t.kind()) return false;
  if (!compound(p)) return p == t;
  if (p.arity() != t.arity()) return false;
  for (std::size_t i = 0; i < p.arity(); ++i)
    if (!match_under(p.kid(i), t.kid(i), a, locals)) return false;
  return true;
}

}  // namespace

std::string Constraint::to_string() const {
  switch (kind) {
    case Kind::Eq: return a.to_string() + " = " + b.to_string();
    case Kind::NotMatch: {
      std::string l;
      for (VarId v : locals) l += " _" + std::to_string(v);
      return "notmatch(" + a.to_string() + ", " + b.to_string() + " |" + l + ")";
    }
    case Kind::Tag: return "tag(" + a.to_string() + ") in " + std::to_string(mask);
    case Kind::Lin: return lin_text(lin);
  }
  return {};
}

bool holds(const Constraint& c, const Assignment& a) {
  switch (c.kind) {
    case Constraint::Kind::Eq: return equal_under(c.a, c.b, a);
    case Constraint::Kind::NotMatch: {
      Assignment locals;
      for (VarId v : c.locals) locals.emplace(v, Term::var(v, VarSort::Value, "_"));
      // Locals keep their own sort only through the term they get bound to.
      return !match_under(c.b, c.a, a, locals);
    }
    case Constraint::Kind::Tag: return (c.mask & tag_bit(walk(c.a, a).tag_value())) != 0;
    case Constraint::Kind::Lin: {
      Rational sum = c.lin.expr.constant;
      for (const auto& [v, k] : c.lin.expr.coeffs) {
        auto it = a.find(v);
        if (it == a.end()) throw std::logic_error("unassigned payload in Lin");
        auto x = numeric_value(it->second);
        if (!x) return false;
        sum += k * *x;
      }
      switch (c.lin.rel) {
        case LinRel::Eq: return sum == 0;
        case LinRel::Ne: return sum != 0;
        case LinRel::Lt: return sum < 0;
        case LinRel::Le: return sum <= 0;
      }
    }
  }
  return false;
}

bool apply(Store& s, const std::vector<Constraint>& cs) {
  for (const Constraint& c : cs) {
    bool ok = true;
    switch (c.kind) {
      case Constraint::Kind::Eq: ok = s.unify(c.a, c.b); break;
      case Constraint::Kind::NotMatch: ok = s.add_not_match(c.a, c.b, c.locals); break;
      case Constraint::Kind::Tag: ok = s.restrict_tag(c.a, c.mask); break;
      case Constraint::Kind::Lin: ok = s.add_lin(c.lin); break;
    }
    if (!ok || !s.ok()) return false;
  }
  return true;
}

bool apply(Store& s, const RandomProblem& p) {
  for (const Term& t : p.focus()) s.note(t);
  return apply(s, p.constraints);
}

std::vector<Term> RandomProblem::focus() const {
  std::vector<Term> out = value_vars;
  for (const auto& [t, p] : lits) out.push_back(Term::lit(t, p));
  return out;
}

namespace {

class Gen {
 public:
  Gen(std::mt19937& rng, VarPool& pool, RandomProblem& p) : rng_(rng), pool_(pool), p_(p) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  Term leaf() {
    static const std::vector<Term> leaves = universe_leaves(true);
    return leaves[pick(static_cast<int>(leaves.size()))];
  }

  Term hole() {
    std::vector<Term> hs = p_.value_vars;
    for (const auto& [t, v] : p_.lits) hs.push_back(Term::lit(t, v));
    return hs[pick(static_cast<int>(hs.size()))];
  }

  // A term over the holes and universe leaves.
  Term term(int depth) {
    int r = pick(depth > 1 ? 6 : 3);
    switch (r) {
      case 0:
      case 1: return hole();
      case 2: return leaf();
      case 3: return Term::cons(term(depth - 1), term(depth - 1));
      case 4: return Term::nil();
      default: {
        int n = pick(3);
        std::vector<Term> es;
        for (int i = 0; i < n; ++i) es.push_back(term(depth - 1));
        return Term::tuple(std::move(es));
      }
    }
  }

  // A pattern with fresh locals; occasionally mentions an outer hole.
  Term pattern(int depth, std::vector<VarId>& locals) {
    int r = pick(depth > 1 ? 7 : 4);
    switch (r) {
      case 0: {
        Term v = pool_.fresh("P");
        locals.push_back(v.var_id());
        return v;
      }
      case 1: {
        // lit(_, _) or lit(int, _) style literal patterns.
        Term tag = coin(0.5) ? Term::tag(static_cast<TypeTag>(pick(3))) : pool_.fresh("PT", VarSort::Tag);
        Term pay = pool_.fresh("PV", VarSort::Payload);
        if (tag.is_var()) locals.push_back(tag.var_id());
        locals.push_back(pay.var_id());
        return Term::lit(tag, pay);
      }
      case 2: return leaf();
      case 3: return coin(0.5) ? hole() : leaf();
      case 4: return Term::cons(pattern(depth - 1, locals), pattern(depth - 1, locals));
      case 5: return Term::nil();
      default: {
        int n = pick(3);
        std::vector<Term> es;
        for (int i = 0; i < n; ++i) es.push_back(pattern(depth - 1, locals));
        return Term::tuple(std::move(es));
      }
    }
  }

  LinExpr lin_side() {
    LinExpr e = LinExpr::constant_of(pick(7) - 3);
    for (const auto& [t, v] : p_.lits)
      if (numeric_.count(v.var_id()) && coin(0.7)) e += LinExpr::var(v.var_id(), pick(5) - 2);
    return e;
  }

  void constraint() {
    Constraint c;
    int r = pick(p_.lits.empty() ? 2 : 4);
    switch (r) {
      case 0:
        c.kind = Constraint::Kind::Eq;
        c.a = hole();
        c.b = term(3);
        break;
      case 1:
        c.kind = Constraint::Kind::NotMatch;
        c.a = coin(0.7) ? hole() : term(2);
        c.b = pattern(3, c.locals);
        break;
      case 2: {
        c.kind = Constraint::Kind::Tag;
        c.a = p_.lits[pick(static_cast<int>(p_.lits.size()))].first;
        c.mask = static_cast<std::uint8_t>(pick(16));
        break;
      }
      default: {
        // Lin only over payloads whose tag is already pinned numeric.
        auto& [t, v] = p_.lits[pick(static_cast<int>(p_.lits.size()))];
        if (!numeric_.count(v.var_id())) {
          Constraint tc;
          tc.kind = Constraint::Kind::Tag;
          tc.a = t;
          tc.mask = coin(0.3) ? kNumericTags : tag_bit(TypeTag::Int);
          p_.constraints.push_back(tc);
          numeric_.insert(v.var_id());
        }
        c.kind = Constraint::Kind::Lin;
        c.lin = LinCon::make(lin_side(), static_cast<LinRel>(pick(4)), lin_side());
        if (c.lin.expr.is_constant()) return;
        break;
      }
    }
    p_.constraints.push_back(std::move(c));
  }

 private:
  std::mt19937& rng_;
  VarPool& pool_;
  RandomProblem& p_;
  std::set<VarId> numeric_;
};

}  // namespace

RandomProblem random_problem(std::mt19937& rng, VarPool& pool) {
  RandomProblem p;
  Gen g(rng, pool, p);
  p.value_vars.push_back(pool.fresh("X"));
  if (g.coin(0.3)) p.value_vars.push_back(pool.fresh("Y"));
  int nlits = g.pick(3);
  for (int i = 0; i < nlits; ++i)
    p.lits.emplace_back(pool.fresh("T", VarSort::Tag), pool.fresh("P", VarSort::Payload));
  int n = 2 + g.pick(4);
  for (int i = 0; i < n; ++i) g.constraint();
  return p;
}

std::optional<Assignment> brute_force(const RandomProblem& p, int value_depth, bool floats,
                                      const std::function<bool(const Assignment&)>& extra) {
  // Holes in order: literal holes first (small domains), then value holes.
  struct Hole {
    std::vector<VarId> vars;
    std::vector<std::vector<Term>> choices;  // one value per var
  };
  std::vector<Hole> holes;
  for (const auto& [t, v] : p.lits) {
    Hole h{{t.var_id(), v.var_id()}, {}};
    for (const Term& l : universe_leaves(floats)) h.choices.push_back({l.kid(0), l.kid(1)});
    holes.push_back(std::move(h));
  }
  // Building the depth-3 universe dominates small searches; keep it around.
  static std::map<std::pair<int, bool>, std::vector<Term>> cache;
  auto [it, fresh] = cache.try_emplace({value_depth, floats});
  if (fresh) it->second = universe(value_depth, floats);
  const std::vector<Term>& vals = it->second;
  for (const Term& x : p.value_vars) {
    Hole h{{x.var_id()}, {}};
    for (const Term& t : vals) h.choices.push_back({t});
    holes.push_back(std::move(h));
  }

  // Check each constraint at the first level where its variables are known.
  std::map<VarId, std::size_t> level;
  for (std::size_t i = 0; i < holes.size(); ++i)
    for (VarId v : holes[i].vars) level[v] = i;
  std::vector<std::vector<const Constraint*>> at(holes.size() + 1);
  for (const Constraint& c : p.constraints) {
    std::size_t lv = 0;
    bool any = false;
    for (VarId v : constraint_vars(c)) {
      lv = std::max(lv, level.at(v));
      any = true;
    }
    at[any ? lv : 0].push_back(&c);
  }
  if (holes.empty()) {
    Assignment a;
    for (const Constraint& c : p.constraints)
      if (!holds(c, a)) return std::nullopt;
    if (extra && !extra(a)) return std::nullopt;
    return a;
  }

  Assignment a;
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == holes.size()) return !extra || extra(a);
    for (const auto& ch : holes[i].choices) {
      for (std::size_t k = 0; k < ch.size(); ++k) a[holes[i].vars[k]] = ch[k];
      bool ok = true;
      for (const Constraint* c : at[i])
        if (!holds(*c, a)) {
          ok = false;
          break;
        }
      if (ok && go(i + 1)) return true;
    }
    for (VarId v : holes[i].vars) a.erase(v);
    return false;
  };
  if (go(0)) return a;
  return std::nullopt;
}

// ---- random modules ----

namespace {

class ModGen {
 public:
  ModGen(std::mt19937& rng) : rng_(rng) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  SourceModule module(int index) {
    SourceModule m;
    m.name = index % 7 == 0 ? "mod " + std::to_string(index) : "m" + std::to_string(index);
    int nf = 1 + pick(3);
    for (int i = 0; i < nf; ++i) {
      FunDef f;
      f.fname = {i % 2 ? "g" + std::to_string(i) : "f" + std::to_string(i), static_cast<unsigned>(pick(3))};
      for (unsigned k = 0; k < f.fname.arity; ++k) f.params.push_back(k == 0 && coin(0.3) ? "@c0" : "A" + std::to_string(k));
      funs_.push_back(f.fname);
      m.functions.push_back(std::move(f));
    }
    for (FunDef& f : m.functions) {
      counter_ = 0;
      f.body = expr(3, f.params);
    }
    for (const FunDef& f : m.functions)
      if (coin(0.7)) m.exports.push_back(f.fname);
    return m;
  }

 private:
  std::string fresh_var() {
    ++counter_;
    int r = pick(4);
    if (r == 0) return "_V" + std::to_string(counter_);
    if (r == 1) return "@c" + std::to_string(counter_ + 1);
    return "X" + std::to_string(counter_);
  }

  Term literal() {
    switch (pick(6)) {
      case 0: return Term::atom(std::vector<std::string>{"a", "ok", "error", "hello world", "it's", "true"}[pick(6)]);
      case 1:
      case 2: return Term::integer(pick(21) - 10);
      case 3: return Term::floating(Rational(pick(17) - 8, 4));
      case 4: return Term::nil();
      default: return Term::boolean(coin(0.5));
    }
  }

  Pattern pattern(int depth, std::vector<std::string>& bound) {
    switch (pick(depth > 0 ? 5 : 2)) {
      case 0: {
        std::string v = fresh_var();
        bound.push_back(v);
        return Pattern::var(v);
      }
      case 1: return Pattern::literal(literal());
      case 2: {
        Pattern h = pattern(depth - 1, bound);
        Pattern t = pattern(depth - 1, bound);
        return Pattern::cons(std::move(h), std::move(t));
      }
      case 3: return Pattern::var("_");
      default: {
        std::vector<Pattern> es;
        int n = pick(3);
        for (int i = 0; i < n; ++i) es.push_back(pattern(depth - 1, bound));
        return Pattern::tuple(std::move(es));
      }
    }
  }

  Expr atom_expr(const std::vector<std::string>& scope) {
    if (!scope.empty() && coin(0.6)) return Expr::var(scope[pick(static_cast<int>(scope.size()))]);
    return Expr::literal(literal());
  }

  Expr guard(const std::vector<std::string>& scope) {
    switch (pick(4)) {
      case 0: return Expr::literal(Term::atom("true"));
      case 1: return Expr::call("erlang", std::vector<std::string>{"<", ">=", "=:=", "=="}[pick(4)],
                                {atom_expr(scope), atom_expr(scope)});
      case 2: return Expr::call("erlang", std::vector<std::string>{"is_integer", "is_atom", "is_list"}[pick(3)],
                                {atom_expr(scope)});
      default:
        return Expr::call("erlang", "and",
                          {Expr::call("erlang", "is_number", {atom_expr(scope)}),
                           Expr::call("erlang", ">", {atom_expr(scope), atom_expr(scope)})});
    }
  }

  Expr expr(int depth, const std::vector<std::string>& scope) {
    int r = pick(depth > 0 ? 11 : 3);
    switch (r) {
      case 0:
      case 1: return atom_expr(scope);
      case 2: return Expr::literal(literal());
      case 3: return Expr::cons(expr(depth - 1, scope), expr(depth - 1, scope));
      case 4: {
        std::vector<Expr> es;
        int n = pick(3);
        for (int i = 0; i < n; ++i) es.push_back(expr(depth - 1, scope));
        return Expr::tuple(std::move(es));
      }
      case 5: {
        std::string v = fresh_var();
        Expr rhs = expr(depth - 1, scope);
        std::vector<std::string> inner = scope;
        inner.push_back(v);
        return Expr::let({v}, std::move(rhs), expr(depth - 1, inner));
      }
      case 6: {
        Expr scrut = expr(depth - 1, scope);
        std::vector<Clause> cs;
        int n = pick(3) + (coin(0.1) ? 0 : 1);
        for (int i = 0; i < n; ++i) {
          std::vector<std::string> bound;
          Clause c;
          c.pats.push_back(pattern(2, bound));
          std::vector<std::string> inner = scope;
          inner.insert(inner.end(), bound.begin(), bound.end());
          c.guard = guard(inner);
          c.body = expr(depth - 1, inner);
          cs.push_back(std::move(c));
        }
        return Expr::case_of(std::move(scrut), std::move(cs));
      }
      case 7: {
        const FunName& f = funs_[pick(static_cast<int>(funs_.size()))];
        std::vector<Expr> as;
        for (unsigned i = 0; i < f.arity; ++i) as.push_back(expr(depth - 1, scope));
        return Expr::apply(f, std::move(as));
      }
      case 8: {
        static const std::vector<std::pair<std::string, int>> bs = {
            {"+", 2}, {"-", 2}, {"*", 2}, {"div", 2}, {"rem", 2}, {"<", 2}, {"==", 2},
            {"=/=", 2}, {"and", 2}, {"not", 1}, {"is_tuple", 1}, {"-", 1}};
        const auto& [name, ar] = bs[pick(static_cast<int>(bs.size()))];
        std::vector<Expr> as;
        for (int i = 0; i < ar; ++i) as.push_back(expr(depth - 1, scope));
        return Expr::call("erlang", name, std::move(as));
      }
      case 9: {
        std::vector<Expr> payload{Expr::literal(Term::atom("badmatch")), atom_expr(scope)};
        return Expr::primop("match_fail", {Expr::tuple(std::move(payload))});
      }
      default: {
        std::string ok = fresh_var(), cv = fresh_var();
        Expr e1 = expr(depth - 1, scope);
        std::vector<std::string> s2 = scope, s3 = scope;
        s2.push_back(ok);
        s3.push_back(cv);
        Expr e2 = expr(depth - 1, s2);
        return Expr::try_of(std::move(e1), ok, std::move(e2), cv, expr(depth - 1, s3));
      }
    }
  }

  std::mt19937& rng_;
  std::vector<FunName> funs_;
  int counter_ = 0;
};

}  // namespace

SourceModule random_module(std::mt19937& rng, int index) { return ModGen(rng).module(index); }

}  // namespace symtest
