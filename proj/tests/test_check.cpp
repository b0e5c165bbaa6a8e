#include <random>

#include "doctest.h"
#include "support.hpp"
#include "symerl/check.hpp"

using namespace symerl;

namespace {

// Reads a witness back into an assignment over the problem's holes.
symtest::Assignment to_assignment(const symtest::RandomProblem& p, const std::vector<Term>& w) {
  symtest::Assignment a;
  std::size_t i = 0;
  for (const Term& x : p.value_vars) a[x.var_id()] = w[i++];
  for (const auto& [t, v] : p.lits) {
    const Term& l = w[i++];
    REQUIRE(l.kind() == TermKind::Lit);
    a[t.var_id()] = l.kid(0);
    a[v.var_id()] = l.kid(1);
  }
  return a;
}

}  // namespace

TEST_SUITE("check") {
  TEST_CASE("badarith answer store is satisfiable") {
    VarPool pool(1);
    Store s;
    Term tg = pool.fresh("Type", VarSort::Tag), v = pool.fresh("V", VarSort::Payload);
    Term in = Term::cons(Term::lit(tg, v), Term::nil());
    s.note(in);
    REQUIRE(s.add_dif(tg, Term::tag(TypeTag::Int)));
    REQUIRE(s.add_dif(tg, Term::tag(TypeTag::Float)));
    SatResult r = check_sat(s, {in}, pool);
    REQUIRE(r.verdict == SatVerdict::Sat);
    REQUIRE(r.witness.size() == 1);
    CHECK(term_is_ground(r.witness[0]));
    const Term& elem = r.witness[0].kid(0);
    CHECK(elem.kid(0) != Term::tag(TypeTag::Int));
    CHECK(elem.kid(0) != Term::tag(TypeTag::Float));
  }

  TEST_CASE("empty store is satisfiable") {
    VarPool pool(1);
    Term x = pool.fresh("X");
    SatResult r = check_sat(Store{}, {x}, pool);
    REQUIRE(r.verdict == SatVerdict::Sat);
    CHECK(term_is_ground(r.witness[0]));
  }

  TEST_CASE("not a cell, not nil, but a list literal is unsat") {
    VarPool pool(1);
    Store s;
    Term tg = pool.fresh("T", VarSort::Tag), v = pool.fresh("V", VarSort::Payload);
    Term l = Term::lit(tg, v);
    s.note(l);
    REQUIRE(s.add_tag_is(tg, TypeTag::List));
    Term h = pool.fresh("H"), t = pool.fresh("Tl");
    REQUIRE(s.add_not_match(l, Term::cons(h, t), {h.var_id(), t.var_id()}));
    bool ok = s.add_dif(l, Term::nil());
    if (ok) CHECK(check_sat(s, {l}, pool).verdict == SatVerdict::Unsat);
  }

  TEST_CASE("integer gap is unsat") {
    VarPool pool(1);
    Store s;
    Term tg = pool.fresh("T", VarSort::Tag), n = pool.fresh("N", VarSort::Payload);
    Term x = Term::lit(tg, n);
    s.note(x);
    REQUIRE(s.add_tag_is(tg, TypeTag::Int));
    LinExpr e = LinExpr::var(n.var_id(), 2);
    bool ok = s.add_lin(LinCon::make(e, LinRel::Eq, LinExpr::constant_of(1)));
    if (ok) CHECK(check_sat(s, {x}, pool).verdict == SatVerdict::Unsat);
  }

  TEST_CASE("default_ground fills every hole") {
    VarPool pool(1);
    Store s;
    Term tg = pool.fresh("T", VarSort::Tag), v = pool.fresh("V", VarSort::Payload);
    REQUIRE(s.add_tag_is(tg, TypeTag::Int));
    Term g = default_ground(s, Term::cons(Term::lit(tg, v), pool.fresh("Rest")));
    CHECK(term_is_ground(g));
    CHECK(g.kid(0) == Term::integer(0));
  }
}

TEST_SUITE("check properties") {
  TEST_CASE("witnesses satisfy every constraint and unsat is never wrong") {
    std::mt19937 rng(21);
    int sat = 0, unsat = 0;
    for (int i = 0; i < 250; ++i) {
      VarPool pool(1);
      symtest::RandomProblem p = symtest::random_problem(rng, pool);
      Store s;
      bool alive = symtest::apply(s, p);
      SatResult r = alive ? check_sat(s, p.focus(), pool) : SatResult{SatVerdict::Unsat, {}};
      if (r.verdict == SatVerdict::Sat) {
        ++sat;
        symtest::Assignment a = to_assignment(p, r.witness);
        for (const auto& c : p.constraints) CHECK_MESSAGE(symtest::holds(c, a), c.to_string());
      } else if (r.verdict == SatVerdict::Unsat) {
        ++unsat;
        auto m = symtest::brute_force(p, 2, true);
        CHECK_MESSAGE(!m, "false unsat, problem " << i);
      }
    }
    CHECK(sat > 50);
    CHECK(unsat > 20);
  }
}
