#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "symerl/concrete.hpp"
#include "symerl/driver.hpp"
#include "symerl/residual.hpp"

using namespace symerl;

namespace {

VerifyOptions opts(FunName f, int bound) {
  VerifyOptions o;
  o.fun = std::move(f);
  o.bound = bound;
  return o;
}

std::set<std::string> canon(const Verdict& v) {
  std::set<std::string> out;
  for (const Answer& a : v.answers) out.insert(canonical_answer(a.text()));
  return out;
}

#ifdef SYMERL_CLI_PATH
int cli(const std::string& args) {
  std::string cmd = std::string(SYMERL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}
#endif

}  // namespace

TEST_SUITE("driver") {
  TEST_CASE("sum at bound 20 reports the known badarith and match_fail answers") {
    Verdict v = verify_file(symtest::fixture_path("sum_list.cerl-min"), opts({"sum", 1}, 20));
    REQUIRE(v.diagnostics.empty());
    std::set<std::string> got = canon(v);
    CHECK(got.count(canonical_answer(
        "In=[cons(lit(Type,_V),lit(list,nil))], Err=badarith, dif(Type,int), dif(Type,float)")));
    CHECK(got.count(canonical_answer("In=[C0], Err=match_fail, dif(C0,cons(_H,_T)), dif(C0,lit(list,nil))")));
    CHECK(got.size() == v.answers.size());
    CHECK_FALSE(v.certified);
    CHECK(exit_code(v) == 1);
    FunTable tbl = symtest::load_fixture("sum_list.cerl-min");
    for (const Answer& a : v.answers) {
      CHECK(a.status == Answer::Status::Confirmed);
      REQUIRE(a.witness);
      CHECK(concrete_run(tbl, {"sum", 1}, *a.witness, 20).error == a.error);
    }
  }

  TEST_CASE("int-list skeletons") {
    VarPool pool(1);
    std::vector<Skeleton> ss = int_list_skeletons(2, pool);
    REQUIRE(ss.size() == 3);
    CHECK(ss[0].label == "int-list length 2");
    CHECK(ss[2].inputs[0] == Term::nil());
    const Term& l = ss[0].inputs[0];
    REQUIRE(l.kind() == TermKind::Cons);
    CHECK(l.kid(0).kid(0) == Term::tag(TypeTag::Int));
    CHECK(l.kid(0).kid(1).is_var());
    CHECK(int_list_skeletons(0, pool).size() == 1);
  }

  TEST_CASE("int lists of length up to 5 certify sum at bound 17") {
    VerifyOptions o = opts({"sum", 1}, 17);
    o.skeleton = *SkeletonSpec::parse("int-list:5");
    Verdict v = verify_file(symtest::fixture_path("sum_list.cerl-min"), o);
    CHECK(v.certified);
    CHECK(exit_code(v) == 0);
    CHECK(render_text(v).find("correct up to bound 17") != std::string::npos);
    o.bound = 16;
    Verdict cut = verify_file(symtest::fixture_path("sum_list.cerl-min"), o);
    CHECK_FALSE(cut.certified);
    CHECK(cut.answers.empty());
    CHECK(exit_code(cut) == 3);
  }

  TEST_CASE("skeleton spec parsing") {
    CHECK(SkeletonSpec::parse("general")->kind == SkeletonSpec::Kind::General);
    CHECK(SkeletonSpec::parse("int-list:7")->max_length == 7);
    CHECK(SkeletonSpec::parse("term:[X|T]")->kind == SkeletonSpec::Kind::Terms);
    CHECK_FALSE(SkeletonSpec::parse("int-list:x"));
    CHECK_FALSE(SkeletonSpec::parse("bogus"));
  }

  TEST_CASE("constant function is certified") {
    Verdict v = verify_source("module m ['f'/0] = 'f'/0 = fun () -> 1 end", opts({"f", 0}, 5));
    CHECK(v.certified);
    CHECK(exit_code(v) == 0);
  }

  TEST_CASE("diagnostics") {
    Verdict v = verify_source("module m = f/0 = fun () -> apply 'g'/0 () end", opts({"f", 0}, 5));
    CHECK_FALSE(v.diagnostics.empty());
    CHECK(exit_code(v) == 2);
    Verdict missing = verify_source("module m = f/0 = fun () -> 1 end", opts({"h", 0}, 5));
    CHECK(exit_code(missing) == 2);
    CHECK(exit_code(verify_file("/nonexistent/x.cerl-min", opts({"f", 0}, 5))) == 2);
  }

  TEST_CASE("max answers stops the search") {
    VerifyOptions o = opts({"sum", 1}, 20);
    o.max_answers = 3;
    Verdict v = verify_file(symtest::fixture_path("sum_list.cerl-min"), o);
    CHECK(v.answers.size() == 3);
  }

  TEST_CASE("json round trip") {
    Verdict v = verify_file(symtest::fixture_path("sign.cerl-min"), opts({"sign", 1}, 20));
    Verdict back = read_json_report(render_json(v));
    CHECK(back.fun == v.fun);
    CHECK(back.bound == v.bound);
    CHECK(back.certified == v.certified);
    REQUIRE(back.answers.size() == v.answers.size());
    for (std::size_t i = 0; i < v.answers.size(); ++i) {
      CHECK(back.answers[i].text() == v.answers[i].text());
      CHECK(back.answers[i].status == v.answers[i].status);
      CHECK(back.answers[i].witness == v.answers[i].witness);
    }
    CHECK(render_text(back) == render_text(v));
    CHECK_THROWS(read_json_report("{\"bound\": 1}"));
  }

  TEST_CASE("ground term notation") {
    Term t = Term::tuple({Term::atom("it's"), Term::list({Term::integer(-3), Term::floating(Rational(1, 4))}),
                          Term::cons(Term::nil(), Term::atom("x"))});
    CHECK(parse_ground_term(render_term(t)) == t);
    CHECK(erlang_value(t) == "{'it\\'s',[-3,0.25],[[]|x]}");
    CHECK_THROWS(parse_ground_term("lit(int,"));
  }

#ifdef SYMERL_CLI_PATH
  TEST_CASE("cli exit codes") {
    const std::string dir = symtest::fixture_path("");
    CHECK(cli("verify " + dir + "sum_list.cerl-min --fun sum/1 --bound 10") == 1);
    CHECK(cli("verify " + dir + "shapes.cerl-min --fun safe_area/1 --bound 20") == 0);
    CHECK(cli("verify " + dir + "sum_list.cerl-min --fun sum/1 --bound 2 --skeleton int-list:3") == 3);
    CHECK(cli("verify " + dir + "sum_list.cerl-min --fun nope/1") == 2);
    CHECK(cli("verify " + dir + "sum_list.cerl-min --fun sum/1 --format json") == 1);
  }
#endif
}
