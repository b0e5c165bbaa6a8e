// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// fails. Tolerances are pinned below.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "symerl/concrete.hpp"
#include "symerl/driver.hpp"
#include "symerl/frontend.hpp"
#include "symerl/interpreter.hpp"
#include "symerl/residual.hpp"

using namespace symerl;

namespace {

constexpr double kGoldenSeconds = 1.0;
constexpr double kCertifySeconds = 30.0;
constexpr double kCompletenessSeconds = 300.0;
constexpr double kSoundnessSeconds = 120.0;
constexpr int kRandomStores = 1000;
constexpr int kRoundTripModules = 60;
constexpr int kCompletenessBound = 50;
constexpr int kCrashFuel = 50;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int n, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " [" << n << "] " << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

std::string fmt(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f s", s);
  return buf;
}

VerifyOptions options(const FunName& f, int bound, const std::string& skeleton = "general") {
  VerifyOptions o;
  o.fun = f;
  o.bound = bound;
  o.skeleton = *SkeletonSpec::parse(skeleton);
  return o;
}

// ---- 1: golden answers ----

void golden() {
  const std::string want1 = "In=[cons(lit(Type,_V),lit(list,nil))], Err=badarith, dif(Type,int), dif(Type,float)";
  const std::string want2 = "In=[L], Err=match_fail, dif(L,cons(_Head,_Tail)), dif(L,lit(list,nil))";
  auto t0 = Clock::now();
  Verdict v = verify_file(symtest::fixture_path("sum_list.cerl-min"), options({"sum", 1}, 20));
  double dt = since(t0);
  std::istringstream lines(render_text(v));
  std::set<std::string> got;
  for (std::string line; std::getline(lines, line);)
    if (line.rfind("In=", 0) == 0) got.insert(canonical_answer(line));
  bool has1 = got.count(canonical_answer(want1)) > 0;
  bool has2 = got.count(canonical_answer(want2)) > 0;
  std::ostringstream d;
  d << v.answers.size() << " answers, badarith answer " << (has1 ? "found" : "missing") << ", match_fail answer "
    << (has2 ? "found" : "missing") << ", " << fmt(dt) << " (limit " << kGoldenSeconds << " s)";
  report(1, "golden answers for sum/1 at bound 20", has1 && has2 && dt < kGoldenSeconds, d.str());
}

// ---- 2: certification ----

void certification() {
  auto t0 = Clock::now();
  Verdict v = verify_file(symtest::fixture_path("sum_list.cerl-min"), options({"sum", 1}, 100, "int-list:100"));
  double dt = since(t0);
  int longest = -1;
  for (const SkeletonReport& s : v.skeletons)
    if (!s.bound_exhausted) {
      int n = std::stoi(s.label.substr(s.label.rfind(' ') + 1));
      longest = std::max(longest, n);
    }
  std::ostringstream d;
  d << "certified=" << (v.certified ? "true" : "false") << ", " << v.answers.size() << " answers, lengths 0.."
    << longest << " complete, " << fmt(dt) << " (limit " << kCertifySeconds << " s)";
  report(2, "int-list:100 certified at bound 100", v.certified && v.answers.empty() && dt < kCertifySeconds,
         d.str());
}

// ---- 3: witness confirmation ----

void confirmation() {
  std::size_t total = 0, confirmed = 0;
  std::string first_bad;
  for (const auto& ff : symtest::fixture_functions()) {
    Verdict v = verify_file(symtest::fixture_path(ff.file), options(ff.fun, 20));
    for (const Answer& a : v.answers) {
      ++total;
      if (a.status == Answer::Status::Confirmed)
        ++confirmed;
      else if (first_bad.empty())
        first_bad = ff.fun.to_string() + ": " + a.text();
    }
  }
  std::ostringstream d;
  d << confirmed << "/" << total << " confirmed over " << symtest::fixture_functions().size() << " functions";
  if (!first_bad.empty()) d << "; first unconfirmed " << first_bad;
  report(3, "every answer confirmed by ground execution", total > 0 && confirmed == total, d.str());
}

// ---- 4: bounded completeness ----

// Cheap necessary condition for `g` to be an instance of `t`.
bool compatible(const Term& t, const Term& g) {
  if (t.is_var()) return true;
  if (t.kind() != g.kind()) return false;
  switch (t.kind()) {
    case TermKind::Lit:
    case TermKind::Cons:
    case TermKind::Tuple:
      if (t.arity() != g.arity()) return false;
      for (std::size_t i = 0; i < t.arity(); ++i)
        if (!compatible(t.kid(i), g.kid(i))) return false;
      return true;
    default: return t == g;
  }
}

struct Covered {
  std::vector<Term> inputs;  // skeleton inputs, resolved in the answer's store
  Store store;
  std::string error;
};

bool covers(const Covered& c, const std::vector<Term>& skel, const std::vector<Term>& ground, VarPool& pool) {
  for (std::size_t i = 0; i < ground.size(); ++i)
    if (!compatible(c.inputs[i], ground[i])) return false;
  Store s = c.store;
  for (std::size_t i = 0; i < ground.size(); ++i)
    if (!s.unify(skel[i], ground[i])) return false;
  return check_sat(s, skel, pool).verdict == SatVerdict::Sat;
}

void completeness() {
  auto t0 = Clock::now();
  const std::vector<Term> u3 = symtest::universe(3), u2 = symtest::universe(2);
  std::size_t crashing = 0, misses = 0, inputs = 0;
  std::string first_miss;
  for (const auto& ff : symtest::fixture_functions()) {
    FunTable tbl = symtest::load_fixture(ff.file);
    FunLookup fl = lookup_fun(tbl, ff.fun);
    VarPool pool(1);
    Skeleton sk = general_skeleton(fl.params, pool);
    RunOutcome o = run(tbl, ff.fun, kCompletenessBound, sk.inputs, Store{}, pool);
    std::vector<Covered> answers;
    for (RunAnswer& a : o.errors) {
      Covered c{{}, a.branch.store, a.branch.result.name()};
      for (const Term& t : sk.inputs) c.inputs.push_back(a.branch.store.resolve(t));
      answers.push_back(std::move(c));
    }
    // Arity-2 functions take depth <= 2 per argument; see the README.
    const std::vector<Term>& dom = ff.fun.arity == 1 ? u3 : u2;
    std::vector<std::vector<Term>> grid;
    if (ff.fun.arity == 1)
      for (const Term& x : dom) grid.push_back({x});
    else
      for (const Term& x : dom)
        for (const Term& y : dom) grid.push_back({x, y});
    std::size_t last = 0;  // neighbouring inputs tend to hit the same answer
    for (const auto& in : grid) {
      ++inputs;
      ConcreteResult r = concrete_run(tbl, ff.fun, in, kCrashFuel);
      if (!r.is_error()) continue;
      ++crashing;
      bool hit = false;
      for (std::size_t k = 0; k < answers.size() && !hit; ++k) {
        std::size_t j = (last + k) % answers.size();
        if (answers[j].error == r.error && covers(answers[j], sk.inputs, in, pool)) {
          hit = true;
          last = j;
        }
      }
      if (!hit) {
        ++misses;
        if (first_miss.empty()) {
          first_miss = ff.fun.to_string() + "(";
          for (std::size_t i = 0; i < in.size(); ++i) first_miss += (i ? ", " : "") + erlang_value(in[i]);
          first_miss += ") raises " + r.error;
        }
      }
    }
  }
  double dt = since(t0);
  std::ostringstream d;
  d << inputs << " inputs, " << crashing << " crash, " << misses << " missed, " << fmt(dt) << " (limit "
    << kCompletenessSeconds << " s)";
  if (!first_miss.empty()) d << "; first miss " << first_miss;
  report(4, "every crashing ground input is covered by an answer", misses == 0 && dt < kCompletenessSeconds,
         d.str());
}

// ---- 5: constraint soundness ----

void soundness() {
  auto t0 = Clock::now();
  std::mt19937 rng(2024);
  int unsat = 0, sat = 0, unknown = 0, false_unsat = 0, bad_witness = 0;
  for (int i = 0; i < kRandomStores; ++i) {
    VarPool pool(1);
    symtest::RandomProblem p = symtest::random_problem(rng, pool);
    Store s;
    SatResult r;
    if (symtest::apply(s, p))
      r = check_sat(s, p.focus(), pool);
    else
      r.verdict = SatVerdict::Unsat;
    if (r.verdict == SatVerdict::Unsat) {
      ++unsat;
      // One value hole ranges over depth 3, two over depth 2 each.
      int depth = p.value_vars.size() == 1 ? 3 : 2;
      if (symtest::brute_force(p, depth, true)) ++false_unsat;
    } else if (r.verdict == SatVerdict::Sat) {
      ++sat;
      symtest::Assignment a;
      std::size_t k = 0;
      for (const Term& x : p.value_vars) a[x.var_id()] = r.witness[k++];
      for (const auto& [tg, pv] : p.lits) {
        const Term& l = r.witness[k++];
        a[tg.var_id()] = l.kid(0);
        a[pv.var_id()] = l.kid(1);
      }
      for (const auto& c : p.constraints)
        if (!symtest::holds(c, a)) {
          ++bad_witness;
          break;
        }
    } else {
      ++unknown;
    }
  }
  double dt = since(t0);
  std::ostringstream d;
  d << kRandomStores << " stores: " << sat << " sat, " << unsat << " unsat, " << unknown << " unknown; "
    << false_unsat << " false unsat, " << bad_witness << " bad witnesses, " << fmt(dt) << " (limit "
    << kSoundnessSeconds << " s)";
  report(5, "no false unsat on random stores", false_unsat == 0 && bad_witness == 0 && dt < kSoundnessSeconds,
         d.str());
}

// ---- 6: determinism ----

std::string golden_suite() {
  std::string out;
  for (const auto& ff : symtest::fixture_functions()) {
    VerifyOptions o = options(ff.fun, 20);
    o.seed = 0;
    out += render_text(verify_file(symtest::fixture_path(ff.file), o));
  }
  return out;
}

#ifdef SYMERL_CLI_PATH
std::string capture(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  pclose(p);
  return out;
}
#endif

void determinism() {
  std::string a = golden_suite(), b = golden_suite();
  bool same = a == b && !a.empty();
  std::ostringstream d;
  d << "in-process " << a.size() << " bytes " << (a == b ? "identical" : "differ");
#ifdef SYMERL_CLI_PATH
  std::string cmd = "SYMERL_SEED=0 " + std::string(SYMERL_CLI_PATH) + " verify " +
                    symtest::fixture_path("sum_list.cerl-min") + " --fun sum/1 --bound 20 --format text 2>/dev/null";
  std::string c1 = capture(cmd), c2 = capture(cmd);
  same = same && c1 == c2 && !c1.empty();
  d << ", cli " << c1.size() << " bytes " << (c1 == c2 ? "identical" : "differ");
#endif
  report(6, "two runs with SYMERL_SEED=0 are byte-identical", same, d.str());
}

// ---- 7: round trip ----

void round_trip() {
  std::mt19937 rng(7);
  int ok = 0, catchall = 0;
  for (int i = 0; i < kRoundTripModules; ++i) {
    SourceModule m = symtest::random_module(rng, i);
    ParseResult pr = parse_module(pretty_print(m));
    if (pr.ok() && !has_errors(pr.diagnostics) && *pr.module == m) ++ok;
    TranslateResult tr = translate_module(m);
    if (tr.table && cases_have_catchall(*tr.table)) ++catchall;
  }
  std::ostringstream d;
  d << ok << "/" << kRoundTripModules << " modules round-trip, " << catchall << "/" << kRoundTripModules
    << " pass the catch-all check";
  report(7, "parse after pretty is the identity", ok == kRoundTripModules && catchall == kRoundTripModules, d.str());
}

}  // namespace

int main() {
  std::vector<std::pair<int, std::function<void()>>> all = {
      {1, golden}, {2, certification}, {3, confirmation}, {4, completeness},
      {5, soundness}, {6, determinism}, {7, round_trip},
  };
  for (auto& [n, f] : all) {
    try {
      f();
    } catch (const std::exception& e) {
      report(n, "criterion raised", false, e.what());
    }
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
