#include "symerl/driver.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "symerl/concrete.hpp"
#include "symerl/interpreter.hpp"
#include "symerl/residual.hpp"

namespace symerl {

using json = nlohmann::ordered_json;

std::optional<SkeletonSpec> SkeletonSpec::parse(const std::string& text) {
  SkeletonSpec s;
  if (text == "general") return s;
  if (text.rfind("int-list:", 0) == 0) {
    std::string n = text.substr(9);
    if (n.empty() || n.size() > 6 || n.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    s.kind = Kind::IntList;
    s.max_length = std::stoi(n);
    return s;
  }
  if (text.rfind("term:", 0) == 0) {
    s.kind = Kind::Terms;
    s.patterns = text.substr(5);
    return s;
  }
  return std::nullopt;
}

std::string SkeletonSpec::to_string() const {
  switch (kind) {
    case Kind::General: return "general";
    case Kind::IntList: return "int-list:" + std::to_string(max_length);
    case Kind::Terms: return "term:" + patterns;
  }
  return {};
}

std::vector<Skeleton> int_list_skeletons(int m, VarPool& pool) {
  std::vector<Skeleton> out;
  for (int n = m; n >= 0; --n) {
    std::vector<Term> elems;
    for (int i = 1; i <= n; ++i)
      elems.push_back(Term::lit(Term::tag(TypeTag::Int), pool.fresh("N" + std::to_string(i), VarSort::Payload)));
    out.push_back({"int-list length " + std::to_string(n), {Term::list(elems)}});
  }
  return out;
}

Skeleton general_skeleton(const std::vector<std::string>& params, VarPool& pool) {
  Skeleton s{"general", {}};
  for (const std::string& p : params) s.inputs.push_back(pool.fresh(p));
  return s;
}

namespace {

Term pattern_hole(const Pattern& p, VarPool& pool, std::map<std::string, Term>& named) {
  switch (p.kind) {
    case Pattern::Kind::Var: {
      if (p.name == "_") return pool.fresh("");
      auto it = named.find(p.name);
      if (it == named.end()) it = named.emplace(p.name, pool.fresh(p.name)).first;
      return it->second;
    }
    case Pattern::Kind::Lit: return p.lit;
    case Pattern::Kind::Cons:
      return Term::cons(pattern_hole(p.elems[0], pool, named), pattern_hole(p.elems[1], pool, named));
    case Pattern::Kind::Tuple: {
      std::vector<Term> es;
      for (const Pattern& e : p.elems) es.push_back(pattern_hole(e, pool, named));
      return Term::tuple(std::move(es));
    }
  }
  return {};
}

Diagnostic error_diag(std::string msg) {
  Diagnostic d;
  d.message = std::move(msg);
  return d;
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

std::string call_text(const FunName& f, const std::vector<Term>& args) {
  std::vector<std::string> as;
  for (const Term& a : args) as.push_back(erlang_value(a));
  return quote_atom_if_needed(f.name) + "(" + join(as, ", ") + ")";
}

bool reproduces(const FunTable& tbl, const FunName& f, const std::vector<Term>& w, int fuel, const std::string& err) {
  for (const Term& t : w)
    if (!term_is_ground(t)) return false;
  ConcreteResult r = concrete_run(tbl, f, w, fuel);
  return r.is_error() && r.error == err;
}

Answer make_answer(const FunTable& tbl, const VerifyOptions& o, const Skeleton& sk, const RunAnswer& a) {
  const Store& st = a.branch.store;
  Residual res = residual(st, {{"In", sk.inputs, true}});
  Answer ans;
  ans.error = a.branch.result.name();
  ans.input = res.items.at(0);
  ans.constraints = res.constraints;

  std::vector<std::vector<Term>> candidates;
  if (a.sat.verdict == SatVerdict::Sat) candidates.push_back(a.sat.witness);
  std::vector<Term> fallback;
  for (const Term& t : sk.inputs) fallback.push_back(default_ground(st, st.resolve(t)));
  candidates.push_back(std::move(fallback));

  for (const auto& w : candidates) {
    if (reproduces(tbl, o.fun, w, o.bound, ans.error)) {
      ans.witness = w;
      ans.status = Answer::Status::Confirmed;
      return ans;
    }
  }
  return ans;
}

}  // namespace

Skeleton pattern_skeleton(const std::vector<Pattern>& pats, VarPool& pool) {
  Skeleton s{"term", {}};
  std::map<std::string, Term> named;
  for (const Pattern& p : pats) s.inputs.push_back(pattern_hole(p, pool, named));
  return s;
}

std::string Answer::text() const {
  std::vector<std::string> parts{"In=[" + join(input, ",") + "]", "Err=" + quote_atom_if_needed(error)};
  parts.insert(parts.end(), constraints.begin(), constraints.end());
  return join(parts, ", ");
}

Verdict verify_table(const FunTable& tbl, const VerifyOptions& o) {
  auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  v.bound = o.bound;
  v.fun = o.fun;
  auto finish = [&] {
    v.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.certified = v.diagnostics.empty() && v.answers.empty() && !v.bound_exhausted;
    return v;
  };

  const FunDef* fd = tbl.find(o.fun);
  if (!fd) {
    v.diagnostics.push_back(error_diag("function " + o.fun.to_string() + " is not defined in module '" + tbl.module + "'"));
    return finish();
  }
  if (o.bound < 0) v.diagnostics.push_back(error_diag("the bound must be non-negative"));
  if (o.max_answers && *o.max_answers == 0) v.diagnostics.push_back(error_diag("--max-answers must be positive"));

  VarPool pool(o.seed);
  std::vector<Skeleton> sks;
  switch (o.skeleton.kind) {
    case SkeletonSpec::Kind::General: sks.push_back(general_skeleton(fd->params, pool)); break;
    case SkeletonSpec::Kind::IntList:
      if (fd->params.size() != 1)
        v.diagnostics.push_back(error_diag("int-list skeletons need a function of arity 1, " + o.fun.to_string() +
                                           " has arity " + std::to_string(fd->params.size())));
      else
        sks = int_list_skeletons(o.skeleton.max_length, pool);
      break;
    case SkeletonSpec::Kind::Terms: {
      PatternListResult pr = parse_patterns(o.skeleton.patterns);
      for (Diagnostic d : pr.diagnostics) {
        d.message = "in --skeleton term: " + d.message;
        v.diagnostics.push_back(d);
      }
      if (pr.patterns && pr.patterns->size() != fd->params.size())
        v.diagnostics.push_back(error_diag("--skeleton term: gives " + std::to_string(pr.patterns->size()) +
                                           " input(s), " + o.fun.to_string() + " expects " +
                                           std::to_string(fd->params.size())));
      if (pr.patterns && !has_errors(v.diagnostics)) sks.push_back(pattern_skeleton(*pr.patterns, pool));
      break;
    }
  }
  if (has_errors(v.diagnostics)) return finish();

  std::set<std::string> seen;
  for (const Skeleton& sk : sks) {
    SkeletonReport rep;
    rep.label = sk.label;
    RunOptions ro;
    ro.sat = o.sat;
    ro.on_error = [&](RunAnswer&& a) {
      Answer ans = make_answer(tbl, o, sk, a);
      if (!seen.insert(canonical_answer(ans.text())).second) return true;
      v.answers.push_back(std::move(ans));
      ++rep.answers;
      return !(o.max_answers && v.answers.size() >= *o.max_answers);
    };
    RunOutcome out = run(tbl, o.fun, o.bound, sk.inputs, Store(o.limits), pool, ro);
    rep.bound_exhausted = out.bound_exhausted;
    rep.stopped = out.stopped;
    v.bound_exhausted = v.bound_exhausted || out.bound_exhausted;
    v.skeletons.push_back(rep);
    if (out.stopped) break;
  }
  return finish();
}

Verdict verify_source(const std::string& source, const VerifyOptions& o) {
  Verdict v;
  v.bound = o.bound;
  v.fun = o.fun;
  ParseResult pr = parse_module(source);
  v.diagnostics = pr.diagnostics;
  if (!pr.ok() || has_errors(pr.diagnostics)) return v;
  TranslateResult tr = translate_module(*pr.module);
  v.diagnostics.insert(v.diagnostics.end(), tr.diagnostics.begin(), tr.diagnostics.end());
  if (!tr.table || has_errors(tr.diagnostics)) return v;
  std::vector<Diagnostic> warnings = v.diagnostics;
  v = verify_table(*tr.table, o);
  v.diagnostics.insert(v.diagnostics.begin(), warnings.begin(), warnings.end());
  return v;
}

Verdict verify_file(const std::string& path, const VerifyOptions& o) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    Verdict v;
    v.bound = o.bound;
    v.fun = o.fun;
    v.diagnostics.push_back(error_diag("cannot read " + path));
    return v;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return verify_source(ss.str(), o);
}

std::string erlang_value(const Term& t) {
  switch (t.kind()) {
    case TermKind::Lit:
      if (t.kid(0).kind() == TermKind::TagConst && term_is_ground(t)) {
        switch (t.kid(0).tag_value()) {
          case TypeTag::Atom: return quote_atom_if_needed(t.kid(1).name());
          case TypeTag::Int: return t.kid(1).int_value().str();
          case TypeTag::Float: return format_decimal(t.kid(1).float_value());
          case TypeTag::List: return "[]";
        }
      }
      return render_term(t);
    case TermKind::Cons: {
      std::string out = "[" + erlang_value(t.kid(0));
      Term rest = t.kid(1);
      while (rest.kind() == TermKind::Cons) {
        out += "," + erlang_value(rest.kid(0));
        rest = rest.kid(1);
      }
      if (!(rest.kind() == TermKind::Lit && rest.kid(0).kind() == TermKind::TagConst &&
            rest.kid(0).tag_value() == TypeTag::List))
        out += "|" + erlang_value(rest);
      return out + "]";
    }
    case TermKind::Tuple: {
      std::vector<std::string> es;
      for (const Term& k : t.kids()) es.push_back(erlang_value(k));
      return "{" + join(es, ",") + "}";
    }
    case TermKind::Error: return "error(" + quote_atom_if_needed(t.name()) + ")";
    default: return render_term(t);
  }
}

namespace {

// Witness terms in JSON use the lit notation with exact floats.
std::string witness_text(const Term& t) {
  switch (t.kind()) {
    case TermKind::FloatConst: {
      const Rational& r = t.float_value();
      std::string d = format_decimal(r);
      if (parse_ground_term("lit(float," + d + ")").kid(1).float_value() == r) return d;
      return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
    }
    case TermKind::Lit: return "lit(" + witness_text(t.kid(0)) + "," + witness_text(t.kid(1)) + ")";
    case TermKind::Cons: return "cons(" + witness_text(t.kid(0)) + "," + witness_text(t.kid(1)) + ")";
    case TermKind::Tuple: {
      std::vector<std::string> es;
      for (const Term& k : t.kids()) es.push_back(witness_text(k));
      return "tuple([" + join(es, ",") + "])";
    }
    default: return render_term(t);
  }
}

class TermReader {
 public:
  explicit TermReader(const std::string& s) : s_(s) {}

  Term read() {
    Term t = term();
    if (i_ != s_.size()) fail("trailing text");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw std::runtime_error("bad term '" + s_ + "' at " + std::to_string(i_) + ": " + why);
  }
  void expect(char c) {
    if (i_ >= s_.size() || s_[i_] != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  bool peek(char c) const { return i_ < s_.size() && s_[i_] == c; }
  std::string word() {
    std::size_t j = i_;
    while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_' || s_[j] == '@')) ++j;
    std::string w = s_.substr(i_, j - i_);
    i_ = j;
    return w;
  }
  std::string atom() {
    if (!peek('\'')) {
      std::string w = word();
      if (w.empty()) fail("expected an atom");
      return w;
    }
    ++i_;
    std::string out;
    while (i_ < s_.size() && s_[i_] != '\'') {
      if (s_[i_] == '\\') ++i_;
      if (i_ < s_.size()) out += s_[i_++];
    }
    expect('\'');
    return out;
  }
  Rational number() {
    std::size_t j = i_;
    while (j < s_.size() && std::string_view("-0123456789./").find(s_[j]) != std::string_view::npos) ++j;
    std::string n = s_.substr(i_, j - i_);
    i_ = j;
    try {
      auto slash = n.find('/');
      if (slash != std::string::npos) return Rational(parse_decimal(n.substr(0, slash)), parse_decimal(n.substr(slash + 1)));
      auto dot = n.find('.');
      if (dot == std::string::npos) return Rational(parse_decimal(n));
      bool neg = n[0] == '-';
      std::string ip = n.substr(neg ? 1 : 0, dot - (neg ? 1 : 0)), fp = n.substr(dot + 1);
      Integer den = 1;
      for (std::size_t k = 0; k < fp.size(); ++k) den *= 10;
      Rational r(parse_decimal(ip + fp), den);
      return neg ? Rational(-r) : r;
    } catch (const std::exception&) {
      fail("bad number '" + n + "'");
    }
  }
  Term term() {
    std::string head = word();
    if (head == "lit") {
      expect('(');
      std::string tag = word();
      expect(',');
      Term out;
      if (tag == "atom") out = Term::atom(atom());
      else if (tag == "int") out = Term::integer(boost::multiprecision::numerator(number()));
      else if (tag == "float") out = Term::floating(number());
      else if (tag == "list") {
        if (word() != "nil") fail("expected nil");
        out = Term::nil();
      } else {
        fail("unknown tag '" + tag + "'");
      }
      expect(')');
      return out;
    }
    if (head == "cons") {
      expect('(');
      Term h = term();
      expect(',');
      Term t = term();
      expect(')');
      return Term::cons(h, t);
    }
    if (head == "tuple") {
      expect('(');
      expect('[');
      std::vector<Term> es;
      while (!peek(']')) {
        if (!es.empty()) expect(',');
        es.push_back(term());
      }
      expect(']');
      expect(')');
      return Term::tuple(std::move(es));
    }
    fail("unknown constructor '" + head + "'");
  }

  std::string s_;
  std::size_t i_ = 0;
};

}  // namespace

Term parse_ground_term(const std::string& text) { return TermReader(text).read(); }

std::string render_text(const Verdict& v) {
  std::ostringstream os;
  for (const Diagnostic& d : v.diagnostics) os << d.to_string() << '\n';
  if (has_errors(v.diagnostics)) return os.str();
  for (const Answer& a : v.answers) {
    os << a.text() << '\n';
    if (a.status == Answer::Status::Confirmed)
      os << "  % witness: " << call_text(v.fun, *a.witness) << " raises " << quote_atom_if_needed(a.error)
         << " (confirmed)\n";
    else
      os << "  % no witness reproduced this error (unconfirmed)\n";
  }
  if (v.skeletons.size() > 1) {
    for (const SkeletonReport& s : v.skeletons)
      os << "% " << s.label << ": " << s.answers << (s.answers == 1 ? " answer" : " answers")
         << (s.bound_exhausted ? ", cut by the bound" : ", complete") << (s.stopped ? ", stopped early" : "") << '\n';
  }
  if (v.certified) {
    os << "no errors found: correct up to bound " << v.bound << '\n';
  } else if (v.answers.empty()) {
    os << "no errors found, but some paths were cut by bound " << v.bound << ": inconclusive\n";
  } else {
    os << v.answers.size() << (v.answers.size() == 1 ? " answer" : " answers") << " found at bound " << v.bound;
    if (v.bound_exhausted) os << "; some paths were cut by the bound";
    os << '\n';
  }
  return os.str();
}

std::string render_json(const Verdict& v) {
  json j;
  j["function"] = v.fun.to_string();
  j["bound"] = v.bound;
  j["certified"] = v.certified;
  j["bound_exhausted"] = v.bound_exhausted;
  j["elapsed_seconds"] = v.elapsed_seconds;
  j["answers"] = json::array();
  for (const Answer& a : v.answers) {
    json ja;
    ja["error"] = a.error;
    ja["input"] = a.input;
    ja["constraints"] = a.constraints;
    if (a.witness) {
      std::vector<std::string> w;
      for (const Term& t : *a.witness) w.push_back(witness_text(t));
      ja["witness"] = w;
    } else {
      ja["witness"] = nullptr;
    }
    ja["status"] = a.status == Answer::Status::Confirmed ? "confirmed" : "unconfirmed";
    j["answers"].push_back(ja);
  }
  j["skeletons"] = json::array();
  for (const SkeletonReport& s : v.skeletons)
    j["skeletons"].push_back(
        {{"label", s.label}, {"answers", s.answers}, {"bound_exhausted", s.bound_exhausted}, {"stopped", s.stopped}});
  j["diagnostics"] = json::array();
  for (const Diagnostic& d : v.diagnostics)
    j["diagnostics"].push_back({{"severity", d.severity == Diagnostic::Severity::Error ? "error" : "warning"},
                                {"line", d.line},
                                {"column", d.column},
                                {"message", d.message}});
  return j.dump(2) + "\n";
}

Verdict read_json_report(const std::string& text) {
  Verdict v;
  try {
    json j = json::parse(text);
    std::string f = j.at("function").get<std::string>();
    auto slash = f.rfind('/');
    if (slash == std::string::npos) throw std::runtime_error("bad function name " + f);
    v.fun = FunName{f.substr(0, slash), static_cast<unsigned>(std::stoul(f.substr(slash + 1)))};
    v.bound = j.at("bound").get<int>();
    v.certified = j.at("certified").get<bool>();
    v.bound_exhausted = j.at("bound_exhausted").get<bool>();
    v.elapsed_seconds = j.at("elapsed_seconds").get<double>();
    for (const json& ja : j.at("answers")) {
      Answer a;
      a.error = ja.at("error").get<std::string>();
      a.input = ja.at("input").get<std::vector<std::string>>();
      a.constraints = ja.at("constraints").get<std::vector<std::string>>();
      if (!ja.at("witness").is_null()) {
        std::vector<Term> w;
        for (const json& t : ja.at("witness")) w.push_back(parse_ground_term(t.get<std::string>()));
        a.witness = std::move(w);
      }
      std::string st = ja.at("status").get<std::string>();
      if (st != "confirmed" && st != "unconfirmed") throw std::runtime_error("bad status " + st);
      a.status = st == "confirmed" ? Answer::Status::Confirmed : Answer::Status::Unconfirmed;
      v.answers.push_back(std::move(a));
    }
    for (const json& js : j.at("skeletons"))
      v.skeletons.push_back({js.at("label").get<std::string>(), js.at("answers").get<std::size_t>(),
                             js.at("bound_exhausted").get<bool>(), js.at("stopped").get<bool>()});
    for (const json& jd : j.at("diagnostics")) {
      Diagnostic d;
      d.severity = jd.at("severity").get<std::string>() == "error" ? Diagnostic::Severity::Error
                                                                     : Diagnostic::Severity::Warning;
      d.line = jd.at("line").get<int>();
      d.column = jd.at("column").get<int>();
      d.message = jd.at("message").get<std::string>();
      v.diagnostics.push_back(std::move(d));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  }
  return v;
}

int exit_code(const Verdict& v) {
  if (has_errors(v.diagnostics)) return 2;
  if (!v.answers.empty()) return 1;
  return v.certified ? 0 : 3;
}

}  // namespace symerl
