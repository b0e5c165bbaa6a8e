#include "symerl/translator.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace symerl {

namespace {

const std::set<std::pair<std::string, std::size_t>> kBuiltins = {
    {"+", 2},   {"-", 2},   {"*", 2},   {"div", 2}, {"rem", 2},  {"-", 1},   {"+", 1},
    {"<", 2},   {"=<", 2},  {">", 2},   {">=", 2},  {"==", 2},   {"/=", 2},  {"=:=", 2},
    {"=/=", 2}, {"and", 2}, {"or", 2},  {"not", 1}, {"is_integer", 1}, {"is_float", 1},
    {"is_atom", 1}, {"is_list", 1}, {"is_tuple", 1}, {"is_number", 1},
};

// Highest N among variables named '@cN', or -1.
void scan_at_c(const std::string& v, int& hi) {
  if (v.size() < 3 || v[0] != '@' || v[1] != 'c') return;
  int n = 0;
  for (std::size_t i = 2; i < v.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(v[i]))) return;
    if (n > 100000000) return;
    n = n * 10 + (v[i] - '0');
  }
  hi = std::max(hi, n);
}

void scan_pattern(const Pattern& p, int& hi) {
  if (p.kind == Pattern::Kind::Var) scan_at_c(p.name, hi);
  for (const Pattern& e : p.elems) scan_pattern(e, hi);
}

void scan_expr(const Expr& e, int& hi) {
  if (e.kind == Expr::Kind::Var) scan_at_c(e.name, hi);
  for (const auto& v : e.vars) scan_at_c(v, hi);
  for (const Expr& a : e.args) scan_expr(a, hi);
  for (const Clause& c : e.clauses) {
    for (const Pattern& p : c.pats) scan_pattern(p, hi);
    scan_expr(c.guard, hi);
    scan_expr(c.body, hi);
  }
}

class Translator {
 public:
  Translator(const SourceModule& m, std::vector<Diagnostic>& diags) : m_(m), diags_(diags) {
    for (const FunDef& fd : m.functions) defined_.insert(fd.fname);
  }

  FunDef function(const FunDef& src, SourcePos pos) {
    pos_ = pos;
    where_ = src.fname.to_string();
    next_fresh_ = -1;
    for (const auto& p : src.params) scan_at_c(p, next_fresh_);
    scan_expr(src.body, next_fresh_);
    ++next_fresh_;

    FunDef out;
    out.fname = src.fname;
    out.params = src.params;
    if (src.params.size() != src.fname.arity)
      error("function " + where_ + " declares " + std::to_string(src.params.size()) + " parameter(s)");
    std::set<std::string> uniq(src.params.begin(), src.params.end());
    if (uniq.size() != src.params.size()) error("duplicate parameter in " + where_);
    std::vector<std::string> scope(src.params.begin(), src.params.end());
    out.body = expr(src.body, scope, false);
    return out;
  }

 private:
  void error(std::string msg) {
    diags_.push_back({Diagnostic::Severity::Error, pos_.line, pos_.column, std::move(msg)});
  }

  bool in_scope(const std::vector<std::string>& scope, const std::string& v) const {
    return std::find(scope.begin(), scope.end(), v) != scope.end();
  }

  Expr expr(const Expr& e, std::vector<std::string>& scope, bool in_guard) {
    switch (e.kind) {
      case Expr::Kind::Var:
        if (!in_scope(scope, e.name)) error("unbound variable " + e.name + " in " + where_);
        return e;
      case Expr::Kind::Lit: return e;
      case Expr::Kind::Cons:
      case Expr::Kind::Tuple: {
        Expr out = e;
        for (auto& a : out.args) a = expr(a, scope, in_guard);
        return out;
      }
      case Expr::Kind::Let: {
        if (in_guard) error("let is not allowed in guards (" + where_ + ")");
        if (e.vars.size() != 1)
          error("let binds " + std::to_string(e.vars.size()) + " variables but its value has arity 1 (" + where_ +
                ")");
        Expr out = e;
        out.args[0] = expr(e.args[0], scope, in_guard);
        for (const auto& v : e.vars) scope.push_back(v);
        out.args[1] = expr(e.args[1], scope, in_guard);
        scope.resize(scope.size() - e.vars.size());
        return out;
      }
      case Expr::Kind::Case: {
        if (in_guard) error("case is not allowed in guards (" + where_ + ")");
        Expr out = e;
        out.args[0] = expr(e.args[0], scope, in_guard);
        for (Clause& c : out.clauses) {
          if (c.pats.size() != 1) error("case clause must have exactly one pattern (" + where_ + ")");
          std::vector<std::string> bound;
          for (const Pattern& p : c.pats) pattern_vars(p, bound);
          std::erase(bound, std::string("_"));
          std::set<std::string> uniq(bound.begin(), bound.end());
          if (uniq.size() != bound.size()) error("non-linear pattern in " + where_);
          for (const auto& v : bound) scope.push_back(v);
          c.guard = expr(c.guard, scope, true);
          c.body = expr(c.body, scope, in_guard);
          scope.resize(scope.size() - bound.size());
        }
        std::string fresh = "@c" + std::to_string(next_fresh_++);
        return insert_catchall(std::move(out), fresh);
      }
      case Expr::Kind::Apply: {
        if (in_guard) error("apply is not allowed in guards (" + where_ + ")");
        if (e.args.size() != e.fname.arity)
          error("apply of " + e.fname.to_string() + " with " + std::to_string(e.args.size()) + " argument(s)");
        if (!defined_.count(e.fname)) error("unresolved function " + e.fname.to_string());
        Expr out = e;
        for (auto& a : out.args) a = expr(a, scope, in_guard);
        return out;
      }
      case Expr::Kind::Call: {
        if (e.module != "erlang")
          error("call to module '" + e.module + "' is not supported; only 'erlang' builtins are");
        else if (!is_supported_builtin(e.module, e.name, e.args.size()))
          error("unsupported builtin erlang:" + e.name + "/" + std::to_string(e.args.size()));
        Expr out = e;
        for (auto& a : out.args) a = expr(a, scope, in_guard);
        return out;
      }
      case Expr::Kind::PrimOp: {
        if (in_guard) error("primop is not allowed in guards (" + where_ + ")");
        if (e.name != "match_fail") error("unsupported primop '" + e.name + "'");
        Expr out = e;
        for (auto& a : out.args) a = expr(a, scope, in_guard);
        return out;
      }
      case Expr::Kind::Try: {
        if (in_guard) error("try is not allowed in guards (" + where_ + ")");
        Expr out = e;
        out.args[0] = expr(e.args[0], scope, in_guard);
        scope.push_back(e.vars[0]);
        out.args[1] = expr(e.args[1], scope, in_guard);
        scope.back() = e.vars[1];
        out.args[2] = expr(e.args[2], scope, in_guard);
        scope.pop_back();
        return out;
      }
    }
    return e;
  }

  const SourceModule& m_;
  std::vector<Diagnostic>& diags_;
  std::set<FunName> defined_;
  SourcePos pos_;
  std::string where_;
  int next_fresh_ = 0;
};

bool case_catchalls(const Expr& e) {
  if (e.kind == Expr::Kind::Case) {
    if (e.clauses.empty() || !is_catchall_clause(e.clauses.back())) return false;
  }
  for (const Expr& a : e.args)
    if (!case_catchalls(a)) return false;
  for (const Clause& c : e.clauses)
    if (!case_catchalls(c.guard) || !case_catchalls(c.body)) return false;
  return true;
}

// ---- fact dump ----

void fact_term(std::ostringstream& os, const Term& lit) {
  const Term& tag = lit.kid(0);
  const Term& pl = lit.kid(1);
  os << "lit(" << tag_name(tag.tag_value()) << ',';
  switch (pl.kind()) {
    case TermKind::AtomConst: os << quote_atom(pl.name()); break;
    case TermKind::IntConst: os << pl.int_value(); break;
    case TermKind::FloatConst: os << format_decimal(pl.float_value()); break;
    case TermKind::NilConst: os << "nil"; break;
    default: os << pl.to_string(); break;
  }
  os << ')';
}

void fact_var(std::ostringstream& os, const std::string& v) { os << "var(" << quote_atom(v) << ')'; }

void fact_pattern(std::ostringstream& os, const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::Var: fact_var(os, p.name); break;
    case Pattern::Kind::Lit: fact_term(os, p.lit); break;
    case Pattern::Kind::Cons:
      os << "cons(";
      fact_pattern(os, p.elems[0]);
      os << ',';
      fact_pattern(os, p.elems[1]);
      os << ')';
      break;
    case Pattern::Kind::Tuple:
      os << "tuple([";
      for (std::size_t i = 0; i < p.elems.size(); ++i) {
        if (i) os << ',';
        fact_pattern(os, p.elems[i]);
      }
      os << "])";
      break;
  }
}

void fact_expr(std::ostringstream& os, const Expr& e);

void fact_list(std::ostringstream& os, const std::vector<Expr>& es) {
  os << '[';
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (i) os << ',';
    fact_expr(os, es[i]);
  }
  os << ']';
}

void fact_expr(std::ostringstream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Var: fact_var(os, e.name); break;
    case Expr::Kind::Lit: fact_term(os, e.lit); break;
    case Expr::Kind::Cons:
      os << "cons(";
      fact_expr(os, e.args[0]);
      os << ',';
      fact_expr(os, e.args[1]);
      os << ')';
      break;
    case Expr::Kind::Tuple:
      os << "tuple(";
      fact_list(os, e.args);
      os << ')';
      break;
    case Expr::Kind::Let:
      os << "let([";
      for (std::size_t i = 0; i < e.vars.size(); ++i) {
        if (i) os << ',';
        fact_var(os, e.vars[i]);
      }
      os << "],";
      fact_expr(os, e.args[0]);
      os << ',';
      fact_expr(os, e.args[1]);
      os << ')';
      break;
    case Expr::Kind::Case:
      os << "case(";
      fact_expr(os, e.args[0]);
      os << ",[";
      for (std::size_t i = 0; i < e.clauses.size(); ++i) {
        const Clause& c = e.clauses[i];
        if (i) os << ',';
        os << "clause([";
        for (std::size_t j = 0; j < c.pats.size(); ++j) {
          if (j) os << ',';
          fact_pattern(os, c.pats[j]);
        }
        os << "],";
        fact_expr(os, c.guard);
        os << ',';
        fact_expr(os, c.body);
        os << ')';
      }
      os << "])";
      break;
    case Expr::Kind::Apply:
      os << "apply(var(" << quote_atom(e.fname.name) << ',' << e.fname.arity << "),";
      fact_list(os, e.args);
      os << ')';
      break;
    case Expr::Kind::Call:
      os << "call(lit(atom," << quote_atom(e.module) << "),lit(atom," << quote_atom(e.name) << "),";
      fact_list(os, e.args);
      os << ')';
      break;
    case Expr::Kind::PrimOp:
      os << "primop(lit(atom," << quote_atom(e.name) << "),";
      fact_list(os, e.args);
      os << ')';
      break;
    case Expr::Kind::Try:
      os << "try(";
      fact_expr(os, e.args[0]);
      os << ",[";
      fact_var(os, e.vars[0]);
      os << "],";
      fact_expr(os, e.args[1]);
      os << ",[";
      fact_var(os, e.vars[1]);
      os << "],";
      fact_expr(os, e.args[2]);
      os << ')';
      break;
  }
}

}  // namespace

bool is_supported_builtin(const std::string& module, const std::string& name, std::size_t arity) {
  return module == "erlang" && kBuiltins.count({name, arity}) > 0;
}

Expr insert_catchall(Expr case_expr, const std::string& fresh_var) {
  Clause c;
  c.pats.push_back(Pattern::var(fresh_var));
  c.guard = Expr::literal(Term::atom("true"));
  c.body = Expr::primop("match_fail", {Expr::tuple({Expr::literal(Term::atom("case_clause")), Expr::var(fresh_var)})});
  case_expr.clauses.push_back(std::move(c));
  return case_expr;
}

Expr insert_catchall(Expr case_expr) {
  int hi = -1;
  scan_expr(case_expr, hi);
  std::string fresh = "@c" + std::to_string(hi + 1);
  return insert_catchall(std::move(case_expr), fresh);
}

bool is_catchall_clause(const Clause& c) {
  return c.pats.size() == 1 && c.pats[0].kind == Pattern::Kind::Var && c.guard.kind == Expr::Kind::Lit &&
         is_true(c.guard.lit) && c.body.kind == Expr::Kind::PrimOp && c.body.name == "match_fail";
}

bool cases_have_catchall(const FunTable& t) {
  for (const auto& [name, fd] : t.functions)
    if (!case_catchalls(fd.body)) return false;
  return true;
}

TranslateResult translate_module(const SourceModule& m) {
  TranslateResult out;
  FunTable table;
  table.module = m.name;
  Translator tr(m, out.diagnostics);
  for (std::size_t i = 0; i < m.functions.size(); ++i) {
    const FunDef& src = m.functions[i];
    SourcePos pos = i < m.positions.size() ? m.positions[i] : SourcePos{};
    if (table.functions.count(src.fname)) {
      out.diagnostics.push_back(
          {Diagnostic::Severity::Error, pos.line, pos.column, "duplicate definition of function " + src.fname.to_string()});
      continue;
    }
    table.functions.emplace(src.fname, tr.function(src, pos));
    table.order.push_back(src.fname);
  }
  if (!has_errors(out.diagnostics)) out.table = std::move(table);
  return out;
}

FunLookup lookup_fun(const FunTable& t, const FunName& f) {
  const FunDef* fd = t.find(f);
  if (!fd) throw FunctionNotFound(f);
  return FunLookup{fd->params, fd->body};
}

std::string dump_facts(const FunTable& t) {
  std::ostringstream os;
  for (const FunName& f : t.order) {
    const FunDef& fd = t.functions.at(f);
    os << "fundef(lit(atom," << quote_atom(t.module) << "),var(" << quote_atom(f.name) << ',' << f.arity << "),fun([";
    for (std::size_t i = 0; i < fd.params.size(); ++i) {
      if (i) os << ',';
      fact_var(os, fd.params[i]);
    }
    os << "],";
    fact_expr(os, fd.body);
    os << ")).\n";
  }
  return os.str();
}

}  // namespace symerl
