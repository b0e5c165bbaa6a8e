#include "symerl/frontend.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace symerl {

std::string Diagnostic::to_string() const {
  std::ostringstream os;
  os << line << ':' << column << ": " << (severity == Severity::Error ? "error" : "warning") << ": " << message;
  return os.str();
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Diagnostic::Severity::Error; });
}

namespace {

enum class Tok { Atom, Var, Int, Float, Punct, Keyword, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // atom name (unquoted), var name, punct, keyword, number text
  int line = 1;
  int column = 1;
};

const std::set<std::string, std::less<>> kKeywords = {
    "module", "fun", "end", "let", "in", "case", "of", "when", "apply", "call", "primop", "try", "catch"};

struct SyntaxError {
  int line;
  int column;
  std::string message;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        // Point at the last character so the position stays inside the text.
        t.line = last_line_;
        t.column = last_col_;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (c == '\'') {
        t.kind = Tok::Atom;
        t.text = quoted();
      } else if (is_lower(c)) {
        std::string id = ident();
        t.kind = kKeywords.count(id) ? Tok::Keyword : Tok::Atom;
        t.text = std::move(id);
      } else if (is_upper(c) || c == '_' || c == '@') {
        t.kind = Tok::Var;
        t.text = ident();
      } else if (is_digit(c) || (c == '-' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
        number(t);
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        t.kind = Tok::Punct;
        t.text = "->";
        advance();
        advance();
      } else if (std::string_view("()[]{}<>,|;=/:").find(c) != std::string_view::npos) {
        t.kind = Tok::Punct;
        t.text = std::string(1, c);
        advance();
      } else {
        throw SyntaxError{line_, col_, describe_bad_char(c)};
      }
      out.push_back(std::move(t));
    }
  }

 private:
  static bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
  static bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_ident(char c) { return is_lower(c) || is_upper(c) || is_digit(c) || c == '_' || c == '@'; }

  static std::string describe_bad_char(char c) {
    auto u = static_cast<unsigned char>(c);
    if (u >= 0x20 && u < 0x7f) return std::string("unexpected character '") + c + "'";
    std::ostringstream os;
    os << "unexpected byte 0x" << std::hex << static_cast<int>(u);
    return os.str();
  }

  void advance() {
    last_line_ = line_;
    last_col_ = col_;
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  std::string ident() {
    std::string s;
    while (pos_ < src_.size() && is_ident(src_[pos_])) {
      s += src_[pos_];
      advance();
    }
    return s;
  }

  std::string quoted() {
    int l = line_, c = col_;
    advance();  // opening quote
    std::string s;
    for (;;) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') throw SyntaxError{l, c, "unterminated quoted atom"};
      char ch = src_[pos_];
      if (ch == '\'') {
        advance();
        return s;
      }
      if (ch == '\\') {
        advance();
        if (pos_ >= src_.size()) throw SyntaxError{l, c, "unterminated quoted atom"};
        ch = src_[pos_];
      }
      s += ch;
      advance();
    }
  }

  void number(Token& t) {
    std::string s;
    if (src_[pos_] == '-') {
      s += '-';
      advance();
    }
    while (pos_ < src_.size() && is_digit(src_[pos_])) {
      s += src_[pos_];
      advance();
    }
    t.kind = Tok::Int;
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' && is_digit(src_[pos_ + 1])) {
      t.kind = Tok::Float;
      s += '.';
      advance();
      while (pos_ < src_.size() && is_digit(src_[pos_])) {
        s += src_[pos_];
        advance();
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t save = pos_;
        int sl = line_, sc = col_, ll = last_line_, lc = last_col_;
        std::string exp = "e";
        advance();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
          exp += src_[pos_];
          advance();
        }
        if (pos_ < src_.size() && is_digit(src_[pos_])) {
          while (pos_ < src_.size() && is_digit(src_[pos_])) {
            exp += src_[pos_];
            advance();
          }
          if (exp.size() > 6) throw SyntaxError{t.line, t.column, "float exponent out of range"};
          s += exp;
        } else {
          pos_ = save;
          line_ = sl;
          col_ = sc;
          last_line_ = ll;
          last_col_ = lc;
        }
      }
    }
    if (pos_ < src_.size() && is_ident(src_[pos_])) throw SyntaxError{line_, col_, "malformed number"};
    t.text = std::move(s);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  int last_line_ = 1, last_col_ = 1;
};

Rational parse_float_text(const std::string& s) {
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '-') {
    neg = true;
    ++i;
  }
  Integer mant = 0;
  int frac_digits = 0;
  bool after_dot = false;
  long exp = 0;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.') {
      after_dot = true;
    } else if (c == 'e' || c == 'E') {
      exp = std::stol(s.substr(i + 1));
      break;
    } else {
      mant = mant * 10 + (c - '0');
      if (after_dot) ++frac_digits;
    }
  }
  exp -= frac_digits;
  Rational r(mant);
  Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(exp < 0 ? -exp : exp));
  if (exp < 0)
    r /= Rational(scale);
  else
    r *= Rational(scale);
  return neg ? Rational(-r) : r;
}

constexpr int kMaxNesting = 200;

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::vector<Diagnostic> diags;

  SourceModule module() {
    SourceModule m;
    expect_keyword("module");
    m.name = expect_atom();
    std::vector<std::pair<FunName, Token>> exports;
    bool explicit_exports = false;
    if (is_punct("[")) {
      explicit_exports = true;
      next();
      if (!is_punct("]")) {
        for (;;) {
          Token at = peek();
          exports.emplace_back(fname(), at);
          if (!is_punct(",")) break;
          next();
        }
      }
      expect_punct("]");
    }
    expect_punct("=");
    std::map<FunName, bool> defined;
    for (;;) {
      Token at = peek();
      FunDef fd = fundef();
      if (defined.count(fd.fname))
        error_at(at, "duplicate definition of function " + fd.fname.to_string());
      defined[fd.fname] = true;
      m.positions.push_back(SourcePos{at.line, at.column});
      m.functions.push_back(std::move(fd));
      if (is_punct(",")) next();
      if (peek().kind != Tok::Atom) break;
    }
    if (is_keyword("end")) next();
    if (peek().kind != Tok::End) fail("expected end of input");
    if (explicit_exports) {
      for (auto& [f, tok] : exports) {
        if (!defined.count(f)) error_at(tok, "export of undefined function " + f.to_string());
        m.exports.push_back(f);
      }
    } else {
      for (const FunDef& fd : m.functions) m.exports.push_back(fd.fname);
    }
    return m;
  }

  std::vector<Pattern> pattern_list() {
    std::vector<Pattern> out;
    if (peek().kind == Tok::End) return out;
    std::set<std::string> seen;
    for (;;) {
      out.push_back(pattern(seen));
      if (!is_punct(",")) break;
      next();
    }
    if (peek().kind != Tok::End) fail("expected ',' or end of input");
    return out;
  }

 private:
  // ---- token helpers ----
  const Token& peek(std::size_t k = 0) const {
    std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool is_keyword(std::string_view kw) const { return peek().kind == Tok::Keyword && peek().text == kw; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError{t.line, t.column, msg + ", found " + found};
  }
  void error_at(const Token& t, std::string msg) {
    diags.push_back({Diagnostic::Severity::Error, t.line, t.column, std::move(msg)});
  }

  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail("expected '" + std::string(p) + "'");
    next();
  }
  void expect_keyword(std::string_view kw) {
    if (!is_keyword(kw)) fail("expected '" + std::string(kw) + "'");
    next();
  }
  std::string expect_atom() {
    if (peek().kind != Tok::Atom) fail("expected atom");
    return next().text;
  }
  Token expect_var() {
    if (peek().kind != Tok::Var) fail("expected variable");
    return next();
  }

  FunName fname() {
    FunName f;
    f.name = expect_atom();
    expect_punct("/");
    if (peek().kind != Tok::Int || peek().text[0] == '-') fail("expected arity");
    Token t = next();
    if (t.text.size() > 6) throw SyntaxError{t.line, t.column, "arity out of range"};
    f.arity = static_cast<unsigned>(std::stoul(t.text));
    return f;
  }

  // ---- scope ----
  void push_scope(const std::string& v) { scope_.push_back(v); }
  void pop_scope(std::size_t n) { scope_.resize(scope_.size() - n); }
  bool in_scope(const std::string& v) const {
    return std::find(scope_.begin(), scope_.end(), v) != scope_.end();
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& pp) : p(pp) {
      if (++p.depth_ > kMaxNesting) p.fail("nesting too deep");
    }
    ~DepthGuard() { --p.depth_; }
  };

  FunDef fundef() {
    FunDef fd;
    fd.fname = fname();
    expect_punct("=");
    expect_keyword("fun");
    expect_punct("(");
    std::vector<Token> ptoks;
    if (!is_punct(")")) {
      for (;;) {
        ptoks.push_back(expect_var());
        if (!is_punct(",")) break;
        next();
      }
    }
    expect_punct(")");
    expect_punct("->");
    for (const Token& t : ptoks) fd.params.push_back(t.text);
    if (fd.params.size() != fd.fname.arity)
      error_at(ptoks.empty() ? peek() : ptoks.front(),
               "function " + fd.fname.to_string() + " declares " + std::to_string(fd.params.size()) +
                   " parameter(s)");
    for (std::size_t i = 0; i < fd.params.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (fd.params[i] == fd.params[j]) error_at(ptoks[i], "duplicate parameter " + fd.params[i]);
    for (const auto& p : fd.params) push_scope(p);
    fd.body = expr();
    pop_scope(fd.params.size());
    expect_keyword("end");
    return fd;
  }

  Term literal_term() {
    Token t = next();
    switch (t.kind) {
      case Tok::Atom: return Term::atom(t.text);
      case Tok::Int: return Term::integer(parse_decimal(t.text));
      case Tok::Float: return Term::floating(parse_float_text(t.text));
      default: throw SyntaxError{t.line, t.column, "expected literal"};
    }
  }

  std::vector<Expr> expr_args() {
    expect_punct("(");
    std::vector<Expr> out;
    if (!is_punct(")")) {
      for (;;) {
        out.push_back(expr());
        if (!is_punct(",")) break;
        next();
      }
    }
    expect_punct(")");
    return out;
  }

  std::vector<Token> var_group() {
    std::vector<Token> out;
    if (is_punct("<")) {
      next();
      if (!is_punct(">")) {
        for (;;) {
          out.push_back(expect_var());
          if (!is_punct(",")) break;
          next();
        }
      }
      expect_punct(">");
    } else {
      out.push_back(expect_var());
    }
    return out;
  }

  Expr expr() {
    DepthGuard guard(*this);
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var: {
        Token v = next();
        if (!in_scope(v.text)) error_at(v, "unbound variable " + v.text);
        return Expr::var(v.text);
      }
      case Tok::Atom:
      case Tok::Int:
      case Tok::Float: return Expr::literal(literal_term());
      case Tok::Punct: {
        if (t.text == "(") {
          next();
          Expr e = expr();
          expect_punct(")");
          return e;
        }
        if (t.text == "[") return list_expr();
        if (t.text == "{") {
          next();
          std::vector<Expr> es;
          if (!is_punct("}")) {
            for (;;) {
              es.push_back(expr());
              if (!is_punct(",")) break;
              next();
            }
          }
          expect_punct("}");
          return Expr::tuple(std::move(es));
        }
        fail("expected expression");
      }
      case Tok::Keyword: {
        if (t.text == "let") return let_expr();
        if (t.text == "case") return case_expr();
        if (t.text == "apply") {
          next();
          FunName f = fname();
          return Expr::apply(std::move(f), expr_args());
        }
        if (t.text == "call") {
          next();
          std::string mod = expect_atom();
          expect_punct(":");
          std::string fn = expect_atom();
          return Expr::call(std::move(mod), std::move(fn), expr_args());
        }
        if (t.text == "primop") {
          next();
          std::string name = expect_atom();
          return Expr::primop(std::move(name), expr_args());
        }
        if (t.text == "try") return try_expr();
        fail("expected expression");
      }
      case Tok::End: fail("expected expression");
    }
    fail("expected expression");
  }

  Expr list_expr() {
    expect_punct("[");
    if (is_punct("]")) {
      next();
      return Expr::literal(Term::nil());
    }
    std::vector<Expr> heads;
    for (;;) {
      heads.push_back(expr());
      if (!is_punct(",")) break;
      next();
    }
    Expr tail = Expr::literal(Term::nil());
    if (is_punct("|")) {
      next();
      tail = expr();
    }
    expect_punct("]");
    for (auto it = heads.rbegin(); it != heads.rend(); ++it) tail = Expr::cons(std::move(*it), std::move(tail));
    return tail;
  }

  Expr let_expr() {
    expect_keyword("let");
    std::vector<Token> vs = var_group();
    if (vs.empty()) fail("let binds no variables");
    expect_punct("=");
    Expr rhs = expr();
    expect_keyword("in");
    std::vector<std::string> names;
    for (const Token& v : vs) names.push_back(v.text);
    for (const auto& n : names) push_scope(n);
    Expr body = expr();
    pop_scope(names.size());
    return Expr::let(std::move(names), std::move(rhs), std::move(body));
  }

  Expr case_expr() {
    expect_keyword("case");
    Expr scrut = expr();
    expect_keyword("of");
    std::vector<Clause> clauses;
    while (!is_keyword("end")) {
      clauses.push_back(clause());
      if (is_punct(";")) next();
    }
    expect_keyword("end");
    return Expr::case_of(std::move(scrut), std::move(clauses));
  }

  Clause clause() {
    Clause c;
    std::set<std::string> seen;
    if (is_punct("<")) {
      next();
      if (!is_punct(">")) {
        for (;;) {
          c.pats.push_back(pattern(seen));
          if (!is_punct(",")) break;
          next();
        }
      }
      expect_punct(">");
    } else {
      c.pats.push_back(pattern(seen));
    }
    std::vector<std::string> bound;
    for (const Pattern& p : c.pats) pattern_vars(p, bound);
    std::erase(bound, std::string("_"));
    for (const auto& v : bound) push_scope(v);
    if (is_keyword("when")) {
      next();
      c.guard = expr();
    } else {
      c.guard = Expr::literal(Term::atom("true"));
    }
    expect_punct("->");
    c.body = expr();
    pop_scope(bound.size());
    return c;
  }

  Pattern pattern(std::set<std::string>& seen) {
    DepthGuard guard(*this);
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var: {
        Token v = next();
        seen.insert(v.text);
        return Pattern::var(v.text);
      }
      case Tok::Atom:
      case Tok::Int:
      case Tok::Float: return Pattern::literal(literal_term());
      case Tok::Punct:
        if (t.text == "[") {
          next();
          if (is_punct("]")) {
            next();
            return Pattern::literal(Term::nil());
          }
          std::vector<Pattern> heads;
          for (;;) {
            heads.push_back(pattern(seen));
            if (!is_punct(",")) break;
            next();
          }
          Pattern tail = Pattern::literal(Term::nil());
          if (is_punct("|")) {
            next();
            tail = pattern(seen);
          }
          expect_punct("]");
          for (auto it = heads.rbegin(); it != heads.rend(); ++it)
            tail = Pattern::cons(std::move(*it), std::move(tail));
          return tail;
        }
        if (t.text == "{") {
          next();
          std::vector<Pattern> es;
          if (!is_punct("}")) {
            for (;;) {
              es.push_back(pattern(seen));
              if (!is_punct(",")) break;
              next();
            }
          }
          expect_punct("}");
          return Pattern::tuple(std::move(es));
        }
        fail("expected pattern");
      default: fail("expected pattern");
    }
  }

  Expr try_expr() {
    expect_keyword("try");
    Expr e1 = expr();
    expect_keyword("of");
    std::vector<Token> ok = var_group();
    if (ok.size() != 1) error_at(ok.empty() ? peek() : ok[1], "try binds exactly one result variable");
    expect_punct("->");
    std::string okv = ok.empty() ? "_" : ok[0].text;
    push_scope(okv);
    Expr e2 = expr();
    pop_scope(1);
    expect_keyword("catch");
    std::vector<Token> cv = var_group();
    if (cv.size() != 1) error_at(cv.empty() ? peek() : cv[1], "catch binds exactly one variable");
    expect_punct("->");
    std::string catchv = cv.empty() ? "_" : cv[0].text;
    push_scope(catchv);
    Expr e3 = expr();
    pop_scope(1);
    return Expr::try_of(std::move(e1), std::move(okv), std::move(e2), std::move(catchv), std::move(e3));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
  int depth_ = 0;
};

// ---- pretty printing ----

void indent(std::ostringstream& os, int n) { os << std::string(static_cast<std::size_t>(n) * 2, ' '); }

void print_expr(std::ostringstream& os, const Expr& e, int ind);

void print_args(std::ostringstream& os, const std::vector<Expr>& args, int ind) {
  os << '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) os << ", ";
    print_expr(os, args[i], ind);
  }
  os << ')';
}

void print_fname(std::ostringstream& os, const FunName& f) { os << quote_atom(f.name) << '/' << f.arity; }

void print_pattern(std::ostringstream& os, const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::Var: os << p.name; break;
    case Pattern::Kind::Lit: os << pretty_literal(p.lit); break;
    case Pattern::Kind::Cons:
      os << '[';
      print_pattern(os, p.elems[0]);
      os << '|';
      print_pattern(os, p.elems[1]);
      os << ']';
      break;
    case Pattern::Kind::Tuple:
      os << '{';
      for (std::size_t i = 0; i < p.elems.size(); ++i) {
        if (i) os << ", ";
        print_pattern(os, p.elems[i]);
      }
      os << '}';
      break;
  }
}

void print_vars(std::ostringstream& os, const std::vector<std::string>& vs) {
  os << '<';
  for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? ", " : "") << vs[i];
  os << '>';
}

void print_expr(std::ostringstream& os, const Expr& e, int ind) {
  switch (e.kind) {
    case Expr::Kind::Var: os << e.name; break;
    case Expr::Kind::Lit: os << pretty_literal(e.lit); break;
    case Expr::Kind::Cons:
      os << '[';
      print_expr(os, e.args[0], ind);
      os << '|';
      print_expr(os, e.args[1], ind);
      os << ']';
      break;
    case Expr::Kind::Tuple:
      os << '{';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        print_expr(os, e.args[i], ind);
      }
      os << '}';
      break;
    case Expr::Kind::Let:
      os << "let ";
      print_vars(os, e.vars);
      os << " =\n";
      indent(os, ind + 1);
      print_expr(os, e.args[0], ind + 1);
      os << '\n';
      indent(os, ind);
      os << "in ";
      print_expr(os, e.args[1], ind);
      break;
    case Expr::Kind::Case:
      os << "case ";
      print_expr(os, e.args[0], ind + 1);
      os << " of\n";
      for (std::size_t i = 0; i < e.clauses.size(); ++i) {
        const Clause& c = e.clauses[i];
        indent(os, ind + 1);
        os << '<';
        for (std::size_t j = 0; j < c.pats.size(); ++j) {
          if (j) os << ", ";
          print_pattern(os, c.pats[j]);
        }
        os << "> when ";
        print_expr(os, c.guard, ind + 2);
        os << " ->\n";
        indent(os, ind + 2);
        print_expr(os, c.body, ind + 2);
        if (i + 1 < e.clauses.size()) os << ';';
        os << '\n';
      }
      indent(os, ind);
      os << "end";
      break;
    case Expr::Kind::Apply:
      os << "apply ";
      print_fname(os, e.fname);
      os << ' ';
      print_args(os, e.args, ind);
      break;
    case Expr::Kind::Call:
      os << "call " << quote_atom(e.module) << ':' << quote_atom(e.name) << ' ';
      print_args(os, e.args, ind);
      break;
    case Expr::Kind::PrimOp:
      os << "primop " << quote_atom(e.name) << ' ';
      print_args(os, e.args, ind);
      break;
    case Expr::Kind::Try:
      os << "try\n";
      indent(os, ind + 1);
      print_expr(os, e.args[0], ind + 1);
      os << '\n';
      indent(os, ind);
      os << "of <" << e.vars[0] << "> ->\n";
      indent(os, ind + 1);
      print_expr(os, e.args[1], ind + 1);
      os << '\n';
      indent(os, ind);
      os << "catch <" << e.vars[1] << "> ->\n";
      indent(os, ind + 1);
      print_expr(os, e.args[2], ind + 1);
      break;
  }
}

}  // namespace

std::string pretty_literal(const Term& t) {
  if (t.kind() != TermKind::Lit) return t.to_string();
  const Term& tag = t.kid(0);
  const Term& pl = t.kid(1);
  if (tag.kind() != TermKind::TagConst) return t.to_string();
  switch (tag.tag_value()) {
    case TypeTag::Atom: return pl.kind() == TermKind::AtomConst ? quote_atom(pl.name()) : t.to_string();
    case TypeTag::Int: {
      if (pl.kind() != TermKind::IntConst) return t.to_string();
      std::ostringstream os;
      os << pl.int_value();
      return os.str();
    }
    case TypeTag::Float: return pl.kind() == TermKind::FloatConst ? format_decimal(pl.float_value()) : t.to_string();
    case TypeTag::List: return "[]";
  }
  return t.to_string();
}

std::string pretty_expr(const Expr& e) {
  std::ostringstream os;
  print_expr(os, e, 0);
  return os.str();
}

std::string pretty_pattern(const Pattern& p) {
  std::ostringstream os;
  print_pattern(os, p);
  return os.str();
}

std::string pretty_print(const SourceModule& m) {
  std::ostringstream os;
  os << "module " << quote_atom(m.name) << " [";
  for (std::size_t i = 0; i < m.exports.size(); ++i) {
    if (i) os << ", ";
    print_fname(os, m.exports[i]);
  }
  os << "] =\n";
  for (std::size_t i = 0; i < m.functions.size(); ++i) {
    const FunDef& fd = m.functions[i];
    indent(os, 1);
    print_fname(os, fd.fname);
    os << " =\n";
    indent(os, 2);
    os << "fun (";
    for (std::size_t j = 0; j < fd.params.size(); ++j) os << (j ? ", " : "") << fd.params[j];
    os << ") ->\n";
    indent(os, 3);
    print_expr(os, fd.body, 3);
    os << '\n';
    indent(os, 2);
    os << "end";
    os << (i + 1 < m.functions.size() ? ",\n" : "\n");
  }
  os << "end\n";
  return os.str();
}

ParseResult parse_module(std::string_view text) {
  ParseResult out;
  try {
    Parser p(Lexer(text).run());
    SourceModule m = p.module();
    out.diagnostics = std::move(p.diags);
    if (!has_errors(out.diagnostics)) out.module = std::move(m);
  } catch (const SyntaxError& e) {
    out.diagnostics.push_back({Diagnostic::Severity::Error, e.line, e.column, e.message});
  }
  return out;
}

PatternListResult parse_patterns(std::string_view text) {
  PatternListResult out;
  try {
    Parser p(Lexer(text).run());
    auto pats = p.pattern_list();
    out.diagnostics = std::move(p.diags);
    if (!has_errors(out.diagnostics)) out.patterns = std::move(pats);
  } catch (const SyntaxError& e) {
    out.diagnostics.push_back({Diagnostic::Severity::Error, e.line, e.column, e.message});
  }
  return out;
}

}  // namespace symerl
