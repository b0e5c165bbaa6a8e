#include "symerl/term.hpp"

#include <sstream>
#include <stdexcept>

namespace symerl {

namespace {

std::shared_ptr<TermNode> make(TermKind k) {
  auto n = std::make_shared<TermNode>();
  n->kind = k;
  return n;
}

const std::shared_ptr<const TermNode>& placeholder() {
  static const std::shared_ptr<const TermNode> p = [] {
    auto n = make(TermKind::AtomConst);
    n->text = "undefined";
    return std::shared_ptr<const TermNode>(n);
  }();
  return p;
}

}  // namespace

std::string_view tag_name(TypeTag t) {
  switch (t) {
    case TypeTag::Atom: return "atom";
    case TypeTag::Int: return "int";
    case TypeTag::Float: return "float";
    case TypeTag::List: return "list";
  }
  return "?";
}

Term::Term() : node_(placeholder()) {}

Term Term::var(VarId id, VarSort sort, std::string hint) {
  auto n = make(TermKind::Var);
  n->id = id;
  n->sort = sort;
  n->text = std::move(hint);
  return Term(std::move(n));
}

Term Term::tag(TypeTag t) {
  static const Term tags[] = {
      [] { auto n = make(TermKind::TagConst); n->tag = TypeTag::Atom; return Term(n); }(),
      [] { auto n = make(TermKind::TagConst); n->tag = TypeTag::Int; return Term(n); }(),
      [] { auto n = make(TermKind::TagConst); n->tag = TypeTag::Float; return Term(n); }(),
      [] { auto n = make(TermKind::TagConst); n->tag = TypeTag::List; return Term(n); }(),
  };
  return tags[static_cast<int>(t)];
}

Term Term::atom_payload(std::string name) {
  auto n = make(TermKind::AtomConst);
  n->text = std::move(name);
  return Term(std::move(n));
}

Term Term::int_payload(Integer v) {
  auto n = make(TermKind::IntConst);
  n->ival = std::move(v);
  return Term(std::move(n));
}

Term Term::float_payload(Rational v) {
  auto n = make(TermKind::FloatConst);
  n->fval = std::move(v);
  return Term(std::move(n));
}

Term Term::nil_payload() {
  static const Term nil(make(TermKind::NilConst));
  return nil;
}

Term Term::lit(Term tag, Term payload) {
  auto n = make(TermKind::Lit);
  n->kids = {std::move(tag), std::move(payload)};
  return Term(std::move(n));
}

Term Term::cons(Term head, Term tail) {
  auto n = make(TermKind::Cons);
  n->kids = {std::move(head), std::move(tail)};
  return Term(std::move(n));
}

Term Term::tuple(std::vector<Term> elems) {
  auto n = make(TermKind::Tuple);
  n->kids = std::move(elems);
  return Term(std::move(n));
}

Term Term::error(std::string name) {
  auto n = make(TermKind::Error);
  n->text = std::move(name);
  return Term(std::move(n));
}

Term Term::list(const std::vector<Term>& elems, Term tail) {
  Term out = std::move(tail);
  for (auto it = elems.rbegin(); it != elems.rend(); ++it) out = cons(*it, out);
  return out;
}

TermKind Term::kind() const { return node_->kind; }
VarId Term::var_id() const { return node_->id; }
VarSort Term::var_sort() const { return node_->sort; }
const std::string& Term::hint() const { return node_->text; }
TypeTag Term::tag_value() const { return node_->tag; }
const std::string& Term::name() const { return node_->text; }
const Integer& Term::int_value() const { return node_->ival; }
const Rational& Term::float_value() const { return node_->fval; }
const std::vector<Term>& Term::kids() const { return node_->kids; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const TermNode& x = *a.node_;
  const TermNode& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case TermKind::Var: return x.id == y.id;
    case TermKind::TagConst: return x.tag == y.tag;
    case TermKind::AtomConst:
    case TermKind::Error: return x.text == y.text;
    case TermKind::IntConst: return x.ival == y.ival;
    case TermKind::FloatConst: return x.fval == y.fval;
    case TermKind::NilConst: return true;
    case TermKind::Lit:
    case TermKind::Cons:
    case TermKind::Tuple: return x.kids == y.kids;
  }
  return false;
}

std::string Term::to_string() const {
  std::ostringstream os;
  const TermNode& n = *node_;
  switch (n.kind) {
    case TermKind::Var: os << '_' << n.text << '#' << n.id; break;
    case TermKind::TagConst: os << tag_name(n.tag); break;
    case TermKind::AtomConst: os << quote_atom_if_needed(n.text); break;
    case TermKind::IntConst: os << n.ival; break;
    case TermKind::FloatConst: os << format_decimal(n.fval); break;
    case TermKind::NilConst: os << "nil"; break;
    case TermKind::Lit: os << "lit(" << n.kids[0].to_string() << ',' << n.kids[1].to_string() << ')'; break;
    case TermKind::Cons: os << "cons(" << n.kids[0].to_string() << ',' << n.kids[1].to_string() << ')'; break;
    case TermKind::Tuple: {
      os << "tuple([";
      for (std::size_t i = 0; i < n.kids.size(); ++i) os << (i ? "," : "") << n.kids[i].to_string();
      os << "])";
      break;
    }
    case TermKind::Error: os << "error(" << quote_atom_if_needed(n.text) << ')'; break;
  }
  return os.str();
}

bool term_is_ground(const Term& t) {
  if (t.is_var()) return false;
  for (const Term& k : t.kids())
    if (!term_is_ground(k)) return false;
  return true;
}

bool term_contains_var(const Term& t, VarId needle) {
  if (t.is_var()) return t.var_id() == needle;
  for (const Term& k : t.kids())
    if (term_contains_var(k, needle)) return true;
  return false;
}

void collect_vars(const Term& t, std::vector<VarId>& out) {
  if (t.is_var()) {
    for (VarId v : out)
      if (v == t.var_id()) return;
    out.push_back(t.var_id());
    return;
  }
  for (const Term& k : t.kids()) collect_vars(k, out);
}

int term_depth(const Term& t) {
  switch (t.kind()) {
    case TermKind::Cons:
    case TermKind::Tuple: {
      int d = 0;
      for (const Term& k : t.kids()) d = std::max(d, term_depth(k));
      return d + 1;
    }
    default: return 1;
  }
}

bool is_atom(const Term& t, std::string_view name) {
  return t.kind() == TermKind::Lit && t.kid(0).kind() == TermKind::TagConst &&
         t.kid(0).tag_value() == TypeTag::Atom && t.kid(1).kind() == TermKind::AtomConst &&
         t.kid(1).name() == name;
}

bool is_true(const Term& t) { return is_atom(t, "true"); }

Integer parse_decimal(std::string_view text) {
  std::size_t i = 0;
  bool neg = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    neg = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw std::invalid_argument("empty integer");
  Integer v = 0;
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') throw std::invalid_argument("bad integer '" + std::string(text) + "'");
    v = v * 10 + (text[i] - '0');
  }
  return neg ? Integer(-v) : v;
}

std::string format_decimal(const Rational& r) {
  Integer num = boost::multiprecision::numerator(r);
  Integer den = boost::multiprecision::denominator(r);
  std::ostringstream os;
  if (num < 0) {
    os << '-';
    num = -num;
  }
  Integer ip = num / den;
  Integer rem = num % den;
  os << ip << '.';
  if (rem == 0) {
    os << '0';
    return os.str();
  }
  // Finite expansions are printed exactly; others are cut at 17 digits.
  for (int i = 0; i < 17 && rem != 0; ++i) {
    rem *= 10;
    os << (rem / den);
    rem %= den;
  }
  return os.str();
}

namespace {

bool bare_atom(std::string_view s) {
  if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@')) return false;
  return true;
}

}  // namespace

std::string quote_atom(std::string_view name) {
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

std::string quote_atom_if_needed(std::string_view name) {
  return bare_atom(name) ? std::string(name) : quote_atom(name);
}

}  // namespace symerl
