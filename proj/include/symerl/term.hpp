#pragma once

// Symbolic runtime values.
//
// A value is a tree of literal / list cell / tuple nodes whose leaves may be
// logic variables. Literals are two-slot nodes `lit(Tag, Payload)` so that the
// tag and the payload can each be symbolic independently, which is what lets
// an answer read `lit(Type,_V)` with constraints on `Type` only.

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace symerl {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class TypeTag : std::uint8_t { Atom = 0, Int = 1, Float = 2, List = 3 };

inline constexpr std::uint8_t kAllTags = 0x0F;
inline constexpr std::uint8_t kNumericTags = 0x06;

constexpr std::uint8_t tag_bit(TypeTag t) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(t)); }
std::string_view tag_name(TypeTag t);
inline constexpr TypeTag kTagOrder[] = {TypeTag::Atom, TypeTag::Int, TypeTag::Float, TypeTag::List};

using VarId = std::uint64_t;

// Value variables range over Erlang values, tag variables over TypeTag, and
// payload variables over the payload domain selected by their literal's tag.
enum class VarSort : std::uint8_t { Value, Tag, Payload };

enum class TermKind : std::uint8_t {
  Var,
  TagConst,
  AtomConst,
  IntConst,
  FloatConst,
  NilConst,
  Lit,
  Cons,
  Tuple,
  Error,
};

class Term;

struct TermNode;

class Term {
 public:
  Term();  // the atom 'undefined'; only used as a placeholder

  static Term var(VarId id, VarSort sort, std::string hint);
  static Term tag(TypeTag t);
  static Term atom_payload(std::string name);
  static Term int_payload(Integer v);
  static Term float_payload(Rational v);
  static Term nil_payload();
  static Term lit(Term tag, Term payload);
  static Term cons(Term head, Term tail);
  static Term tuple(std::vector<Term> elems);
  static Term error(std::string name);

  // Ground Erlang literals.
  static Term atom(std::string name) { return lit(tag(TypeTag::Atom), atom_payload(std::move(name))); }
  static Term integer(Integer v) { return lit(tag(TypeTag::Int), int_payload(std::move(v))); }
  static Term floating(Rational v) { return lit(tag(TypeTag::Float), float_payload(std::move(v))); }
  static Term nil() { return lit(tag(TypeTag::List), nil_payload()); }
  static Term boolean(bool b) { return atom(b ? "true" : "false"); }
  // Proper list of the given elements.
  static Term list(const std::vector<Term>& elems, Term tail = nil());

  TermKind kind() const;
  bool is_var() const { return kind() == TermKind::Var; }

  VarId var_id() const;
  VarSort var_sort() const;
  const std::string& hint() const;  // var hint
  TypeTag tag_value() const;
  const std::string& name() const;  // atom payload or error name
  const Integer& int_value() const;
  const Rational& float_value() const;

  // Lit: [tag, payload]; Cons: [head, tail]; Tuple: elements.
  const std::vector<Term>& kids() const;
  const Term& kid(std::size_t i) const { return kids()[i]; }
  std::size_t arity() const { return kids().size(); }

  // Node identity; equal nodes are equal terms, the converse need not hold.
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

  // Debug rendering in the lit/cons/tuple notation. Variables print as
  // `_<hint>#<id>`.
  std::string to_string() const;

 private:
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  TermKind kind = TermKind::AtomConst;
  VarId id = 0;
  VarSort sort = VarSort::Value;
  TypeTag tag = TypeTag::Atom;
  std::string text;
  Integer ival;
  Rational fval;
  std::vector<Term> kids;
};

// No Var node anywhere (tag and payload variables included).
bool term_is_ground(const Term& t);

// Whether `needle` occurs in `t` (no substitution applied).
bool term_contains_var(const Term& t, VarId needle);

// Collects variable ids in first-occurrence order.
void collect_vars(const Term& t, std::vector<VarId>& out);

// Structural depth; leaves (literals, vars, error) count 1.
int term_depth(const Term& t);

// `t` is exactly the ground atom `name`.
bool is_atom(const Term& t, std::string_view name);
bool is_true(const Term& t);

// Base-10 integer with optional sign; leading zeros do not mean octal.
// Throws std::invalid_argument on anything else.
Integer parse_decimal(std::string_view text);

// Decimal rendering of an exact rational; always contains a decimal point.
std::string format_decimal(const Rational& r);

// Prolog/Erlang-style atom quoting: bare when [a-z][A-Za-z0-9_@]*.
std::string quote_atom_if_needed(std::string_view name);
std::string quote_atom(std::string_view name);

// Fresh variable source. Ids increase monotonically and are never reused; safe
// to share across threads.
class VarPool {
 public:
  explicit VarPool(VarId first = 0) : next_(first) {}
  VarPool(const VarPool&) = delete;
  VarPool& operator=(const VarPool&) = delete;

  Term fresh(std::string hint, VarSort sort = VarSort::Value) {
    return Term::var(next_.fetch_add(1, std::memory_order_relaxed), sort, std::move(hint));
  }
  VarId peek() const { return next_.load(std::memory_order_relaxed); }

 private:
  std::atomic<VarId> next_;
};

}  // namespace symerl
