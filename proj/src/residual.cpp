#include "symerl/residual.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace symerl {

namespace {

using Names = std::map<VarId, std::string>;

std::string rational_text(const Rational& r) {
  if (is_integral(r)) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

void render(std::ostringstream& os, const Term& t, const Names& names) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = names.find(t.var_id());
      if (it != names.end())
        os << it->second;
      else
        os << "_G" << t.var_id();
      break;
    }
    case TermKind::TagConst: os << tag_name(t.tag_value()); break;
    case TermKind::AtomConst: os << quote_atom_if_needed(t.name()); break;
    case TermKind::IntConst: os << t.int_value(); break;
    case TermKind::FloatConst: os << format_decimal(t.float_value()); break;
    case TermKind::NilConst: os << "nil"; break;
    case TermKind::Lit:
      os << "lit(";
      render(os, t.kid(0), names);
      os << ',';
      render(os, t.kid(1), names);
      os << ')';
      break;
    case TermKind::Cons:
      os << "cons(";
      render(os, t.kid(0), names);
      os << ',';
      render(os, t.kid(1), names);
      os << ')';
      break;
    case TermKind::Tuple:
      os << "tuple([";
      for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i) os << ',';
        render(os, t.kid(i), names);
      }
      os << "])";
      break;
    case TermKind::Error: os << "error(" << quote_atom_if_needed(t.name()) << ')'; break;
  }
}

std::string render_named(const Term& t, const Names& names) {
  std::ostringstream os;
  render(os, t, names);
  return os.str();
}

std::string base_name(const Term& v) {
  std::string out;
  for (char c : v.hint())
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') out += c;
  while (!out.empty() && (out[0] == '_' || std::isdigit(static_cast<unsigned char>(out[0])))) out.erase(0, 1);
  if (out.empty()) {
    switch (v.var_sort()) {
      case VarSort::Value: return "X";
      case VarSort::Tag: return "Type";
      case VarSort::Payload: return "V";
    }
  }
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

struct Shown {
  std::size_t anchor;  // position of its first variable in the input order
  int kind;            // 0 tag, 1 non-match, 2 arithmetic
  std::int64_t order;
  std::function<std::string(const Names&)> text;
};

void vars_of(const Term& t, std::vector<Term>& out, std::set<VarId>& seen) {
  if (t.is_var()) {
    if (seen.insert(t.var_id()).second) out.push_back(t);
    return;
  }
  for (const Term& k : t.kids()) vars_of(k, out, seen);
}

void count_vars(const Term& t, std::map<VarId, int>& counts) {
  if (t.is_var()) {
    counts[t.var_id()]++;
    return;
  }
  for (const Term& k : t.kids()) count_vars(k, counts);
}

}  // namespace

std::string render_term(const Term& t) { return render_named(t, {}); }

std::string render_lin(const LinCon& c0, const std::vector<std::pair<VarId, std::string>>& names) {
  LinCon c = c0;
  std::string op;
  bool flip = !c.expr.coeffs.empty() && c.expr.coeffs.begin()->second < 0;
  if (flip) c.expr *= -1;
  switch (c.rel) {
    case LinRel::Eq: op = "="; break;
    case LinRel::Ne: op = "=\\="; break;
    case LinRel::Lt: op = flip ? ">" : "<"; break;
    case LinRel::Le: op = flip ? ">=" : "=<"; break;
  }
  auto name_of = [&](VarId v) {
    for (const auto& [id, n] : names)
      if (id == v) return n;
    return "_G" + std::to_string(v);
  };
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, k] : c.expr.coeffs) {
    Rational mag = abs(k);
    if (first) {
      if (k < 0) os << '-';
    } else {
      os << (k < 0 ? " - " : " + ");
    }
    if (mag != 1) os << rational_text(mag) << '*';
    os << name_of(v);
    first = false;
  }
  os << ' ' << op << ' ' << rational_text(-c.expr.constant);
  return os.str();
}

std::string Residual::text(const std::vector<std::string>& extra) const {
  std::vector<std::string> parts = bindings;
  parts.insert(parts.end(), extra.begin(), extra.end());
  parts.insert(parts.end(), constraints.begin(), constraints.end());
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out;
}

Residual residual(const Store& s, const std::vector<ResidualItem>& items) {
  std::vector<std::vector<Term>> resolved;
  std::vector<Term> order;
  std::set<VarId> reach;
  for (const ResidualItem& it : items) {
    resolved.emplace_back();
    for (const Term& t : it.terms) {
      resolved.back().push_back(s.resolve(t));
      vars_of(resolved.back().back(), order, reach);
    }
  }
  std::map<VarId, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i].var_id()] = i;

  std::map<VarId, int> counts;
  for (const auto& ts : resolved)
    for (const Term& t : ts) count_vars(t, counts);

  std::vector<Shown> shown;
  std::vector<Term> locals_in_order;

  // Tag domains.
  for (const Term& v : order) {
    if (v.var_sort() != VarSort::Tag) continue;
    std::uint8_t dom = s.tag_domain(v);
    if (dom == kAllTags) continue;
    for (TypeTag t : kTagOrder) {
      if (dom & tag_bit(t)) continue;
      counts[v.var_id()]++;
      VarId id = v.var_id();
      shown.push_back({pos[id], 0, static_cast<std::int64_t>(t), [id, t](const Names& n) {
                         return "dif(" + n.at(id) + "," + std::string(tag_name(t)) + ")";
                       }});
    }
  }

  // Non-match constraints whose outer variables are all reachable.
  std::set<std::string> nm_keys;
  for (const NotMatch& nm : s.not_matches()) {
    Term t = s.resolve(nm.t), p = s.resolve(nm.pat);
    std::set<VarId> locals(nm.locals.begin(), nm.locals.end());
    std::vector<Term> vs;
    std::set<VarId> seen;
    vars_of(t, vs, seen);
    vars_of(p, vs, seen);
    bool ok = true;
    std::size_t anchor = SIZE_MAX;
    for (const Term& v : vs) {
      if (locals.count(v.var_id())) continue;
      if (!reach.count(v.var_id())) ok = false;
      else anchor = std::min(anchor, pos[v.var_id()]);
    }
    if (!ok || anchor == SIZE_MAX) continue;
    // The same non-match can arise from several paths with different locals.
    Names canon;
    for (const Term& v : vs)
      if (locals.count(v.var_id())) canon.emplace(v.var_id(), "_L" + std::to_string(canon.size()));
    if (!nm_keys.insert(render_named(t, canon) + "|" + render_named(p, canon)).second) continue;
    count_vars(t, counts);
    count_vars(p, counts);
    for (const Term& v : vs)
      if (locals.count(v.var_id())) locals_in_order.push_back(v);
    shown.push_back({anchor, 1, -static_cast<std::int64_t>(nm.seq), [t, p](const Names& n) {
                       return "dif(" + render_named(t, n) + "," + render_named(p, n) + ")";
                     }});
  }

  // Arithmetic projected on reachable payload variables.
  std::set<VarId> keep;
  for (const Term& v : order)
    if (v.var_sort() == VarSort::Payload) keep.insert(v.var_id());
  if (!s.lin().empty() && !keep.empty()) {
    std::vector<LinCon> proj = lin_project(s.lin(), keep, s.limits());
    std::int64_t k = 0;
    for (const LinCon& c : proj) {
      if (c.expr.is_constant()) continue;
      std::size_t anchor = SIZE_MAX;
      for (const auto& [v, coef] : c.expr.coeffs) {
        anchor = std::min(anchor, pos[v]);
        counts[v]++;
      }
      std::vector<VarId> ids;
      for (const auto& [v, coef] : c.expr.coeffs) ids.push_back(v);
      shown.push_back({anchor, 2, k++, [c, ids](const Names& n) {
                         std::vector<std::pair<VarId, std::string>> nn;
                         for (VarId v : ids) nn.emplace_back(v, n.at(v));
                         return render_lin(c, nn);
                       }});
    }
  }

  // Names.
  Names names;
  std::set<std::string> used;
  for (const ResidualItem& it : items) used.insert(it.name);
  auto assign = [&](const Term& v, bool singleton) {
    if (names.count(v.var_id())) return;
    std::string base = (singleton ? "_" : "") + base_name(v);
    std::string name = base;
    for (int i = 1; used.count(name); ++i) name = base + std::to_string(i);
    used.insert(name);
    names[v.var_id()] = name;
  };
  for (const Term& v : order) assign(v, counts[v.var_id()] <= 1);
  for (const Term& v : locals_in_order) assign(v, true);

  Residual out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::vector<std::string> ts;
    for (const Term& t : resolved[i]) ts.push_back(render_named(t, names));
    out.items.push_back(ts);
    std::string b = items[i].name + "=";
    if (items[i].as_list) {
      b += "[";
      for (std::size_t j = 0; j < resolved[i].size(); ++j) {
        if (j) b += ",";
        b += render_named(resolved[i][j], names);
      }
      b += "]";
    } else if (!resolved[i].empty()) {
      b += render_named(resolved[i][0], names);
    }
    out.bindings.push_back(std::move(b));
  }
  std::stable_sort(shown.begin(), shown.end(), [](const Shown& a, const Shown& b) {
    if (a.anchor != b.anchor) return a.anchor < b.anchor;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.order < b.order;
  });
  for (const Shown& sh : shown) out.constraints.push_back(sh.text(names));
  return out;
}

std::string canonical_answer(std::string_view text) {
  std::string out;
  std::map<std::string, std::string> ren;
  int next = 1;
  for (std::size_t i = 0; i < text.size();) {
    char c = text[i];
    if (c == '\'') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '\'') j += (text[j] == '\\') ? 2 : 1;
      j = std::min(j + 1, text.size());
      out.append(text.substr(i, j - i));
      i = j;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    bool word_start = i == 0 || !(std::isalnum(static_cast<unsigned char>(text[i - 1])) || text[i - 1] == '_');
    if (word_start && (std::isupper(static_cast<unsigned char>(c)) || c == '_')) {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      std::string name(text.substr(i, j - i));
      if (name == "_") {
        out += "V" + std::to_string(next++);
      } else {
        auto [it, fresh] = ren.emplace(name, "");
        if (fresh) it->second = "V" + std::to_string(next++);
        out += it->second;
      }
      i = j;
      continue;
    }
    out += c;
    ++i;
  }
  return out;
}

}  // namespace symerl
