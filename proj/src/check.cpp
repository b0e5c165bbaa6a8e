#include "symerl/check.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

namespace symerl {

namespace {

Term rebuild(const Term& t, std::vector<Term> kids) {
  switch (t.kind()) {
    case TermKind::Lit: return Term::lit(kids[0], kids[1]);
    case TermKind::Cons: return Term::cons(kids[0], kids[1]);
    default: return Term::tuple(std::move(kids));
  }
}

bool compound(const Term& t) {
  return t.kind() == TermKind::Lit || t.kind() == TermKind::Cons || t.kind() == TermKind::Tuple;
}

struct OpenVar {
  Term var;
  int depth = 1;
};

class Search {
 public:
  Search(VarPool& pool, const SatOptions& opts, const std::vector<Term>& focus)
      : pool_(pool), opts_(opts), focus_(focus) {}

  SatResult run(const Store& s) {
    SatResult res;
    if (!s.ok()) {
      res.verdict = SatVerdict::Unsat;
      return res;
    }
    collect_atoms(s);
    if (dfs(s)) {
      res.verdict = SatVerdict::Sat;
      res.witness = std::move(*found_);
    } else {
      res.verdict = (cut_ || unknown_) ? SatVerdict::Unknown : SatVerdict::Unsat;
    }
    return res;
  }

 private:
  void scan_atoms(const Term& t) {
    if (t.kind() == TermKind::AtomConst) mentioned_.insert(t.name());
    if (compound(t))
      for (const Term& k : t.kids()) scan_atoms(k);
    if (t.kind() == TermKind::Tuple) max_arity_ = std::max(max_arity_, t.arity());
  }

  void collect_atoms(const Store& s) {
    for (const Term& f : focus_) scan_atoms(s.resolve(f));
    for (const NotMatch& nm : s.not_matches()) {
      scan_atoms(s.resolve(nm.t));
      scan_atoms(s.resolve(nm.pat));
    }
    atoms_ = {"a", "b"};
    for (const auto& a : mentioned_)
      if (a != "a" && a != "b") atoms_.push_back(a);
    for (char c = 'c';; ++c) {
      std::string fresh(1, c);
      if (c > 'z') fresh = "fresh_" + std::to_string(c - 'z');
      if (!mentioned_.count(fresh)) {
        atoms_.push_back(fresh);
        break;
      }
    }
  }

  // Open non-numeric variables, value variables first, then tags, then atom
  // payloads. Numeric payloads are left to the arithmetic phase.
  std::optional<OpenVar> next_open(const Store& s) const {
    std::vector<OpenVar> found;
    std::set<VarId> seen;
    std::function<void(const Term&, const std::set<VarId>*)> walk = [&](const Term& t, const std::set<VarId>* skip) {
      Term d = s.deref(t);
      if (d.is_var()) {
        if ((!skip || !skip->count(d.var_id())) && seen.insert(d.var_id()).second) {
          auto it = depth_.find(d.var_id());
          found.push_back({d, it == depth_.end() ? 1 : it->second});
        }
        return;
      }
      if (compound(d))
        for (const Term& k : d.kids()) walk(k, skip);
    };
    for (const Term& f : focus_) walk(f, nullptr);
    for (const NotMatch& nm : s.not_matches()) {
      std::set<VarId> locals(nm.locals.begin(), nm.locals.end());
      walk(nm.t, &locals);
      walk(nm.pat, &locals);
    }
    for (const NumJoin& j : s.joins()) {
      walk(j.result, nullptr);
      for (const Term& o : j.operands) walk(o, nullptr);
    }
    for (const auto& [v, t] : s.lin_var_terms())
      if (auto it = s.owners().find(v); it != s.owners().end()) walk(it->second.second, nullptr);

    for (VarSort want : {VarSort::Value, VarSort::Tag, VarSort::Payload}) {
      for (const OpenVar& ov : found) {
        if (ov.var.var_sort() != want) continue;
        if (want == VarSort::Payload && numeric_payload(s, ov.var)) continue;
        return ov;
      }
    }
    return std::nullopt;
  }

  static bool numeric_payload(const Store& s, const Term& v) {
    auto it = s.owners().find(v.var_id());
    if (it == s.owners().end()) return s.lin_var_terms().count(v.var_id()) > 0;
    return (s.tag_domain(it->second.second) & ~kNumericTags) == 0;
  }

  // A value variable one level below an invented constructor.
  Term invent(const char* hint, int parent_depth) {
    Term v = pool_.fresh(hint);
    depth_[v.var_id()] = parent_depth + 1;
    return v;
  }

  bool try_bind(const Store& s, const Term& var, const Term& value) {
    Store c = s;
    return c.unify(var, value) && dfs(c);
  }

  bool dfs(const Store& s) {
    if (++nodes_ > opts_.node_limit) {
      unknown_ = true;
      return false;
    }
    auto ov = next_open(s);
    if (!ov) return numeric(s);
    const Term& x = ov->var;
    switch (x.var_sort()) {
      case VarSort::Value: {
        if (try_bind(s, x, Term::lit(pool_.fresh("Type", VarSort::Tag), pool_.fresh("V", VarSort::Payload))))
          return true;
        if (ov->depth >= opts_.witness_depth) {
          cut_ = true;
          return false;
        }
        if (try_bind(s, x, Term::cons(invent("H", ov->depth), invent("T", ov->depth)))) return true;
        // Tuples of an arity no constraint mentions are interchangeable, so
        // one arity beyond the largest mentioned stands for all of them.
        std::size_t top = std::max<std::size_t>(2, max_arity_ + 1);
        for (std::size_t n = 0; n <= top; ++n) {
          std::vector<Term> elems;
          for (std::size_t i = 0; i < n; ++i) elems.push_back(invent("E", ov->depth));
          if (try_bind(s, x, Term::tuple(std::move(elems)))) return true;
        }
        return false;
      }
      case VarSort::Tag:
        for (TypeTag t : kTagOrder)
          if ((s.tag_domain(x) & tag_bit(t)) && try_bind(s, x, Term::tag(t))) return true;
        return false;
      case VarSort::Payload: {
        auto it = s.owners().find(x.var_id());
        Term tg = it == s.owners().end() ? Term::tag(TypeTag::Atom) : s.deref(it->second.second);
        if (tg.kind() == TermKind::TagConst && tg.tag_value() == TypeTag::List)
          return try_bind(s, x, Term::nil_payload());
        for (const std::string& a : atoms_)
          if (try_bind(s, x, Term::atom_payload(a))) return true;
        return false;
      }
    }
    return false;
  }

  // Every remaining constraint is arithmetic or a non-match over numeric
  // payloads; the latter become disjunctions of disequalities.
  bool numeric(const Store& s) {
    std::vector<std::vector<std::pair<Term, Term>>> disj;
    for (const NotMatch& nm : s.not_matches()) {
      auto mb = s.match_bindings(nm);
      if (!mb) continue;
      if (mb->empty()) return false;
      disj.push_back(std::move(*mb));
    }
    return choose(s, disj, 0);
  }

  bool choose(const Store& s, const std::vector<std::vector<std::pair<Term, Term>>>& disj, std::size_t i) {
    if (i == disj.size()) return finish(s);
    for (const auto& [a, b] : disj[i]) {
      Store c = s;
      auto la = c.lin_of(a), lb = c.lin_of(b);
      if (!la || !lb) {
        unknown_ = true;
        continue;
      }
      if (c.add_lin(LinCon{*la - *lb, LinRel::Ne}) && choose(c, disj, i + 1)) return true;
    }
    return false;
  }

  bool finish(const Store& s0) {
    Store s = s0;
    LinResult r = s.solve_arith();
    if (r.verdict == LinVerdict::Unsat) return false;
    if (r.verdict == LinVerdict::Unknown) {
      unknown_ = true;
      return false;
    }
    for (const auto& [v, val] : r.model) {
      auto it = s.lin_var_terms().find(v);
      if (it == s.lin_var_terms().end()) continue;
      Term var = it->second;
      Term value = s.is_int_var(v) ? Term::int_payload(boost::multiprecision::numerator(val))
                                   : Term::float_payload(val);
      if (s.is_int_var(v) && !is_integral(val)) return false;
      if (!s.unify(var, value)) return false;
    }
    std::vector<Term> ground;
    for (const Term& f : focus_) {
      Term g = default_ground(s, f);
      if (!s.unify(f, g)) return false;
      ground.push_back(g);
    }
    if (!s.ok() || !s.not_matches().empty()) {
      // A disequality over variables outside the focus terms; they stay
      // existential, so settle them with defaults and re-check.
      for (const NotMatch& nm : std::vector<NotMatch>(s.not_matches())) {
        Term g = default_ground(s, nm.t);
        if (!s.unify(nm.t, g)) return false;
      }
      if (!s.ok() || !s.not_matches().empty()) return false;
    }
    if (s.check_arith() != LinVerdict::Sat) return false;
    found_ = std::move(ground);
    return true;
  }

  VarPool& pool_;
  SatOptions opts_;
  std::vector<Term> focus_;
  std::set<std::string> mentioned_;
  std::vector<std::string> atoms_;
  std::size_t max_arity_ = 0;
  std::map<VarId, int> depth_;  // invented variables; everything else is depth 1
  std::size_t nodes_ = 0;
  bool cut_ = false;
  bool unknown_ = false;
  std::optional<std::vector<Term>> found_;
};

}  // namespace

SatResult check_sat(const Store& s, const std::vector<Term>& focus, VarPool& pool, const SatOptions& opts) {
  Search search(pool, opts, focus);
  return search.run(s);
}

Term default_ground(const Store& s, const Term& t) {
  Term d = s.deref(t);
  switch (d.kind()) {
    case TermKind::Var:
      switch (d.var_sort()) {
        case VarSort::Value: return Term::atom("a");
        case VarSort::Tag: {
          std::uint8_t dom = s.tag_domain(d);
          for (TypeTag tg : kTagOrder)
            if (dom & tag_bit(tg)) return Term::tag(tg);
          return Term::tag(TypeTag::Atom);
        }
        case VarSort::Payload: return Term::atom_payload("a");
      }
      return d;
    case TermKind::Lit: {
      Term tag = default_ground(s, d.kid(0));
      Term p = s.deref(d.kid(1));
      if (p.is_var()) {
        switch (tag.tag_value()) {
          case TypeTag::Atom: p = Term::atom_payload("a"); break;
          case TypeTag::Int: p = Term::int_payload(0); break;
          case TypeTag::Float: p = Term::float_payload(0); break;
          case TypeTag::List: p = Term::nil_payload(); break;
        }
      }
      return Term::lit(tag, p);
    }
    case TermKind::Cons:
    case TermKind::Tuple: {
      std::vector<Term> kids;
      for (const Term& k : d.kids()) kids.push_back(default_ground(s, k));
      return rebuild(d, std::move(kids));
    }
    default: return d;
  }
}

}  // namespace symerl
