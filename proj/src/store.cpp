#include "symerl/store.hpp"

#include <algorithm>
#include <bit>

namespace symerl {

namespace {

std::optional<TypeTag> payload_tag(const Term& p) {
  switch (p.kind()) {
    case TermKind::AtomConst: return TypeTag::Atom;
    case TermKind::IntConst: return TypeTag::Int;
    case TermKind::FloatConst: return TypeTag::Float;
    case TermKind::NilConst: return TypeTag::List;
    default: return std::nullopt;
  }
}

TypeTag single_tag(std::uint8_t mask) { return static_cast<TypeTag>(std::countr_zero(mask)); }

}  // namespace

Term Store::deref(const Term& t) const {
  Term cur = t;
  while (cur.is_var()) {
    auto it = subst_.find(cur.var_id());
    if (it == subst_.end()) break;
    cur = it->second;
  }
  return cur;
}

Term Store::resolve(const Term& t) const {
  Term d = deref(t);
  switch (d.kind()) {
    case TermKind::Lit:
    case TermKind::Cons:
    case TermKind::Tuple: {
      std::vector<Term> kids;
      kids.reserve(d.arity());
      bool changed = false;
      for (const Term& k : d.kids()) {
        kids.push_back(resolve(k));
        changed = changed || kids.back().identity() != k.identity();
      }
      if (!changed) return d;
      if (d.kind() == TermKind::Lit) return Term::lit(kids[0], kids[1]);
      if (d.kind() == TermKind::Cons) return Term::cons(kids[0], kids[1]);
      return Term::tuple(std::move(kids));
    }
    default: return d;
  }
}

void Store::note(const Term& t) {
  Term d = deref(t);
  if (d.kind() == TermKind::Lit) {
    Term p = deref(d.kid(1));
    if (p.is_var()) owners_.emplace(p.var_id(), std::make_pair(p, d.kid(0)));
    return;
  }
  if (d.kind() == TermKind::Cons || d.kind() == TermKind::Tuple)
    for (const Term& k : d.kids()) note(k);
}

bool Store::occurs(VarId v, const Term& t) const {
  Term d = deref(t);
  if (d.is_var()) return d.var_id() == v;
  if (d.kind() == TermKind::Lit || d.kind() == TermKind::Cons || d.kind() == TermKind::Tuple)
    for (const Term& k : d.kids())
      if (occurs(v, k)) return true;
  return false;
}

bool Store::bind(const Term& v0, const Term& t0) {
  Term v = v0, t = t0;
  if (t.is_var()) {
    bool pv = prefer_.count(v.var_id()) > 0, pt = prefer_.count(t.var_id()) > 0;
    if ((pt && !pv) || (pv == pt && v.var_id() < t.var_id())) std::swap(v, t);
    VarId vi = v.var_id(), ti = t.var_id();
    if (auto it = domains_.find(vi); it != domains_.end()) {
      std::uint8_t d = it->second & tag_domain(t);
      domains_.erase(it);
      if (d == 0) return fail();
      if (std::popcount(d) == 1) {
        domains_.erase(ti);
        work_.emplace_back(t, Term::tag(single_tag(d)));
      } else {
        domains_[ti] = d;
      }
    }
    if (auto it = owners_.find(vi); it != owners_.end()) {
      auto ot = owners_.find(ti);
      if (ot == owners_.end())
        owners_.emplace(ti, std::make_pair(t, it->second.second));
      else
        work_.emplace_back(it->second.second, ot->second.second);
      owners_.erase(vi);
    }
    if (lin_vars_.count(vi)) lin_dirty_ = true;
    subst_.emplace(vi, t);
    trail_.push_back(v);
    return true;
  }

  VarId vi = v.var_id();
  if (v.var_sort() == VarSort::Tag) {
    if (t.kind() != TermKind::TagConst) return fail();
    if (!(tag_domain(v) & tag_bit(t.tag_value()))) return fail();
    domains_.erase(vi);
  } else if (!term_is_ground(t) && occurs(vi, t)) {
    return fail();
  }
  if (lin_vars_.count(vi)) lin_dirty_ = true;
  subst_.emplace(vi, t);
  trail_.push_back(v);
  return true;
}

bool Store::solve_eqs() {
  while (!work_.empty()) {
    if (unsat_) return false;
    auto [a, b] = std::move(work_.back());
    work_.pop_back();
    Term x = deref(a), y = deref(b);
    if (x.identity() == y.identity()) continue;
    if (x.is_var() && y.is_var() && x.var_id() == y.var_id()) continue;
    if (x.is_var()) {
      if (!bind(x, y)) return fail();
      continue;
    }
    if (y.is_var()) {
      if (!bind(y, x)) return fail();
      continue;
    }
    if (x.kind() != y.kind()) return fail();
    switch (x.kind()) {
      case TermKind::TagConst:
        if (x.tag_value() != y.tag_value()) return fail();
        break;
      case TermKind::AtomConst:
      case TermKind::Error:
        if (x.name() != y.name()) return fail();
        break;
      case TermKind::IntConst:
        if (x.int_value() != y.int_value()) return fail();
        break;
      case TermKind::FloatConst:
        if (x.float_value() != y.float_value()) return fail();
        break;
      case TermKind::NilConst: break;
      case TermKind::Lit:
        note(x);
        note(y);
        // Stack order: the tags are unified before the payloads.
        work_.emplace_back(x.kid(1), y.kid(1));
        work_.emplace_back(x.kid(0), y.kid(0));
        break;
      case TermKind::Cons:
      case TermKind::Tuple:
        if (x.arity() != y.arity()) return fail();
        for (std::size_t i = x.arity(); i-- > 0;) work_.emplace_back(x.kid(i), y.kid(i));
        break;
      case TermKind::Var: break;
    }
  }
  return !unsat_;
}

bool Store::propagate_owners(bool& changed) {
  for (auto it = owners_.begin(); it != owners_.end();) {
    Term p = deref(it->second.first);
    Term tg = deref(it->second.second);
    if (p.is_var()) {
      if (tg.kind() == TermKind::TagConst && tg.tag_value() == TypeTag::List) {
        work_.emplace_back(p, Term::nil_payload());
        changed = true;
      }
      ++it;
      continue;
    }
    auto need = payload_tag(p);
    if (!need) return fail();
    if (tg.is_var()) {
      work_.emplace_back(tg, Term::tag(*need));
      changed = true;
    } else if (tg.tag_value() != *need) {
      return fail();
    }
    it = owners_.erase(it);
  }
  return true;
}

bool Store::propagate_joins(bool& changed) {
  for (std::size_t i = 0; i < joins_.size();) {
    Term r = deref(joins_[i].result);
    bool any_float = false, all_int = true;
    std::vector<Term> open;
    for (const Term& o : joins_[i].operands) {
      Term d = deref(o);
      if (d.is_var()) {
        all_int = false;
        open.push_back(d);
      } else if (d.tag_value() == TypeTag::Float) {
        any_float = true;
        all_int = false;
      } else if (d.tag_value() != TypeTag::Int) {
        return fail();
      }
    }
    auto set = [&](const Term& tag, TypeTag want) {
      work_.emplace_back(tag, Term::tag(want));
      changed = true;
    };
    bool done = true;
    if (any_float) {
      set(r, TypeTag::Float);
    } else if (all_int) {
      set(r, TypeTag::Int);
    } else if (!r.is_var() && r.tag_value() == TypeTag::Int) {
      for (const Term& o : open) set(o, TypeTag::Int);
    } else if (!r.is_var() && r.tag_value() == TypeTag::Float && open.size() == 1) {
      set(open[0], TypeTag::Float);
    } else {
      done = false;
    }
    if (done)
      joins_.erase(joins_.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  return true;
}

Store Store::trial_copy(const std::vector<VarId>& locals) const {
  Store trial(limits_);
  trial.subst_ = subst_;
  trial.domains_ = domains_;
  trial.owners_ = owners_;
  trial.joins_ = joins_;
  trial.lin_ = lin_;
  trial.lin_vars_ = lin_vars_;
  trial.lin_terms_ = lin_terms_;
  trial.trial_ = true;
  trial.prefer_.insert(locals.begin(), locals.end());
  return trial;
}

std::optional<std::vector<std::pair<Term, Term>>> Store::match_bindings(const NotMatch& nm) const {
  Store trial = trial_copy(nm.locals);
  if (!trial.run(nm.t, nm.pat)) return std::nullopt;
  std::vector<std::pair<Term, Term>> out;
  for (const Term& v : trial.trail_)
    if (!trial.prefer_.count(v.var_id())) out.emplace_back(v, trial.resolve(v));
  return out;
}

Store::Decision Store::decide(NotMatch& nm, std::optional<std::pair<Term, Term>>& as_ne) const {
  Store trial = trial_copy(nm.locals);
  if (!trial.run(nm.t, nm.pat)) return Decision::Discharged;

  std::vector<VarId> outer;
  for (const Term& v : trial.trail_)
    if (!trial.prefer_.count(v.var_id())) outer.push_back(v.var_id());
  if (outer.empty()) return Decision::Entailed;

  if (outer.size() == 1) {
    auto ow = owners_.find(outer[0]);
    if (ow != owners_.end()) {
      Term tg = deref(ow->second.second);
      Term x = trial.deref(ow->second.first);
      bool numeric_tag = tg.kind() == TermKind::TagConst &&
                         (tg.tag_value() == TypeTag::Int || tg.tag_value() == TypeTag::Float);
      bool numeric_val = x.kind() == TermKind::IntConst || x.kind() == TermKind::FloatConst ||
                         (x.is_var() && x.var_sort() == VarSort::Payload);
      if (numeric_tag && numeric_val) as_ne = std::make_pair(ow->second.first, x);
    }
  }

  std::vector<VarId> watch;
  collect_vars(resolve(nm.t), watch);
  for (VarId v : outer)
    if (std::find(watch.begin(), watch.end(), v) == watch.end()) watch.push_back(v);
  nm.watch = std::move(watch);
  return Decision::Open;
}

bool Store::wake() {
  if (trail_.empty() || not_matches_.empty()) {
    trail_.clear();
    return true;
  }
  std::set<VarId> bound;
  for (const Term& v : trail_) bound.insert(v.var_id());
  trail_.clear();
  std::vector<NotMatch> pending = std::move(not_matches_);
  not_matches_.clear();
  std::vector<std::pair<Term, Term>> nes;
  for (NotMatch& nm : pending) {
    bool touched = std::any_of(nm.watch.begin(), nm.watch.end(), [&](VarId v) { return bound.count(v) > 0; });
    if (!touched) {
      not_matches_.push_back(std::move(nm));
      continue;
    }
    std::optional<std::pair<Term, Term>> ne;
    switch (decide(nm, ne)) {
      case Decision::Discharged: break;
      case Decision::Entailed: return fail();
      case Decision::Open:
        if (ne)
          nes.push_back(*ne);
        else
          not_matches_.push_back(std::move(nm));
        break;
    }
  }
  for (auto& [a, b] : nes) {
    auto la = lin_of(a), lb = lin_of(b);
    if (!la || !lb) return fail();
    LinCon c{*la - *lb, LinRel::Ne};
    for (const auto& [v, k] : c.expr.coeffs) lin_vars_.insert(v);
    lin_.push_back(std::move(c));
    lin_dirty_ = true;
  }
  return true;
}

bool Store::settle() {
  while (true) {
    if (!solve_eqs()) return false;
    bool changed = false;
    if (!propagate_owners(changed) || !propagate_joins(changed)) return false;
    if (changed) continue;
    if (!trial_) {
      if (!wake()) return false;
      if (!work_.empty()) continue;
    }
    break;
  }
  return lin_check_if_dirty();
}

bool Store::run(const Term& a, const Term& b) {
  if (unsat_) return false;
  work_.emplace_back(a, b);
  if (!settle()) {
    work_.clear();
    return fail();
  }
  return true;
}

bool Store::unify(const Term& a, const Term& b) {
  if (unsat_) return false;
  trail_.clear();
  return run(a, b);
}

bool Store::add_not_match(const Term& t, const Term& pat, const std::vector<VarId>& locals) {
  if (unsat_) return false;
  if (locals.empty()) {
    // A tag kept apart from a tag constant is a domain restriction.
    Term a = deref(t), b = deref(pat);
    if (a.kind() == TermKind::TagConst) std::swap(a, b);
    if (a.is_var() && a.var_sort() == VarSort::Tag && b.kind() == TermKind::TagConst)
      return restrict_tag(a, kAllTags & ~tag_bit(b.tag_value()));
  }
  NotMatch nm{t, pat, locals, next_seq_++, {}};
  std::optional<std::pair<Term, Term>> ne;
  switch (decide(nm, ne)) {
    case Decision::Discharged: return true;
    case Decision::Entailed: return fail();
    case Decision::Open: break;
  }
  if (ne) {
    auto la = lin_of(ne->first), lb = lin_of(ne->second);
    if (!la || !lb) return fail();
    return add_lin(LinCon{*la - *lb, LinRel::Ne});
  }
  not_matches_.push_back(std::move(nm));
  return true;
}

std::uint8_t Store::tag_domain(const Term& tag) const {
  Term d = deref(tag);
  if (d.kind() == TermKind::TagConst) return tag_bit(d.tag_value());
  if (!d.is_var()) return 0;
  auto it = domains_.find(d.var_id());
  return it == domains_.end() ? kAllTags : it->second;
}

bool Store::restrict_tag(const Term& tag, std::uint8_t mask) {
  if (unsat_) return false;
  Term d = deref(tag);
  std::uint8_t dom = tag_domain(d) & mask;
  if (dom == 0) return fail();
  if (!d.is_var()) return true;
  if (std::popcount(dom) == 1) return unify(d, Term::tag(single_tag(dom)));
  if (dom == kAllTags)
    domains_.erase(d.var_id());
  else
    domains_[d.var_id()] = dom;
  return true;
}

bool Store::add_num_join(const Term& result, const std::vector<Term>& operands) {
  if (unsat_) return false;
  for (const Term& o : operands)
    if (!restrict_tag(o, kNumericTags)) return false;
  if (!restrict_tag(result, kNumericTags)) return false;
  joins_.push_back({result, operands});
  trail_.clear();
  return settle() || fail();
}

std::optional<LinExpr> Store::lin_of(const Term& payload) {
  Term d = deref(payload);
  switch (d.kind()) {
    case TermKind::IntConst: return LinExpr::constant_of(Rational(d.int_value()));
    case TermKind::FloatConst: return LinExpr::constant_of(d.float_value());
    case TermKind::Var:
      if (d.var_sort() != VarSort::Payload) return std::nullopt;
      lin_terms_.emplace(d.var_id(), d);
      return LinExpr::var(d.var_id());
    default: return std::nullopt;
  }
}

bool Store::is_int_var(VarId v) const {
  auto it = owners_.find(v);
  if (it == owners_.end()) return false;
  Term tg = deref(it->second.second);
  return tg.kind() == TermKind::TagConst && tg.tag_value() == TypeTag::Int;
}

LinExpr Store::resolve_lin(const LinExpr& e, bool& bad) {
  LinExpr out = LinExpr::constant_of(e.constant);
  for (const auto& [v, k] : e.coeffs) {
    auto it = lin_terms_.find(v);
    Term x = it == lin_terms_.end() ? Term() : deref(it->second);
    if (it == lin_terms_.end()) {
      out += LinExpr::var(v, k);
      continue;
    }
    switch (x.kind()) {
      case TermKind::Var:
        lin_terms_.emplace(x.var_id(), x);
        out += LinExpr::var(x.var_id(), k);
        break;
      case TermKind::IntConst: out += LinExpr::constant_of(k * Rational(x.int_value())); break;
      case TermKind::FloatConst: out += LinExpr::constant_of(k * x.float_value()); break;
      default: bad = true; break;
    }
  }
  return out;
}

void Store::normalize_lin() {
  std::vector<LinCon> out;
  out.reserve(lin_.size());
  lin_vars_.clear();
  for (const LinCon& c : lin_) {
    bool bad = false;
    LinCon r{resolve_lin(c.expr, bad), c.rel};
    if (bad) {
      fail();
      return;
    }
    if (r.expr.is_constant()) {
      if (!lin_constant_ok(r)) {
        fail();
        return;
      }
      continue;
    }
    for (const auto& [v, k] : r.expr.coeffs) lin_vars_.insert(v);
    out.push_back(std::move(r));
  }
  lin_ = std::move(out);
}

LinResult Store::solve_arith() {
  LinResult r;
  if (unsat_) {
    r.verdict = LinVerdict::Unsat;
    return r;
  }
  normalize_lin();
  if (unsat_) {
    r.verdict = LinVerdict::Unsat;
    return r;
  }
  std::set<VarId> ints;
  for (VarId v : lin_vars_)
    if (is_int_var(v)) ints.insert(v);
  return lin_solve(lin_, ints, limits_);
}

LinVerdict Store::check_arith() {
  if (unsat_) return LinVerdict::Unsat;
  normalize_lin();
  if (unsat_) return LinVerdict::Unsat;
  lin_dirty_ = false;
  if (lin_.empty()) return LinVerdict::Sat;
  std::set<VarId> ints;
  for (VarId v : lin_vars_)
    if (is_int_var(v)) ints.insert(v);
  LinResult r = lin_solve(lin_, ints, limits_);
  if (r.verdict == LinVerdict::Unsat) fail();
  if (r.verdict == LinVerdict::Unknown) arith_unknown_ = true;
  return r.verdict;
}

bool Store::lin_check_if_dirty() {
  if (!lin_dirty_) return !unsat_;
  return check_arith() != LinVerdict::Unsat;
}

bool Store::add_lin(const LinCon& c) {
  if (unsat_) return false;
  // Callers may build expressions from bare ids; noted payloads know their term.
  for (const auto& [v, k] : c.expr.coeffs) {
    if (lin_terms_.count(v)) continue;
    auto ow = owners_.find(v);
    lin_terms_.emplace(v, ow != owners_.end() ? ow->second.first : Term::var(v, VarSort::Payload, "N"));
  }
  bool bad = false;
  LinCon r{resolve_lin(c.expr, bad), c.rel};
  if (bad) return fail();
  if (r.expr.is_constant()) return lin_constant_ok(r) || fail();
  // An equality defining a variable that occurs nowhere else, with integer
  // coefficients elsewhere, cannot make the system unsatisfiable.
  bool definitional = false;
  if (r.rel == LinRel::Eq && is_integral(r.expr.constant)) {
    bool integral = std::all_of(r.expr.coeffs.begin(), r.expr.coeffs.end(),
                                [](const auto& kv) { return is_integral(kv.second); });
    for (const auto& [v, k] : r.expr.coeffs)
      if (integral && abs(k) == 1 && !lin_vars_.count(v)) definitional = true;
  }
  for (const auto& [v, k] : r.expr.coeffs) lin_vars_.insert(v);
  lin_.push_back(std::move(r));
  if (!definitional) lin_dirty_ = true;
  return lin_check_if_dirty();
}

}  // namespace symerl
