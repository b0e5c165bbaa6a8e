#include "symerl/linarith.hpp"

#include <algorithm>
#include <optional>

namespace symerl {

LinExpr LinExpr::var(VarId v, Rational c) {
  LinExpr e;
  if (c != 0) e.coeffs.emplace(v, std::move(c));
  return e;
}

LinExpr LinExpr::constant_of(Rational c) {
  LinExpr e;
  e.constant = std::move(c);
  return e;
}

Rational LinExpr::coeff(VarId v) const {
  auto it = coeffs.find(v);
  return it == coeffs.end() ? Rational(0) : it->second;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  for (const auto& [v, c] : o.coeffs) {
    Rational& slot = coeffs[v];
    slot += c;
    if (slot == 0) coeffs.erase(v);
  }
  constant += o.constant;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  for (const auto& [v, c] : o.coeffs) {
    Rational& slot = coeffs[v];
    slot -= c;
    if (slot == 0) coeffs.erase(v);
  }
  constant -= o.constant;
  return *this;
}

LinExpr& LinExpr::operator*=(const Rational& k) {
  if (k == 0) {
    coeffs.clear();
    constant = 0;
    return *this;
  }
  for (auto& [v, c] : coeffs) c *= k;
  constant *= k;
  return *this;
}

void LinExpr::substitute(VarId v, const LinExpr& by) {
  auto it = coeffs.find(v);
  if (it == coeffs.end()) return;
  Rational k = it->second;
  coeffs.erase(it);
  *this += by * k;
}

Rational LinExpr::eval(const std::map<VarId, Rational>& model) const {
  Rational r = constant;
  for (const auto& [v, c] : coeffs) {
    auto it = model.find(v);
    if (it != model.end()) r += c * it->second;
  }
  return r;
}

namespace {

bool rel_holds(const Rational& x, LinRel rel) {
  switch (rel) {
    case LinRel::Eq: return x == 0;
    case LinRel::Ne: return x != 0;
    case LinRel::Lt: return x < 0;
    case LinRel::Le: return x <= 0;
  }
  return false;
}

}  // namespace

bool LinCon::holds(const std::map<VarId, Rational>& model) const { return rel_holds(expr.eval(model), rel); }

bool lin_constant_ok(const LinCon& c) { return rel_holds(c.expr.constant, c.rel); }

bool is_integral(const Rational& r) { return boost::multiprecision::denominator(r) == 1; }

Integer floor_of(const Rational& r) {
  Integer n = boost::multiprecision::numerator(r);
  Integer d = boost::multiprecision::denominator(r);
  Integer q = n / d;
  if (n % d != 0 && n < 0) q -= 1;
  return q;
}

Integer ceil_of(const Rational& r) {
  Integer n = boost::multiprecision::numerator(r);
  Integer d = boost::multiprecision::denominator(r);
  Integer q = n / d;
  if (n % d != 0 && n > 0) q += 1;
  return q;
}

namespace {

struct Ineq {
  LinExpr e;  // e < 0 when strict, e =< 0 otherwise
  bool strict = false;
};

struct Budget {
  std::size_t max_constraints;
  bool exceeded = false;
};

// Keeps only the tightest constraint per direction vector.
class IneqSet {
 public:
  // Returns false on a violated constant constraint.
  bool add(Ineq q) {
    if (q.e.is_constant()) return q.strict ? q.e.constant < 0 : q.e.constant <= 0;
    Rational scale = abs(q.e.coeffs.begin()->second);
    q.e *= Rational(1) / scale;
    Rational c = q.e.constant;
    LinExpr key = q.e;
    key.constant = 0;
    auto it = index_.find(key.coeffs);
    if (it == index_.end()) {
      index_.emplace(key.coeffs, items_.size());
      items_.push_back(std::move(q));
      return true;
    }
    Ineq& old = items_[it->second];
    if (c > old.e.constant || (c == old.e.constant && q.strict && !old.strict)) old = std::move(q);
    return true;
  }

  std::vector<Ineq>& items() { return items_; }
  std::size_t size() const { return items_.size(); }

 private:
  std::map<std::map<VarId, Rational>, std::size_t> index_;
  std::vector<Ineq> items_;
};

struct FmStage {
  VarId var;
  std::vector<Ineq> cons;  // those mentioning var
};

enum class FmOutcome { Feasible, Infeasible, Blowup };

// Eliminates every variable not in `keep`. On Feasible, `rest` holds the
// constraints over kept variables (constant ones removed) and `stages` the
// elimination history.
FmOutcome fourier_motzkin(std::vector<Ineq> input, const std::set<VarId>& keep, Budget& budget,
                          std::vector<FmStage>& stages, std::vector<Ineq>& rest) {
  IneqSet cur;
  for (auto& q : input)
    if (!cur.add(std::move(q))) return FmOutcome::Infeasible;

  while (true) {
    // Pick the eliminable variable with the fewest generated pairs.
    std::map<VarId, std::pair<std::size_t, std::size_t>> counts;
    for (const Ineq& q : cur.items())
      for (const auto& [v, c] : q.e.coeffs) {
        if (keep.count(v)) continue;
        auto& pc = counts[v];
        (c > 0 ? pc.first : pc.second)++;
      }
    if (counts.empty()) break;
    VarId best = counts.begin()->first;
    std::size_t best_cost = SIZE_MAX;
    for (const auto& [v, pc] : counts) {
      std::size_t cost = pc.first * pc.second;
      if (cost < best_cost) {
        best_cost = cost;
        best = v;
      }
    }

    FmStage stage{best, {}};
    std::vector<Ineq> upper, lower;
    IneqSet next;
    for (Ineq& q : cur.items()) {
      Rational c = q.e.coeff(best);
      if (c == 0) {
        next.add(std::move(q));
        continue;
      }
      stage.cons.push_back(q);
      (c > 0 ? upper : lower).push_back(q);
    }
    for (const Ineq& u : upper) {
      Rational a = u.e.coeff(best);
      for (const Ineq& l : lower) {
        Rational b = -l.e.coeff(best);
        Ineq comb{u.e * b + l.e * a, u.strict || l.strict};
        comb.e.coeffs.erase(best);
        if (!next.add(std::move(comb))) return FmOutcome::Infeasible;
      }
      if (next.size() > budget.max_constraints) {
        budget.exceeded = true;
        return FmOutcome::Blowup;
      }
    }
    stages.push_back(std::move(stage));
    cur = std::move(next);
  }
  rest = std::move(cur.items());
  return FmOutcome::Feasible;
}

// Picks a value for `v` satisfying the constraints (all other variables
// already in `model`), preferring 0 and then integers.
Rational pick_value(VarId v, const std::vector<Ineq>& cons, const std::map<VarId, Rational>& model) {
  std::optional<Rational> lo, hi;
  bool lo_strict = false, hi_strict = false;
  for (const Ineq& q : cons) {
    Rational a = q.e.coeff(v);
    LinExpr rest = q.e;
    rest.coeffs.erase(v);
    Rational r = rest.eval(model);
    // a*v + r (<|=<) 0  =>  v (<|=<) -r/a when a > 0, v (>|>=) -r/a when a < 0
    Rational bound = -r / a;
    if (a > 0) {
      if (!hi || bound < *hi || (bound == *hi && q.strict)) {
        hi = bound;
        hi_strict = q.strict;
      }
    } else {
      if (!lo || bound > *lo || (bound == *lo && q.strict)) {
        lo = bound;
        lo_strict = q.strict;
      }
    }
  }
  auto ok = [&](const Rational& x) {
    if (lo && (lo_strict ? !(x > *lo) : !(x >= *lo))) return false;
    if (hi && (hi_strict ? !(x < *hi) : !(x <= *hi))) return false;
    return true;
  };
  if (ok(Rational(0))) return 0;
  if (lo) {
    Rational c = lo_strict ? Rational(floor_of(*lo) + 1) : Rational(ceil_of(*lo));
    if (ok(c)) return c;
  }
  if (hi) {
    Rational c = hi_strict ? Rational(ceil_of(*hi) - 1) : Rational(floor_of(*hi));
    if (ok(c)) return c;
  }
  if (lo && hi) return (*lo + *hi) / 2;
  if (lo) return *lo + 1;
  if (hi) return *hi - 1;
  return 0;
}

struct Gauss {
  std::vector<std::pair<VarId, LinExpr>> defs;  // in elimination order
  std::vector<LinCon> rest;
};

// Solves equalities for variables, preferring variables outside `keep` and
// then non-integer ones. Returns false on a violated constant constraint.
bool gaussian(std::vector<LinCon> cs, const std::set<VarId>& keep, bool eliminate_kept,
              const std::set<VarId>& int_vars, Gauss& out) {
  std::vector<LinCon> pending = std::move(cs);
  while (true) {
    std::optional<std::size_t> pick;
    VarId pick_var = 0;
    int pick_rank = 99;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const LinCon& c = pending[i];
      if (c.rel != LinRel::Eq || c.expr.is_constant()) continue;
      for (const auto& [v, k] : c.expr.coeffs) {
        bool kept = keep.count(v) > 0;
        if (kept && !eliminate_kept) continue;
        int rank = (kept ? 4 : 0) + (int_vars.count(v) ? 2 : 0) + (abs(k) == 1 ? 0 : 1);
        if (rank < pick_rank) {
          pick_rank = rank;
          pick = i;
          pick_var = v;
        }
      }
    }
    if (!pick) break;
    LinCon eq = pending[*pick];
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(*pick));
    Rational k = eq.expr.coeff(pick_var);
    LinExpr def = eq.expr;
    def.coeffs.erase(pick_var);
    def *= Rational(-1) / k;
    for (LinCon& c : pending) c.expr.substitute(pick_var, def);
    for (auto& [v, d] : out.defs) d.substitute(pick_var, def);
    out.defs.emplace_back(pick_var, std::move(def));
  }
  for (LinCon& c : pending) {
    if (c.expr.is_constant()) {
      if (!lin_constant_ok(c)) return false;
      continue;
    }
    out.rest.push_back(std::move(c));
  }
  return true;
}

void mentioned_vars(const std::vector<LinCon>& cs, std::set<VarId>& out) {
  for (const LinCon& c : cs)
    for (const auto& [v, k] : c.expr.coeffs) out.insert(v);
}

LinResult solve_rec(const std::vector<LinCon>& cs, const std::set<VarId>& int_vars, const LinLimits& limits,
                    int bb_depth, int& calls) {
  LinResult res;
  if (++calls > 20000) return res;  // Unknown
  Gauss g;
  if (!gaussian(cs, {}, true, int_vars, g)) {
    res.verdict = LinVerdict::Unsat;
    return res;
  }
  std::vector<Ineq> ineqs;
  for (const LinCon& c : g.rest) {
    if (c.rel == LinRel::Lt) ineqs.push_back({c.expr, true});
    if (c.rel == LinRel::Le) ineqs.push_back({c.expr, false});
  }
  Budget budget{limits.max_constraints};
  std::vector<FmStage> stages;
  std::vector<Ineq> rest;
  switch (fourier_motzkin(std::move(ineqs), {}, budget, stages, rest)) {
    case FmOutcome::Infeasible: res.verdict = LinVerdict::Unsat; return res;
    case FmOutcome::Blowup: return res;
    case FmOutcome::Feasible: break;
  }

  std::map<VarId, Rational> model;
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) model[it->var] = pick_value(it->var, it->cons, model);
  std::set<VarId> all;
  mentioned_vars(cs, all);
  for (const auto& [v, d] : g.defs) all.erase(v);
  for (VarId v : all) model.emplace(v, 0);
  for (auto it = g.defs.rbegin(); it != g.defs.rend(); ++it) model[it->first] = it->second.eval(model);

  // Disequalities: split the first violated one.
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].rel != LinRel::Ne || cs[i].holds(model)) continue;
    bool unknown = false;
    for (int side = 0; side < 2; ++side) {
      std::vector<LinCon> next = cs;
      next[i].rel = LinRel::Lt;
      if (side == 1) next[i].expr *= -1;
      LinResult sub = solve_rec(next, int_vars, limits, bb_depth, calls);
      if (sub.verdict == LinVerdict::Sat) return sub;
      unknown = unknown || sub.verdict == LinVerdict::Unknown;
    }
    res.verdict = unknown ? LinVerdict::Unknown : LinVerdict::Unsat;
    return res;
  }

  // Integrality by branch and bound.
  for (VarId v : int_vars) {
    auto it = model.find(v);
    if (it == model.end() || is_integral(it->second)) continue;
    if (bb_depth >= limits.int_enum_bound) return res;  // Unknown
    bool unknown = false;
    for (int side = 0; side < 2; ++side) {
      std::vector<LinCon> next = cs;
      if (side == 0)
        next.push_back(LinCon::make(LinExpr::var(v), LinRel::Le, LinExpr::constant_of(Rational(floor_of(it->second)))));
      else
        next.push_back(LinCon::make(LinExpr::constant_of(Rational(ceil_of(it->second))), LinRel::Le, LinExpr::var(v)));
      LinResult sub = solve_rec(next, int_vars, limits, bb_depth + 1, calls);
      if (sub.verdict == LinVerdict::Sat) return sub;
      unknown = unknown || sub.verdict == LinVerdict::Unknown;
    }
    res.verdict = unknown ? LinVerdict::Unknown : LinVerdict::Unsat;
    return res;
  }

  res.verdict = LinVerdict::Sat;
  res.model = std::move(model);
  return res;
}

}  // namespace

LinResult lin_solve(const std::vector<LinCon>& cs, const std::set<VarId>& int_vars, const LinLimits& limits) {
  int calls = 0;
  return solve_rec(cs, int_vars, limits, 0, calls);
}

std::vector<LinCon> lin_project(const std::vector<LinCon>& cs, const std::set<VarId>& keep, const LinLimits& limits) {
  std::vector<LinCon> out;
  Gauss g;
  if (!gaussian(cs, keep, false, {}, g)) return out;
  std::vector<Ineq> ineqs;
  for (LinCon& c : g.rest) {
    bool only_kept = std::all_of(c.expr.coeffs.begin(), c.expr.coeffs.end(),
                                 [&](const auto& kv) { return keep.count(kv.first) > 0; });
    if (c.rel == LinRel::Lt || c.rel == LinRel::Le) {
      ineqs.push_back({c.expr, c.rel == LinRel::Lt});
    } else if (only_kept) {
      out.push_back(std::move(c));
    }
  }
  Budget budget{limits.max_constraints};
  std::vector<FmStage> stages;
  std::vector<Ineq> rest;
  if (fourier_motzkin(std::move(ineqs), keep, budget, stages, rest) != FmOutcome::Feasible) return out;
  for (Ineq& q : rest) out.push_back({std::move(q.e), q.strict ? LinRel::Lt : LinRel::Le});
  return out;
}

}  // namespace symerl
