#include <algorithm>

#include "enigma/saturation.hpp"

namespace enigma {

void Substitution::bind(VarId v, const Term* t) {
  if (v >= bindings_.size()) bindings_.resize(v + 1, nullptr);
  bindings_[v] = t;
  trail_.push_back(v);
}

void Substitution::undo(std::size_t mark) {
  while (trail_.size() > mark) {
    bindings_[trail_.back()] = nullptr;
    trail_.pop_back();
  }
}

const Term& Substitution::deref(const Term& t) const {
  const Term* cur = &t;
  while (cur->is_var()) {
    const Term* b = binding(cur->id);
    if (!b) break;
    cur = b;
  }
  return *cur;
}

Term Substitution::apply(const Term& t) const {
  const Term& d = deref(t);
  if (d.is_var()) return d;
  Term out = Term::app(d.id);
  out.args.reserve(d.args.size());
  for (const auto& a : d.args) out.args.push_back(apply(a));
  return out;
}

Literal Substitution::apply(const Literal& lit) const {
  Literal out{lit.positive, lit.predicate, {}};
  out.args.reserve(lit.args.size());
  for (const auto& a : lit.args) out.args.push_back(apply(a));
  return out;
}

namespace {

bool occurs(VarId v, const Term& t, const Substitution& s) {
  const Term& d = s.deref(t);
  if (d.is_var()) return d.id == v;
  return std::any_of(d.args.begin(), d.args.end(), [&](const Term& a) { return occurs(v, a, s); });
}

bool unify_rec(const Term& a, const Term& b, Substitution& s) {
  const Term& x = s.deref(a);
  const Term& y = s.deref(b);
  if (x.is_var() && y.is_var() && x.id == y.id) return true;
  if (x.is_var()) {
    if (occurs(x.id, y, s)) return false;
    s.bind(x.id, &y);
    return true;
  }
  if (y.is_var()) {
    if (occurs(y.id, x, s)) return false;
    s.bind(y.id, &x);
    return true;
  }
  if (x.id != y.id || x.args.size() != y.args.size()) return false;
  for (std::size_t i = 0; i < x.args.size(); ++i) {
    if (!unify_rec(x.args[i], y.args[i], s)) return false;
  }
  return true;
}

VarId max_var_plus_one(const Term& t) {
  if (t.is_var()) return t.id + 1;
  VarId m = 0;
  for (const auto& a : t.args) m = std::max(m, max_var_plus_one(a));
  return m;
}

bool unify_args(const std::vector<Term>& a, const std::vector<Term>& b, Substitution& s) {
  if (a.size() != b.size()) return false;
  std::size_t m = s.mark();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!unify_rec(a[i], b[i], s)) {
      s.undo(m);
      return false;
    }
  }
  return true;
}

}  // namespace

bool unify_into(const Term& a, const Term& b, Substitution& subst) {
  std::size_t m = subst.mark();
  if (unify_rec(a, b, subst)) return true;
  subst.undo(m);
  return false;
}

std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution s(std::max(max_var_plus_one(a), max_var_plus_one(b)));
  if (!unify_rec(a, b, s)) return std::nullopt;
  return s;
}

Term shift_variables(const Term& t, VarId offset) {
  if (t.is_var()) return Term::var(t.id + offset);
  Term out = Term::app(t.id);
  out.args.reserve(t.args.size());
  for (const auto& a : t.args) out.args.push_back(shift_variables(a, offset));
  return out;
}

Literal shift_variables(const Literal& lit, VarId offset) {
  Literal out{lit.positive, lit.predicate, {}};
  out.args.reserve(lit.args.size());
  for (const auto& a : lit.args) out.args.push_back(shift_variables(a, offset));
  return out;
}

Clause make_derived(std::vector<Literal> literals, std::vector<ClauseId> parents) {
  std::vector<Literal> unique;
  unique.reserve(literals.size());
  for (auto& lit : literals) {
    if (std::find(unique.begin(), unique.end(), lit) == unique.end()) unique.push_back(std::move(lit));
  }
  Clause c;
  c.literals = std::move(unique);
  c.num_vars = normalize_variables(c.literals);
  c.parents = std::move(parents);
  c.role = ClauseRole::Derived;
  return c;
}

bool is_tautology(const Clause& c) {
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    for (std::size_t j = i + 1; j < c.literals.size(); ++j) {
      const Literal& a = c.literals[i];
      const Literal& b = c.literals[j];
      if (a.positive != b.positive && a.predicate == b.predicate && a.args == b.args) return true;
    }
  }
  return false;
}

std::vector<Clause> resolvents(const Clause& given, const Clause& partner) {
  std::vector<Clause> out;
  const VarId offset = given.num_vars;
  std::vector<Literal> renamed;
  renamed.reserve(partner.literals.size());
  for (const auto& lit : partner.literals) renamed.push_back(shift_variables(lit, offset));

  Substitution s(offset + partner.num_vars);
  for (std::size_t i = 0; i < given.literals.size(); ++i) {
    const Literal& li = given.literals[i];
    for (std::size_t j = 0; j < renamed.size(); ++j) {
      const Literal& lj = renamed[j];
      if (li.positive == lj.positive || li.predicate != lj.predicate) continue;
      std::size_t m = s.mark();
      if (!unify_args(li.args, lj.args, s)) continue;
      std::vector<Literal> lits;
      lits.reserve(given.literals.size() + renamed.size() - 2);
      for (std::size_t k = 0; k < given.literals.size(); ++k) {
        if (k != i) lits.push_back(s.apply(given.literals[k]));
      }
      for (std::size_t k = 0; k < renamed.size(); ++k) {
        if (k != j) lits.push_back(s.apply(renamed[k]));
      }
      s.undo(m);
      out.push_back(make_derived(std::move(lits), {given.id, partner.id}));
    }
  }
  return out;
}

std::vector<Clause> factors(const Clause& c) {
  std::vector<Clause> out;
  Substitution s(c.num_vars);
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    for (std::size_t j = i + 1; j < c.literals.size(); ++j) {
      const Literal& a = c.literals[i];
      const Literal& b = c.literals[j];
      if (a.positive != b.positive || a.predicate != b.predicate) continue;
      std::size_t m = s.mark();
      if (!unify_args(a.args, b.args, s)) continue;
      std::vector<Literal> lits;
      lits.reserve(c.literals.size() - 1);
      for (std::size_t k = 0; k < c.literals.size(); ++k) {
        if (k != j) lits.push_back(s.apply(c.literals[k]));
      }
      s.undo(m);
      out.push_back(make_derived(std::move(lits), {c.id}));
    }
  }
  return out;
}

namespace {

// One-sided matching: binds only pattern variables; target variables are
// treated as constants.
class Matcher {
 public:
  explicit Matcher(VarId pattern_vars) : bound_(pattern_vars, nullptr) {}

  bool match(const Term& pattern, const Term& target) {
    if (pattern.is_var()) {
      const Term*& slot = bound_[pattern.id];
      if (slot) return *slot == target;
      slot = &target;
      trail_.push_back(pattern.id);
      return true;
    }
    if (target.is_var() || pattern.id != target.id || pattern.args.size() != target.args.size()) {
      return false;
    }
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
      if (!match(pattern.args[i], target.args[i])) return false;
    }
    return true;
  }

  bool match(const Literal& p, const Literal& t) {
    if (p.positive != t.positive || p.predicate != t.predicate || p.args.size() != t.args.size()) {
      return false;
    }
    std::size_t m = mark();
    for (std::size_t i = 0; i < p.args.size(); ++i) {
      if (!match(p.args[i], t.args[i])) {
        undo(m);
        return false;
      }
    }
    return true;
  }

  std::size_t mark() const { return trail_.size(); }
  void undo(std::size_t m) {
    while (trail_.size() > m) {
      bound_[trail_.back()] = nullptr;
      trail_.pop_back();
    }
  }

 private:
  std::vector<const Term*> bound_;
  std::vector<VarId> trail_;
};

struct SubsumptionSearch {
  const Clause& c;
  const Clause& d;
  std::vector<std::vector<std::size_t>> candidates;  // per pattern literal, in search order
  std::vector<std::size_t> order;
  std::vector<bool> used;
  Matcher matcher;
  std::size_t budget;

  bool run(std::size_t k) {
    if (k == order.size()) return true;
    const Literal& p = c.literals[order[k]];
    for (std::size_t t : candidates[order[k]]) {
      if (used[t]) continue;
      if (budget == 0) return false;
      --budget;
      std::size_t m = matcher.mark();
      if (!matcher.match(p, d.literals[t])) continue;
      used[t] = true;
      if (run(k + 1)) return true;
      used[t] = false;
      matcher.undo(m);
      if (budget == 0) return false;
    }
    return false;
  }
};

}  // namespace

bool subsumes(const Clause& c, const Clause& d, std::size_t budget) {
  if (c.literals.size() > d.literals.size()) return false;
  SubsumptionSearch search{c, d, {}, {}, std::vector<bool>(d.literals.size(), false), Matcher(c.num_vars),
                           budget};
  search.candidates.resize(c.literals.size());
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    const Literal& p = c.literals[i];
    for (std::size_t t = 0; t < d.literals.size(); ++t) {
      const Literal& q = d.literals[t];
      if (p.positive == q.positive && p.predicate == q.predicate) {
        // Cheap pre-check; the real match happens during search.
        Matcher probe(c.num_vars);
        if (probe.match(p, q)) search.candidates[i].push_back(t);
      }
    }
    if (search.candidates[i].empty()) return false;
  }
  search.order.resize(c.literals.size());
  for (std::size_t i = 0; i < search.order.size(); ++i) search.order[i] = i;
  std::stable_sort(search.order.begin(), search.order.end(), [&](std::size_t a, std::size_t b) {
    return search.candidates[a].size() < search.candidates[b].size();
  });
  return search.run(0);
}

}  // namespace enigma
