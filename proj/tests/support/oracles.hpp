#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. None of them share code paths with the library beyond the data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "enigma/clause_model.hpp"
#include "enigma/linear_learner.hpp"
#include "enigma/saturation.hpp"

namespace oracle {

using Dense = std::vector<double>;

inline Dense densify(const enigma::SparseVector& x, std::size_t dim) {
  Dense d(dim, 0.0);
  for (const auto& e : x.entries) d[e.index - 1] = e.value;
  return d;
}

inline double dense_dot(const Dense& a, const Dense& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Gaussian elimination with partial pivoting; A is n×n row-major.
inline std::optional<Dense> solve_linear(std::vector<Dense> a, Dense b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) < 1e-14) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  Dense x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

inline double primal(const std::vector<Dense>& x, const std::vector<int>& y, const Dense& w, double c) {
  double obj = 0.5 * dense_dot(w, w);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double m = std::max(0.0, 1.0 - y[i] * dense_dot(w, x[i]));
    obj += c * m * m;
  }
  return obj;
}

/// Exact minimizer of ½‖w‖² + c Σ max(0, 1 − yᵢwᵀxᵢ)² by enumerating the set
/// S of margin violators. For a fixed S the objective is quadratic with
/// stationary point (I + 2c Σ_S xxᵀ) w = 2c Σ_S y x; the true optimum is the
/// candidate whose own violator set equals S. Exponential in the number of
/// examples, so only for tiny instances.
inline Dense svm_minimizer(const std::vector<Dense>& x, const std::vector<int>& y, double c) {
  const std::size_t l = x.size();
  const std::size_t n = l ? x[0].size() : 0;
  Dense best;
  double best_obj = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << l); ++mask) {
    std::vector<Dense> a(n, Dense(n, 0.0));
    Dense b(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
    for (std::size_t i = 0; i < l; ++i) {
      if (!(mask >> i & 1u)) continue;
      for (std::size_t r = 0; r < n; ++r) {
        b[r] += 2 * c * y[i] * x[i][r];
        for (std::size_t s = 0; s < n; ++s) a[r][s] += 2 * c * x[i][r] * x[i][s];
      }
    }
    auto w = solve_linear(a, b);
    if (!w) continue;
    bool consistent = true;
    for (std::size_t i = 0; i < l && consistent; ++i) {
      double slack = 1.0 - y[i] * dense_dot(*w, x[i]);
      bool in = mask >> i & 1u;
      if (in && slack < -1e-12) consistent = false;
      if (!in && slack > 1e-12) consistent = false;
    }
    if (!consistent) continue;
    double obj = primal(x, y, *w, c);
    if (obj < best_obj) {
      best_obj = obj;
      best = *w;
    }
  }
  return best;
}

/// Smallest number of sets whose union equals the union of all sets, and that
/// union. Exhaustive over subsets.
struct CoverResult {
  std::size_t size = 0;
  std::set<std::size_t> covered;
};

inline CoverResult brute_force_cover(const std::vector<std::set<std::size_t>>& sets) {
  std::set<std::size_t> all;
  for (const auto& s : sets) all.insert(s.begin(), s.end());
  CoverResult best{sets.size() + 1, {}};
  for (std::uint32_t mask = 0; mask < (1u << sets.size()); ++mask) {
    std::size_t k = static_cast<std::size_t>(__builtin_popcount(mask));
    if (k >= best.size) continue;
    std::set<std::size_t> u;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (mask >> i & 1u) u.insert(sets[i].begin(), sets[i].end());
    }
    if (u == all) best = {k, u};
  }
  return best;
}

// Backwards breadth-first walk from the empty clause over parent edges.
inline std::set<enigma::ClauseId> proof_ancestors(const enigma::ProofSearchRecord& r) {
  std::set<enigma::ClauseId> seen;
  if (!r.empty_clause) return seen;
  std::map<enigma::ClauseId, const enigma::Clause*> by_id;
  for (const auto& c : r.clauses) by_id[c.id] = &c;
  std::deque<enigma::ClauseId> todo{*r.empty_clause};
  while (!todo.empty()) {
    auto id = todo.front();
    todo.pop_front();
    if (!seen.insert(id).second) continue;
    auto it = by_id.find(id);
    if (it == by_id.end()) continue;
    for (auto p : it->second->parents) todo.push_back(p);
  }
  return seen;
}

/// Ground entailment over a function-free Herbrand universe: do the clauses
/// in `premises` entail `conclusion`? Every ground atom over the given
/// constants is a propositional variable; all interpretations are tried.
class GroundOracle {
 public:
  GroundOracle(const enigma::Signature& sig, std::vector<enigma::SymbolId> constants)
      : sig_(sig), constants_(std::move(constants)) {}

  bool entails(const std::vector<const enigma::Clause*>& premises, const enigma::Clause& conclusion) {
    std::vector<GroundClause> prem;
    for (auto* p : premises) {
      auto g = ground(*p);
      prem.insert(prem.end(), g.begin(), g.end());
    }
    auto concl = ground(conclusion);
    const std::size_t n = atoms_.size();
    if (n > 20) throw std::runtime_error("ground oracle: too many atoms");
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      auto holds = [&](const GroundClause& gc) {
        return std::any_of(gc.begin(), gc.end(), [&](const std::pair<std::size_t, bool>& lit) {
          return ((bits >> lit.first) & 1u) == static_cast<std::uint64_t>(lit.second);
        });
      };
      if (!std::all_of(prem.begin(), prem.end(), holds)) continue;
      if (!std::all_of(concl.begin(), concl.end(), holds)) return false;
    }
    return true;
  }

  std::size_t atom_count() const { return atoms_.size(); }

 private:
  using GroundClause = std::vector<std::pair<std::size_t, bool>>;

  std::vector<GroundClause> ground(const enigma::Clause& c) {
    std::vector<GroundClause> out;
    std::vector<enigma::SymbolId> assignment(c.num_vars, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t v) {
      if (v == c.num_vars) {
        GroundClause gc;
        for (const auto& lit : c.literals) {
          std::vector<enigma::SymbolId> key{lit.predicate};
          for (const auto& t : lit.args) {
            if (!t.args.empty()) throw std::runtime_error("ground oracle: function symbol");
            key.push_back(t.is_var() ? assignment[t.id] : t.id);
          }
          auto [it, fresh] = atoms_.emplace(key, atoms_.size());
          gc.emplace_back(it->second, lit.positive);
        }
        out.push_back(std::move(gc));
        return;
      }
      for (auto k : constants_) {
        assignment[v] = k;
        rec(v + 1);
      }
    };
    rec(0);
    return out;
  }

  const enigma::Signature& sig_;
  std::vector<enigma::SymbolId> constants_;
  std::map<std::vector<enigma::SymbolId>, std::size_t> atoms_;
};

}  // namespace oracle
