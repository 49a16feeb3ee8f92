#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>

#include "enigma/error.hpp"
#include "enigma/log.hpp"
#include "enigma/saturation.hpp"

namespace enigma {

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::ProofFound: return "proof_found";
    case Outcome::Saturated: return "saturated";
    case Outcome::ResourceOut: return "resource_out";
  }
  return "saturated";
}

std::optional<Outcome> outcome_from_string(std::string_view text) {
  for (auto o : {Outcome::ProofFound, Outcome::Saturated, Outcome::ResourceOut}) {
    if (text == to_string(o)) return o;
  }
  return std::nullopt;
}

const Clause* ProofSearchRecord::find(ClauseId id) const {
  if (id < clauses.size() && clauses[id].id == id) return &clauses[id];
  auto it = std::lower_bound(clauses.begin(), clauses.end(), id,
                             [](const Clause& c, ClauseId v) { return c.id < v; });
  return it != clauses.end() && it->id == id ? &*it : nullptr;
}

namespace {

std::set<ClauseId> ancestors(const ProofSearchRecord& r, std::vector<ClauseId> roots) {
  std::set<ClauseId> seen;
  while (!roots.empty()) {
    ClauseId id = roots.back();
    roots.pop_back();
    if (!seen.insert(id).second) continue;
    if (const Clause* c = r.find(id)) {
      for (ClauseId p : c->parents) roots.push_back(p);
    }
  }
  return seen;
}

}  // namespace

std::vector<ClauseId> ProofSearchRecord::proof() const {
  if (!empty_clause) return {};
  auto s = ancestors(*this, {*empty_clause});
  return {s.begin(), s.end()};
}

ProofSearchRecord ProofSearchRecord::trimmed() const {
  std::vector<ClauseId> roots = given_sequence;
  if (empty_clause) roots.push_back(*empty_clause);
  auto keep = ancestors(*this, roots);
  ProofSearchRecord out;
  out.problem = problem;
  out.strategy = strategy;
  out.outcome = outcome;
  out.given_sequence = given_sequence;
  out.empty_clause = empty_clause;
  out.stats = stats;
  out.signature = signature;
  out.clauses.reserve(keep.size());
  for (ClauseId id : keep) {
    if (const Clause* c = find(id)) out.clauses.push_back(*c);
  }
  return out;
}

namespace {

void collect_symbols(const Term& t, std::set<SymbolId>& functions) {
  if (t.is_var()) return;
  functions.insert(t.id);
  for (const auto& a : t.args) collect_symbols(a, functions);
}

Clause axiom(std::vector<Literal> lits, std::string name) {
  Clause c;
  c.literals = std::move(lits);
  c.num_vars = normalize_variables(c.literals);
  c.role = ClauseRole::Input;
  c.name = std::move(name);
  return c;
}

Literal eq(SymbolId e, bool positive, Term a, Term b) {
  std::vector<Term> args;
  args.push_back(std::move(a));
  args.push_back(std::move(b));
  return Literal{positive, e, std::move(args)};
}

}  // namespace

std::vector<Clause> equality_axioms(const Problem& problem) {
  const Signature& sig = *problem.signature;
  auto e = sig.lookup(kEqualityName);
  if (!e) return {};
  std::set<SymbolId> functions, predicates;
  bool uses_equality = false;
  for (const auto& c : problem.clauses) {
    for (const auto& lit : c.literals) {
      if (lit.predicate == *e) uses_equality = true;
      predicates.insert(lit.predicate);
      for (const auto& a : lit.args) collect_symbols(a, functions);
    }
  }
  if (!uses_equality) return {};

  auto X = [](VarId v) { return Term::var(v); };
  std::vector<Clause> out;
  out.push_back(axiom({eq(*e, true, X(0), X(0))}, "eq_reflexivity"));
  out.push_back(axiom({eq(*e, false, X(0), X(1)), eq(*e, true, X(1), X(0))}, "eq_symmetry"));
  out.push_back(axiom({eq(*e, false, X(0), X(1)), eq(*e, false, X(1), X(2)), eq(*e, true, X(0), X(2))},
                      "eq_transitivity"));

  // Congruence, one clause per argument position: X≠Y ∨ f(..X..) = f(..Y..).
  auto arguments = [&](std::uint32_t arity, std::uint32_t pos, VarId at) {
    std::vector<Term> args;
    for (std::uint32_t k = 0; k < arity; ++k) args.push_back(k == pos ? X(at) : X(2 + k));
    return args;
  };
  for (SymbolId f : functions) {
    const Symbol& s = sig[f];
    for (std::uint32_t pos = 0; pos < s.arity; ++pos) {
      out.push_back(axiom({eq(*e, false, X(0), X(1)),
                           eq(*e, true, Term::app(f, arguments(s.arity, pos, 0)),
                              Term::app(f, arguments(s.arity, pos, 1)))},
                          "eq_congruence_" + s.name + "_" + std::to_string(pos + 1)));
    }
  }
  for (SymbolId p : predicates) {
    if (p == *e) continue;
    const Symbol& s = sig[p];
    for (std::uint32_t pos = 0; pos < s.arity; ++pos) {
      out.push_back(axiom({eq(*e, false, X(0), X(1)), Literal{false, p, arguments(s.arity, pos, 0)},
                           Literal{true, p, arguments(s.arity, pos, 1)}},
                          "eq_congruence_" + s.name + "_" + std::to_string(pos + 1)));
    }
  }
  return out;
}

namespace {

std::size_t hash_term(const Term& t, std::size_t h) {
  h = h * 1000003u ^ (t.is_var() ? 0x9e3779b9u + t.id : t.id * 2654435761u + 17);
  for (const auto& a : t.args) h = hash_term(a, h);
  return h * 31 + t.args.size();
}

std::size_t hash_literals(const std::vector<Literal>& lits) {
  std::size_t h = lits.size();
  for (const auto& lit : lits) {
    h = h * 1000003u ^ (lit.predicate * 2u + (lit.positive ? 1u : 0u));
    for (const auto& a : lit.args) h = hash_term(a, h);
  }
  return h;
}

class Prover {
 public:
  Prover(const Problem& problem, const Strategy& strategy, const ProverLimits& limits)
      : problem_(problem),
        strategy_(strategy),
        limits_(limits),
        evaluator_(strategy, *problem.signature),
        queues_(strategy.size()) {}

  ProofSearchRecord run() {
    auto start = std::chrono::steady_clock::now();
    record_.problem = problem_.name;
    record_.strategy = format_strategy(strategy_);
    record_.signature = problem_.signature;

    std::vector<Clause> inputs = problem_.clauses;
    if (limits_.equality_axioms) {
      for (auto& ax : equality_axioms(problem_)) inputs.push_back(std::move(ax));
    }
    for (auto& c : inputs) {
      c.parents.clear();
      c.role = ClauseRole::Input;
      if (is_tautology(c)) {
        ++stats_.tautologies;
        continue;
      }
      if (is_duplicate(c)) {
        ++stats_.duplicates;
        continue;
      }
      ClauseId id = add(std::move(c));
      if (clauses_[id].empty()) return finish(Outcome::ProofFound, id, start);
    }

    std::uint64_t step = 0;
    for (;;) {
      if (unprocessed_count_ == 0) return finish(Outcome::Saturated, std::nullopt, start);
      if (stats_.processed >= limits_.max_processed || stats_.generated >= limits_.max_generated ||
          out_of_time(start)) {
        return finish(Outcome::ResourceOut, std::nullopt, start);
      }
      std::size_t entry = strategy_.index_at(step);
      ClauseId given = select(entry);
      state_[given] = State::Removed;
      --unprocessed_count_;
      if (subsumed_by_processed(clauses_[given])) {
        ++stats_.subsumed;
        continue;
      }
      ++step;
      ++stats_.processed;
      state_[given] = State::Processed;
      record_.given_sequence.push_back(given);
      processed_.push_back(given);
      index_processed(given);
      log::debug("given #", step, " [", strategy_.entries()[entry].cef.name(), "] ",
                 to_string(clauses_[given], *problem_.signature));

      if (auto empty = generate(given)) return finish(Outcome::ProofFound, empty, start);
    }
  }

 private:
  enum class State : std::uint8_t { Unprocessed, Processed, Removed };

  struct Queue {
    using Entry = std::pair<double, ClauseId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    std::size_t next = 0;  // position in unprocessed_log_ not yet evaluated
  };

  bool out_of_time(std::chrono::steady_clock::time_point start) const {
    if (limits_.time_budget <= 0) return false;
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return elapsed.count() >= limits_.time_budget;
  }

  ClauseId add(Clause c) {
    auto id = static_cast<ClauseId>(clauses_.size());
    c.id = id;
    c.age = id;
    variants_[hash_literals(c.literals)].push_back(id);
    clauses_.push_back(std::move(c));
    state_.push_back(State::Unprocessed);
    unprocessed_log_.push_back(id);
    ++unprocessed_count_;
    ++stats_.kept;
    return id;
  }

  bool is_duplicate(const Clause& c) const {
    auto it = variants_.find(hash_literals(c.literals));
    if (it == variants_.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](ClauseId id) { return clauses_[id].literals == c.literals; });
  }

  // Lazily evaluates clauses added since this CEF last ran; the cheapest
  // live clause wins, ties going to the older clause.
  ClauseId select(std::size_t entry) {
    Queue& q = queues_[entry];
    for (; q.next < unprocessed_log_.size(); ++q.next) {
      ClauseId id = unprocessed_log_[q.next];
      if (state_[id] != State::Unprocessed) continue;
      q.heap.emplace(evaluator_.evaluate(entry, clauses_[id]), id);
    }
    while (state_[q.heap.top().second] != State::Unprocessed) q.heap.pop();
    ClauseId id = q.heap.top().second;
    q.heap.pop();
    return id;
  }

  static std::pair<bool, SymbolId> key(const Literal& lit) { return {lit.positive, lit.predicate}; }

  void index_processed(ClauseId id) {
    const Clause& c = clauses_[id];
    if (c.literals.empty()) return;
    index_[key(c.literals.front())].push_back(id);
  }

  bool subsumed_by_processed(const Clause& d) const {
    std::set<std::pair<bool, SymbolId>> keys;
    for (const auto& lit : d.literals) keys.insert(key(lit));
    for (const auto& k : keys) {
      auto it = index_.find(k);
      if (it == index_.end()) continue;
      for (ClauseId id : it->second) {
        if (subsumes(clauses_[id], d, limits_.subsumption_budget)) return true;
      }
    }
    return false;
  }

  // Returns the id of the empty clause if one is derived.
  std::optional<ClauseId> generate(ClauseId given) {
    std::vector<Clause> fresh = factors(clauses_[given]);
    if (auto e = absorb(fresh)) return e;
    for (std::size_t k = 0; k < processed_.size(); ++k) {
      fresh = resolvents(clauses_[given], clauses_[processed_[k]]);
      if (auto e = absorb(fresh)) return e;
    }
    return std::nullopt;
  }

  std::optional<ClauseId> absorb(std::vector<Clause>& fresh) {
    for (auto& c : fresh) {
      ++stats_.generated;
      if (c.empty()) {
        ClauseId id = add(std::move(c));
        return id;
      }
      if (c.literals.size() > limits_.max_literals || clause_depth(c) > limits_.max_depth) {
        ++stats_.over_limits;
        continue;
      }
      if (is_tautology(c)) {
        ++stats_.tautologies;
        continue;
      }
      if (is_duplicate(c)) {
        ++stats_.duplicates;
        continue;
      }
      if (subsumed_by_processed(c)) {
        ++stats_.subsumed;
        continue;
      }
      add(std::move(c));
    }
    return std::nullopt;
  }

  ProofSearchRecord finish(Outcome outcome, std::optional<ClauseId> empty,
                           std::chrono::steady_clock::time_point start) {
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    stats_.seconds = elapsed.count();
    stats_.dropped_features = evaluator_.dropped_features();
    record_.outcome = outcome;
    record_.empty_clause = empty;
    record_.stats = stats_;
    record_.clauses = std::move(clauses_);
    log::info(problem_.name, ": ", to_string(outcome), " after ", stats_.processed, " processed, ",
              stats_.generated, " generated");
    return std::move(record_);
  }

  const Problem& problem_;
  const Strategy& strategy_;
  ProverLimits limits_;
  ClauseEvaluator evaluator_;
  std::vector<Queue> queues_;

  std::vector<Clause> clauses_;
  std::vector<State> state_;
  std::vector<ClauseId> processed_;
  std::vector<ClauseId> unprocessed_log_;
  std::size_t unprocessed_count_ = 0;
  std::map<std::pair<bool, SymbolId>, std::vector<ClauseId>> index_;
  std::unordered_map<std::size_t, std::vector<ClauseId>> variants_;

  ProverStats stats_;
  ProofSearchRecord record_;
};

}  // namespace

ProofSearchRecord prove(const Problem& problem, const Strategy& strategy, const ProverLimits& limits) {
  if (problem.clauses.empty()) throw Error(ErrorCode::InvalidArgument, "problem '" + problem.name + "' has no clauses");
  if (!problem.signature) throw Error(ErrorCode::InvalidArgument, "problem without a signature");
  return Prover(problem, strategy, limits).run();
}

}  // namespace enigma
