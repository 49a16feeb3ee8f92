#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "enigma/clause_model.hpp"
#include "enigma/guidance.hpp"
#include "enigma/tptp.hpp"

namespace enigma {

/// Triangular substitution. Bindings point into the terms that were unified,
/// so those terms must outlive the substitution.
class Substitution {
 public:
  explicit Substitution(VarId num_vars = 0) : bindings_(num_vars, nullptr) {}

  const Term* binding(VarId v) const { return v < bindings_.size() ? bindings_[v] : nullptr; }
  void bind(VarId v, const Term* t);
  VarId size() const { return static_cast<VarId>(bindings_.size()); }

  std::size_t mark() const { return trail_.size(); }
  void undo(std::size_t mark);

  // Follows variable bindings until an unbound variable or an application.
  const Term& deref(const Term& t) const;

  Term apply(const Term& t) const;
  Literal apply(const Literal& lit) const;

 private:
  std::vector<const Term*> bindings_;
  std::vector<VarId> trail_;
};

// Most general unifier with occurs check; both terms share one variable space.
std::optional<Substitution> unify(const Term& a, const Term& b);
// Extends `subst`; on failure the bindings added by this call are undone.
bool unify_into(const Term& a, const Term& b, Substitution& subst);

// Offsets every variable by `offset` (renaming apart).
Term shift_variables(const Term& t, VarId offset);
Literal shift_variables(const Literal& lit, VarId offset);

// Removes repeated literals and renumbers variables.
Clause make_derived(std::vector<Literal> literals, std::vector<ClauseId> parents);

bool is_tautology(const Clause& c);

/// All binary resolvents between `given` and a renamed-apart copy of
/// `partner`. Parents are recorded as {given.id, partner.id}.
std::vector<Clause> resolvents(const Clause& given, const Clause& partner);

/// All binary factors (two same-sign literals unified, one deleted).
std::vector<Clause> factors(const Clause& c);

inline constexpr std::size_t kDefaultSubsumptionBudget = 20000;

/// True iff Cσ is a sub-multiset of D for some σ. The search gives up and
/// answers false after `budget` matching steps.
bool subsumes(const Clause& c, const Clause& d, std::size_t budget = kDefaultSubsumptionBudget);

struct ProverLimits {
  std::uint64_t max_processed = 1000;
  std::uint64_t max_generated = 200000;
  double time_budget = 0;  // seconds; 0 disables the wall-clock limit
  std::size_t max_literals = 12;
  std::size_t max_depth = 8;
  bool equality_axioms = true;
  std::size_t subsumption_budget = kDefaultSubsumptionBudget;
};

struct ProverStats {
  std::uint64_t processed = 0;
  std::uint64_t generated = 0;
  std::uint64_t kept = 0;
  std::uint64_t subsumed = 0;
  std::uint64_t tautologies = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t over_limits = 0;
  std::uint64_t dropped_features = 0;
  double seconds = 0;
};

enum class Outcome { ProofFound, Saturated, ResourceOut };

const char* to_string(Outcome outcome);
std::optional<Outcome> outcome_from_string(std::string_view text);

struct ProofSearchRecord {
  std::string problem;
  std::string strategy;
  Outcome outcome = Outcome::Saturated;
  std::vector<ClauseId> given_sequence;
  std::vector<Clause> clauses;  // sorted by id; parents give the derivation DAG
  std::optional<ClauseId> empty_clause;
  ProverStats stats;
  std::shared_ptr<const Signature> signature;

  const Clause* find(ClauseId id) const;
  // Ancestors of the empty clause, including itself; sorted. Empty if no proof.
  std::vector<ClauseId> proof() const;
  // Keeps only given clauses, the proof and their ancestors.
  ProofSearchRecord trimmed() const;
};

// Reflexivity, symmetry, transitivity and congruence for the symbols used in
// the problem. Empty when `=` does not occur.
std::vector<Clause> equality_axioms(const Problem& problem);

/// Given-clause saturation: at each step the strategy picks a CEF whose
/// smallest-weight unprocessed clause becomes the given clause; it is resolved
/// with every processed clause (itself included) and factored. Newcomers that
/// are tautologies, duplicates, over the size caps, or forward-subsumed by a
/// processed clause are dropped.
ProofSearchRecord prove(const Problem& problem, const Strategy& strategy,
                        const ProverLimits& limits = {});

}  // namespace enigma
