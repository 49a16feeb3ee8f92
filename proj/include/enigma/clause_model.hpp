#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace enigma {

using SymbolId = std::uint32_t;
using VarId = std::uint32_t;
using ClauseId = std::uint32_t;

enum class SymbolKind : std::uint8_t {
  Function,
  Predicate,
  VariableMarker,
  SkolemMarker,
  PosMarker,
  NegMarker,
};

const char* to_string(SymbolKind kind);
std::optional<SymbolKind> symbol_kind_from_string(std::string_view text);

// The four marker symbols occupy the first ids of every signature.
inline constexpr SymbolId kVariableMarker = 0;
inline constexpr SymbolId kSkolemMarker = 1;
inline constexpr SymbolId kPositiveMarker = 2;
inline constexpr SymbolId kNegativeMarker = 3;
inline constexpr SymbolId kNumMarkers = 4;

inline constexpr std::string_view kEqualityName = "=";

struct Symbol {
  SymbolId id = 0;
  std::string name;
  std::uint32_t arity = 0;
  SymbolKind kind = SymbolKind::Function;
  bool skolem = false;
};

/// Append-only symbol table shared by parsing, featurizing and the learner.
///
/// Ids are dense and stable: the i-th distinct name registered gets id i.
/// Once frozen, interning a new name throws; looking up or re-interning an
/// existing name is still allowed.
class Signature {
 public:
  Signature();
  explicit Signature(std::vector<std::string> skolem_prefixes);

  SymbolId intern(std::string_view name, std::uint32_t arity, SymbolKind kind);
  std::optional<SymbolId> lookup(std::string_view name) const;

  const Symbol& operator[](SymbolId id) const { return symbols_[id]; }
  std::size_t size() const { return symbols_.size(); }
  std::span<const Symbol> symbols() const { return symbols_; }

  bool is_skolem(std::string_view name) const;
  bool is_skolem(SymbolId id) const { return symbols_[id].skolem; }
  const std::vector<std::string>& skolem_prefixes() const { return skolem_prefixes_; }

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  bool operator==(const Signature& other) const;

 private:
  std::vector<Symbol> symbols_;
  std::map<std::string, SymbolId, std::less<>> lookup_;
  std::vector<std::string> skolem_prefixes_;
  bool frozen_ = false;
};

struct Term {
  enum class Kind : std::uint8_t { Variable, Application };

  Kind kind = Kind::Variable;
  std::uint32_t id = 0;  // variable index or symbol id
  std::vector<Term> args;

  static Term var(VarId v) { return Term{Kind::Variable, v, {}}; }
  static Term app(SymbolId f, std::vector<Term> args = {}) {
    return Term{Kind::Application, f, std::move(args)};
  }

  bool is_var() const { return kind == Kind::Variable; }

  bool operator==(const Term&) const = default;
  std::strong_ordering operator<=>(const Term&) const = default;
};

struct Literal {
  bool positive = true;
  SymbolId predicate = 0;
  std::vector<Term> args;

  bool operator==(const Literal&) const = default;
  std::strong_ordering operator<=>(const Literal&) const = default;
};

enum class ClauseRole : std::uint8_t { Input, Derived };

struct Clause {
  ClauseId id = 0;
  std::vector<Literal> literals;
  std::vector<ClauseId> parents;
  std::uint32_t age = 0;
  ClauseRole role = ClauseRole::Input;
  std::string name;
  VarId num_vars = 0;  // variables are 0..num_vars-1 after normalization

  bool empty() const { return literals.empty(); }
};

// Renumbers variables by first occurrence (left to right). Returns the count.
VarId normalize_variables(std::vector<Literal>& literals);

std::size_t term_len(const Term& t);
std::size_t literal_len(const Literal& lit);

/// Number of symbol occurrences in the clause. Predicates (including `=`),
/// functions, constants and every variable occurrence count one each;
/// polarity is not a symbol.
std::size_t clause_len(const Clause& c);
std::size_t clause_len(std::span<const Literal> literals);

std::size_t term_depth(const Term& t);
std::size_t clause_depth(const Clause& c);
std::size_t count_variable_occurrences(const Clause& c);

std::string to_string(const Term& t, const Signature& sig);
std::string to_string(const Literal& lit, const Signature& sig);
// Disjunction text, `$false` for the empty clause.
std::string to_string(std::span<const Literal> literals, const Signature& sig);
std::string to_string(const Clause& c, const Signature& sig);
// Full `cnf(name, role, (...)).` line.
std::string to_tptp(const Clause& c, const Signature& sig, std::string_view role = "axiom");

}  // namespace enigma
