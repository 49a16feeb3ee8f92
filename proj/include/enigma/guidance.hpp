#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "enigma/clause_model.hpp"
#include "enigma/featurizer.hpp"
#include "enigma/linear_learner.hpp"

namespace enigma {

inline constexpr double kPositivePreweight = 1.0;
inline constexpr double kNegativePreweight = 10.0;

// 1 for clauses the model classifies positive, 10 otherwise.
double preweight(const Clause& c, const Model& model, const Signature& sig);
double preweight(Label predicted);

// γ·len(C) + preweight(C, M). Lower is better.
double weight(const Clause& c, const Model& model, double gamma, const Signature& sig);
double weight(std::size_t len, Label predicted, double gamma);

struct LearnedWeight {
  std::shared_ptr<const Model> model;
  double gamma = 0.2;
  std::string model_name;  // how the strategy text refers to the model
};
struct ClauseLenWeight {};
struct FifoWeight {};
// len(C) with each variable occurrence counted ½.
struct SymbolCountWeight {};

using CefKind = std::variant<LearnedWeight, ClauseLenWeight, FifoWeight, SymbolCountWeight>;

/// Clause evaluation function: the unprocessed clause with the smallest
/// value is selected.
struct Cef {
  CefKind kind;

  std::string name() const;
  bool learned() const { return std::holds_alternative<LearnedWeight>(kind); }
};

Cef learned_cef(std::shared_ptr<const Model> model, double gamma, std::string model_name);

struct StrategyEntry {
  std::uint32_t frequency = 1;
  Cef cef;
};

/// Weighted round-robin over CEFs. Within each cycle of Σfᵢ selections the
/// first CEF is used f₁ times in a row, then the second f₂ times, and so on.
class Strategy {
 public:
  Strategy() = default;
  explicit Strategy(std::vector<StrategyEntry> entries);

  const std::vector<StrategyEntry>& entries() const { return entries_; }
  std::uint64_t cycle_length() const { return cycle_; }
  std::size_t size() const { return entries_.size(); }

  // Entry index used at selection `step` (0-based).
  std::size_t index_at(std::uint64_t step) const;

  Strategy with(std::uint32_t frequency, Cef cef) const;

 private:
  std::vector<StrategyEntry> entries_;
  std::vector<std::uint64_t> ends_;  // cumulative frequencies
  std::uint64_t cycle_ = 0;
};

const Cef& next_cef(const Strategy& s, std::uint64_t step);

// Stand-in for a hand-tuned prover strategy: `1*FIFO,4*SymbolCount`.
Strategy baseline_strategy();

// Evaluates a single clause; learned CEFs build a fresh encoder per call.
double evaluate(const Clause& c, const Cef& cef, const Signature& sig);

/// Per-search evaluator: keeps one feature encoder per model so that symbol
/// translation is done once. Single-threaded.
class ClauseEvaluator {
 public:
  ClauseEvaluator(const Strategy& strategy, const Signature& source);

  double evaluate(std::size_t entry, const Clause& c);
  std::uint64_t dropped_features() const;

 private:
  const Strategy* strategy_;
  const Signature* source_;
  std::map<const Model*, FeatureEncoder> encoders_;
};

using ModelResolver = std::function<std::shared_ptr<const Model>(const std::string& name)>;

// Loads models from disk on first reference and caches them.
ModelResolver file_model_resolver();

/// Strategy text grammar:
///
///   strategy := item (( ',' | '+' ) item)*
///   item     := 'baseline' | [FREQ '*'] cef
///   cef      := 'FIFO' | 'ClauseLen' | 'SymbolCount'
///             | 'Learned(' MODEL [',gamma=' REAL] ')'
///
/// `baseline` expands to the entries of baseline_strategy(). FREQ defaults
/// to 1 and gamma to 0.2.
Strategy parse_strategy(std::string_view text, const ModelResolver& resolver = file_model_resolver());
std::string format_strategy(const Strategy& s);

}  // namespace enigma
