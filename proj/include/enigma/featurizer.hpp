#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "enigma/clause_model.hpp"

namespace enigma {

// Padding symbol for literal trees too shallow to contain a 3-node walk.
// Its code in a frozen signature is |Σ|, so the feature base is |Σ|+1.
inline constexpr SymbolId kEpsilon = std::numeric_limits<SymbolId>::max();

struct FeatureTriple {
  SymbolId s1 = 0;
  SymbolId s2 = 0;
  SymbolId s3 = 0;

  bool operator==(const FeatureTriple&) const = default;
  std::strong_ordering operator<=>(const FeatureTriple&) const = default;
};

/// Multiset of features; zero counts are never stored.
class FeatureMultiset {
 public:
  using Map = std::map<FeatureTriple, std::uint32_t>;

  void add(const FeatureTriple& f, std::uint32_t n = 1);
  void merge(const FeatureMultiset& other);

  std::uint32_t count(const FeatureTriple& f) const;
  std::uint64_t total() const;
  std::size_t distinct() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }

  Map::const_iterator begin() const { return counts_.begin(); }
  Map::const_iterator end() const { return counts_.end(); }

  bool operator==(const FeatureMultiset&) const = default;

 private:
  Map counts_;
};

struct FeatureTree {
  SymbolId label = 0;
  std::vector<FeatureTree> children;
};

/// The literal's syntax tree under a ⊕/⊖ root, with variables relabeled ⊛
/// and Skolem symbols relabeled ⊙.
FeatureTree feature_tree(const Literal& lit, const Signature& sig);

// All root-directed walks of three nodes. Propositional atoms yield (⊕|⊖, p, ε).
FeatureMultiset literal_features(const Literal& lit, const Signature& sig);
FeatureMultiset clause_features(const Clause& c, const Signature& sig);

// Raw index arithmetic: c1·B² + c2·B + c3 + 1 over codes in [0, B).
std::uint64_t feature_code(std::uint64_t c1, std::uint64_t c2, std::uint64_t c3, std::uint64_t base);
void decode_feature_code(std::uint64_t index, std::uint64_t base, std::uint64_t& c1,
                         std::uint64_t& c2, std::uint64_t& c3);

std::uint64_t feature_base(const Signature& sig);       // |Σ|+1
std::uint64_t feature_dimension(const Signature& sig);  // (|Σ|+1)³

/// Index of a feature in [1, (|Σ|+1)³]. Throws UnknownSymbol if a component
/// is not registered in `sig`, InvalidArgument if `sig` is not frozen.
std::uint64_t feature_index(const FeatureTriple& f, const Signature& sig);

struct SparseEntry {
  std::uint64_t index = 0;
  double value = 0;

  bool operator==(const SparseEntry&) const = default;
};

struct SparseVector {
  std::uint64_t dimension = 0;
  std::vector<SparseEntry> entries;  // strictly increasing indices in [1, dimension]

  double total() const;
  bool operator==(const SparseVector&) const = default;
};

/// Entry at feature_index(φ) is Φ(φ). Triples over unregistered symbols are
/// dropped; `dropped` (if given) is incremented by their total count.
SparseVector vectorize(const FeatureMultiset& features, const Signature& sig,
                       std::uint64_t* dropped = nullptr);

/// Maps clauses over an arbitrary source signature into the feature space of
/// a frozen target signature, matching symbols by name. One encoder serves
/// one source signature and is not thread-safe.
class FeatureEncoder {
 public:
  explicit FeatureEncoder(const Signature& target);

  SparseVector encode(const Clause& c, const Signature& source);
  SparseVector encode(std::span<const Literal> literals, const Signature& source);

  std::uint64_t dropped() const { return dropped_; }
  std::uint64_t dimension() const { return dimension_; }

 private:
  static constexpr std::int64_t kUnknown = -1;

  std::int64_t code_of(SymbolId source_id, const Signature& source);
  void walk(const Term& t, std::int64_t grandparent, std::int64_t parent, const Signature& source);
  std::int64_t label_code(const Term& t, const Signature& source);

  const Signature* target_;
  const Signature* cached_source_ = nullptr;
  std::uint64_t base_;
  std::uint64_t dimension_;
  std::vector<std::int64_t> codes_;
  std::vector<std::uint64_t> scratch_;
  std::uint64_t dropped_ = 0;
};

// Debug view, e.g. `{(⊕,P,⊛)↦1, (⊖,Q,⊛)↦2}`.
std::string format_features(const FeatureMultiset& features, const Signature& sig);
std::string symbol_label(SymbolId id, const Signature& sig);

}  // namespace enigma
