#include "enigma/featurizer.hpp"

#include <algorithm>

#include "enigma/error.hpp"

namespace enigma {

void FeatureMultiset::add(const FeatureTriple& f, std::uint32_t n) {
  if (n == 0) return;
  counts_[f] += n;
}

void FeatureMultiset::merge(const FeatureMultiset& other) {
  for (const auto& [f, n] : other.counts_) counts_[f] += n;
}

std::uint32_t FeatureMultiset::count(const FeatureTriple& f) const {
  auto it = counts_.find(f);
  return it == counts_.end() ? 0 : it->second;
}

std::uint64_t FeatureMultiset::total() const {
  std::uint64_t n = 0;
  for (const auto& [f, c] : counts_) n += c;
  return n;
}

namespace {

SymbolId node_label(const Term& t, const Signature& sig) {
  if (t.is_var()) return kVariableMarker;
  if (sig.is_skolem(t.id)) return kSkolemMarker;
  return t.id;
}

SymbolId root_label(const Literal& lit) { return lit.positive ? kPositiveMarker : kNegativeMarker; }

FeatureTree term_tree(const Term& t, const Signature& sig) {
  FeatureTree node{node_label(t, sig), {}};
  node.children.reserve(t.args.size());
  for (const auto& a : t.args) node.children.push_back(term_tree(a, sig));
  return node;
}

void collect(const Term& t, SymbolId grandparent, SymbolId parent, const Signature& sig,
             FeatureMultiset& out) {
  SymbolId label = node_label(t, sig);
  out.add({grandparent, parent, label});
  for (const auto& a : t.args) collect(a, parent, label, sig, out);
}

}  // namespace

FeatureTree feature_tree(const Literal& lit, const Signature& sig) {
  FeatureTree predicate{lit.predicate, {}};
  predicate.children.reserve(lit.args.size());
  for (const auto& a : lit.args) predicate.children.push_back(term_tree(a, sig));
  FeatureTree root{root_label(lit), {}};
  root.children.push_back(std::move(predicate));
  return root;
}

FeatureMultiset literal_features(const Literal& lit, const Signature& sig) {
  FeatureMultiset out;
  SymbolId root = root_label(lit);
  if (lit.args.empty()) {
    out.add({root, lit.predicate, kEpsilon});
    return out;
  }
  for (const auto& a : lit.args) collect(a, root, lit.predicate, sig, out);
  return out;
}

FeatureMultiset clause_features(const Clause& c, const Signature& sig) {
  FeatureMultiset out;
  for (const auto& lit : c.literals) out.merge(literal_features(lit, sig));
  return out;
}

std::uint64_t feature_code(std::uint64_t c1, std::uint64_t c2, std::uint64_t c3, std::uint64_t base) {
  return c1 * base * base + c2 * base + c3 + 1;
}

void decode_feature_code(std::uint64_t index, std::uint64_t base, std::uint64_t& c1,
                         std::uint64_t& c2, std::uint64_t& c3) {
  std::uint64_t k = index - 1;
  c3 = k % base;
  k /= base;
  c2 = k % base;
  c1 = k / base;
}

std::uint64_t feature_base(const Signature& sig) { return sig.size() + 1; }

std::uint64_t feature_dimension(const Signature& sig) {
  std::uint64_t b = feature_base(sig);
  return b * b * b;
}

namespace {

std::int64_t frozen_code(SymbolId id, const Signature& sig) {
  if (id == kEpsilon) return static_cast<std::int64_t>(sig.size());
  if (id >= sig.size()) return -1;
  return id;
}

void require_frozen(const Signature& sig) {
  if (!sig.frozen()) {
    throw Error(ErrorCode::InvalidArgument, "feature indexing requires a frozen signature");
  }
}

}  // namespace

std::uint64_t feature_index(const FeatureTriple& f, const Signature& sig) {
  require_frozen(sig);
  std::int64_t c[3] = {frozen_code(f.s1, sig), frozen_code(f.s2, sig), frozen_code(f.s3, sig)};
  for (auto code : c) {
    if (code < 0) throw Error(ErrorCode::UnknownSymbol, "feature uses a symbol outside the signature");
  }
  return feature_code(c[0], c[1], c[2], feature_base(sig));
}

double SparseVector::total() const {
  double t = 0;
  for (const auto& e : entries) t += e.value;
  return t;
}

SparseVector vectorize(const FeatureMultiset& features, const Signature& sig, std::uint64_t* dropped) {
  require_frozen(sig);
  SparseVector v;
  v.dimension = feature_dimension(sig);
  std::uint64_t base = feature_base(sig);
  v.entries.reserve(features.distinct());
  for (const auto& [f, n] : features) {
    std::int64_t c1 = frozen_code(f.s1, sig), c2 = frozen_code(f.s2, sig), c3 = frozen_code(f.s3, sig);
    if (c1 < 0 || c2 < 0 || c3 < 0) {
      if (dropped) *dropped += n;
      continue;
    }
    v.entries.push_back({feature_code(c1, c2, c3, base), static_cast<double>(n)});
  }
  // Map order over symbol ids is index order except where ε (largest id) sorts.
  std::sort(v.entries.begin(), v.entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  return v;
}

FeatureEncoder::FeatureEncoder(const Signature& target)
    : target_(&target), base_(feature_base(target)), dimension_(feature_dimension(target)) {
  require_frozen(target);
}

std::int64_t FeatureEncoder::code_of(SymbolId source_id, const Signature& source) {
  constexpr std::int64_t kUnresolved = -2;
  if (source_id >= codes_.size()) codes_.resize(source.size(), kUnresolved);
  std::int64_t& code = codes_[source_id];
  if (code == kUnresolved) {
    if (&source == target_) {
      code = source_id;
    } else if (auto id = target_->lookup(source[source_id].name)) {
      const Symbol& t = (*target_)[*id];
      const Symbol& s = source[source_id];
      code = (t.arity == s.arity && t.kind == s.kind) ? static_cast<std::int64_t>(*id) : kUnknown;
    } else {
      code = kUnknown;
    }
  }
  return code;
}

std::int64_t FeatureEncoder::label_code(const Term& t, const Signature& source) {
  if (t.is_var()) return kVariableMarker;
  if (source.is_skolem(t.id)) return kSkolemMarker;
  return code_of(t.id, source);
}

void FeatureEncoder::walk(const Term& t, std::int64_t grandparent, std::int64_t parent,
                          const Signature& source) {
  std::int64_t label = label_code(t, source);
  if (grandparent < 0 || parent < 0 || label < 0) {
    ++dropped_;
  } else {
    scratch_.push_back(feature_code(grandparent, parent, label, base_));
  }
  for (const auto& a : t.args) walk(a, parent, label, source);
}

SparseVector FeatureEncoder::encode(const Clause& c, const Signature& source) {
  return encode(std::span<const Literal>(c.literals), source);
}

SparseVector FeatureEncoder::encode(std::span<const Literal> literals, const Signature& source) {
  if (cached_source_ != &source) {
    codes_.clear();
    cached_source_ = &source;
  }
  scratch_.clear();
  const auto epsilon = static_cast<std::int64_t>(target_->size());
  for (const auto& lit : literals) {
    std::int64_t root = lit.positive ? kPositiveMarker : kNegativeMarker;
    std::int64_t pred = code_of(lit.predicate, source);
    if (lit.args.empty()) {
      if (pred < 0) {
        ++dropped_;
      } else {
        scratch_.push_back(feature_code(root, pred, epsilon, base_));
      }
      continue;
    }
    for (const auto& a : lit.args) walk(a, root, pred, source);
  }
  std::sort(scratch_.begin(), scratch_.end());
  SparseVector v;
  v.dimension = dimension_;
  for (std::uint64_t idx : scratch_) {
    if (!v.entries.empty() && v.entries.back().index == idx) {
      v.entries.back().value += 1;
    } else {
      v.entries.push_back({idx, 1});
    }
  }
  return v;
}

std::string symbol_label(SymbolId id, const Signature& sig) {
  if (id == kEpsilon) return "ε";
  if (id >= sig.size()) return "?" + std::to_string(id);
  return sig[id].name;
}

std::string format_features(const FeatureMultiset& features, const Signature& sig) {
  std::string out = "{";
  bool first = true;
  for (const auto& [f, n] : features) {
    if (!first) out += ", ";
    first = false;
    out += "(" + symbol_label(f.s1, sig) + "," + symbol_label(f.s2, sig) + "," +
           symbol_label(f.s3, sig) + ")↦" + std::to_string(n);
  }
  out += "}";
  return out;
}

}  // namespace enigma
