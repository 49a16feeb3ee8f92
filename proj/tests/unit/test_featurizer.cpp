#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "enigma/error.hpp"
#include "enigma/featurizer.hpp"
#include "enigma/tptp.hpp"

using namespace enigma;

namespace {

FeatureTriple t3(const Signature& sig, const char* a, const char* b, const char* c) {
  auto id = [&](const char* n) { return std::string(n) == "ε" ? kEpsilon : *sig.lookup(n); };
  return {id(a), id(b), id(c)};
}

// Counts 3-node root-directed walks by brute force over an explicit tree.
std::size_t walk_count(const FeatureTree& t) {
  std::size_t n = 0;
  for (const auto& child : t.children) {
    n += child.children.empty() ? 0 : child.children.size();
    n += walk_count(child);
  }
  return n;
}

std::size_t expected_total(const Clause& c, const Signature& sig) {
  std::size_t n = 0;
  for (const auto& lit : c.literals) {
    FeatureTree t = feature_tree(lit, sig);
    std::size_t w = walk_count(t);
    n += w == 0 ? 1 : w;  // a lone predicate node is padded once
  }
  return n;
}

}  // namespace

TEST(FeatureTree, EqualityLiteral) {
  Signature sig;
  Literal l = parse_literals("f(X,Y) = g(sko1,sko2(X))", sig).front();
  FeatureTree t = feature_tree(l, sig);
  EXPECT_EQ(t.label, kPositiveMarker);
  ASSERT_EQ(t.children.size(), 1u);
  const FeatureTree& eq = t.children[0];
  EXPECT_EQ(sig[eq.label].name, "=");
  ASSERT_EQ(eq.children.size(), 2u);
  EXPECT_EQ(sig[eq.children[0].label].name, "f");
  EXPECT_EQ(eq.children[0].children[0].label, kVariableMarker);
  EXPECT_EQ(eq.children[1].children[0].label, kSkolemMarker);
  EXPECT_EQ(eq.children[1].children[1].label, kSkolemMarker);
  EXPECT_EQ(eq.children[1].children[1].children[0].label, kVariableMarker);
}

TEST(FeatureTree, Shapes) {
  Signature sig;
  FeatureTree p = feature_tree(parse_literals("p(X)", sig).front(), sig);
  EXPECT_EQ(p.label, kPositiveMarker);
  EXPECT_EQ(p.children[0].children[0].label, kVariableMarker);
  FeatureTree q = feature_tree(parse_literals("~q", sig).front(), sig);
  EXPECT_EQ(q.label, kNegativeMarker);
  EXPECT_TRUE(q.children[0].children.empty());
}

TEST(LiteralFeatures, KnownMultisets) {
  Signature sig;
  auto l2 = parse_literals("p(X)", sig).front();
  auto nq = parse_literals("~q(X,Y)", sig).front();
  auto l1 = parse_literals("f(X,Y) = g(sko1,sko2(X))", sig).front();
  auto prop = parse_literals("r", sig).front();

  FeatureMultiset a = literal_features(l2, sig);
  EXPECT_EQ(a.distinct(), 1u);
  EXPECT_EQ(a.count(t3(sig, "⊕", "p", "⊛")), 1u);

  FeatureMultiset b = literal_features(nq, sig);
  EXPECT_EQ(b.distinct(), 1u);
  EXPECT_EQ(b.count(t3(sig, "⊖", "q", "⊛")), 2u);

  FeatureMultiset c = literal_features(l1, sig);
  EXPECT_EQ(c.distinct(), 5u);
  EXPECT_EQ(c.count(t3(sig, "⊕", "=", "f")), 1u);
  EXPECT_EQ(c.count(t3(sig, "⊕", "=", "g")), 1u);
  EXPECT_EQ(c.count(t3(sig, "=", "f", "⊛")), 2u);
  EXPECT_EQ(c.count(t3(sig, "=", "g", "⊙")), 2u);
  EXPECT_EQ(c.count(t3(sig, "g", "⊙", "⊛")), 1u);
  EXPECT_EQ(c.total(), 7u);

  FeatureMultiset d = literal_features(prop, sig);
  EXPECT_EQ(d.distinct(), 1u);
  EXPECT_EQ(d.count(t3(sig, "⊕", "r", "ε")), 1u);
}

TEST(LiteralFeatures, DebugFormat) {
  Signature sig;
  auto nq = parse_literals("~q(X,Y)", sig).front();
  EXPECT_EQ(format_features(literal_features(nq, sig), sig), "{(⊖,q,⊛)↦2}");
}

TEST(ClauseFeatures, UnionAndEmpty) {
  Signature sig;
  Clause c = parse_clause("p(X) | p(Y)", sig);
  FeatureMultiset phi = clause_features(c, sig);
  EXPECT_EQ(phi.distinct(), 1u);
  EXPECT_EQ(phi.count(t3(sig, "⊕", "p", "⊛")), 2u);
  EXPECT_TRUE(clause_features(parse_clause("$false", sig), sig).empty());
  Clause single = parse_clause("f(X,Y) = g(sko1,sko2(X))", sig);
  EXPECT_EQ(clause_features(single, sig), literal_features(single.literals[0], sig));
}

TEST(ClauseFeatures, Invariances) {
  Signature sig;
  std::mt19937_64 rng(5);
  const std::vector<std::string> clauses = {
      "p(f(X),Y) | ~q(g(Y,sko1),a) | X = esk3(Y)",
      "~r | p(a,b) | q(f(f(Z)),W) | ~s(Z)",
      "g(X,Y) != g(Y,X) | p(X,sko9(Y,X))",
  };
  for (const auto& text : clauses) {
    Clause c = parse_clause(text, sig);
    FeatureMultiset phi = clause_features(c, sig);
    EXPECT_EQ(phi.total(), expected_total(c, sig)) << text;
    for (int k = 0; k < 10; ++k) {
      Clause shuffled = c;
      std::shuffle(shuffled.literals.begin(), shuffled.literals.end(), rng);
      EXPECT_EQ(clause_features(shuffled, sig), phi);
    }
    std::string renamed = text;
    for (char& ch : renamed) {
      if (ch == 'X') ch = 'U';
      else if (ch == 'Y') ch = 'V';
    }
    EXPECT_EQ(clause_features(parse_clause(renamed, sig), sig), phi);
  }
}

TEST(FeatureIndex, Arithmetic) {
  EXPECT_EQ(feature_code(1, 2, 3, 4), 28u);
  EXPECT_EQ(feature_code(0, 0, 0, 4), 1u);
  std::vector<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 3; ++a) {
    for (std::uint64_t b = 0; b < 3; ++b) {
      for (std::uint64_t c = 0; c < 3; ++c) {
        std::uint64_t idx = feature_code(a, b, c, 3);
        seen.push_back(idx);
        std::uint64_t x, y, z;
        decode_feature_code(idx, 3, x, y, z);
        EXPECT_EQ(x, a);
        EXPECT_EQ(y, b);
        EXPECT_EQ(z, c);
      }
    }
  }
  std::sort(seen.begin(), seen.end());
  for (std::uint64_t i = 0; i < 27; ++i) EXPECT_EQ(seen[i], i + 1);
}

TEST(FeatureIndex, Preconditions) {
  Signature sig;
  sig.intern("p", 1, SymbolKind::Predicate);
  EXPECT_THROW(feature_index({0, 0, 0}, sig), Error);
  sig.freeze();
  EXPECT_EQ(feature_base(sig), 6u);
  EXPECT_EQ(feature_dimension(sig), 216u);
  EXPECT_EQ(feature_index({kPositiveMarker, 4, kEpsilon}, sig), 2u * 36 + 4 * 6 + 5 + 1);
  try {
    feature_index({0, 99, 0}, sig);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownSymbol);
  }
}

TEST(Vectorize, SortedAndConserving) {
  Signature sig;
  Literal l1 = parse_literals("f(X,Y) = g(sko1,sko2(X))", sig).front();
  sig.freeze();
  SparseVector v = vectorize(literal_features(l1, sig), sig);
  EXPECT_EQ(v.dimension, feature_dimension(sig));
  ASSERT_EQ(v.entries.size(), 5u);
  EXPECT_EQ(v.total(), 7.0);
  for (std::size_t i = 1; i < v.entries.size(); ++i) EXPECT_LT(v.entries[i - 1].index, v.entries[i].index);
  EXPECT_TRUE(vectorize(FeatureMultiset{}, sig).entries.empty());
  FeatureMultiset single;
  single.add({kPositiveMarker, kVariableMarker, kVariableMarker}, 3);
  SparseVector s = vectorize(single, sig);
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_EQ(s.entries[0].value, 3.0);
  EXPECT_EQ(s.entries[0].index, feature_index({kPositiveMarker, kVariableMarker, kVariableMarker}, sig));
  EXPECT_EQ(vectorize(literal_features(l1, sig), sig), v);
}

TEST(Vectorize, DropsUnknownSymbols) {
  Signature small;
  small.intern("p", 1, SymbolKind::Predicate);
  small.freeze();
  FeatureMultiset phi;
  phi.add({kPositiveMarker, 4, kVariableMarker}, 2);
  phi.add({kPositiveMarker, 17, kVariableMarker}, 3);
  std::uint64_t dropped = 0;
  SparseVector v = vectorize(phi, small, &dropped);
  EXPECT_EQ(v.entries.size(), 1u);
  EXPECT_EQ(dropped, 3u);
}

TEST(FeatureEncoder, AgreesWithVectorizeAcrossSignatures) {
  auto problem_sig = std::make_shared<Signature>();
  Problem p = parse_problem(
      "cnf(a, axiom, (p(f(X),Y) | ~q(g(Y,sko1),a))).\n"
      "cnf(b, axiom, (X = esk3(Y) | ~r)).\n"
      "cnf(c, axiom, (new_pred(b) | p(a,b))).\n",
      problem_sig);
  problem_sig->freeze();

  // Same names, different ids, and without new_pred.
  Signature target;
  target.intern("r", 0, SymbolKind::Predicate);
  target.intern("a", 0, SymbolKind::Function);
  target.intern("q", 2, SymbolKind::Predicate);
  target.intern("g", 2, SymbolKind::Function);
  target.intern("p", 2, SymbolKind::Predicate);
  target.intern("=", 2, SymbolKind::Predicate);
  target.intern("f", 1, SymbolKind::Function);
  target.intern("b", 0, SymbolKind::Function);
  target.freeze();

  FeatureEncoder enc(target);
  for (const auto& c : p.clauses) {
    // Reference: reparse the clause text directly into the target's names.
    Signature copy;
    for (const auto& s : target.symbols()) {
      if (s.id >= kNumMarkers) copy.intern(s.name, s.arity, s.kind);
    }
    Clause again = parse_clause(to_string(c, *problem_sig), copy);
    std::uint64_t dropped_ref = 0;
    copy.freeze();
    SparseVector want = vectorize(clause_features(again, copy), target, &dropped_ref);
    EXPECT_EQ(enc.encode(c, *problem_sig), want) << to_string(c, *problem_sig);
  }
  EXPECT_EQ(enc.dropped(), 1u);
}

TEST(FeatureEncoder, RejectsArityMismatchAsUnknown) {
  Signature target;
  target.intern("p", 1, SymbolKind::Predicate);
  target.freeze();
  Signature source;
  Clause c = parse_clause("p(a,b)", source);
  FeatureEncoder enc(target);
  SparseVector v = enc.encode(c, source);
  EXPECT_TRUE(v.entries.empty());
  EXPECT_GT(enc.dropped(), 0u);
}
