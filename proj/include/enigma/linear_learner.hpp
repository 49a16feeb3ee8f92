#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "enigma/clause_model.hpp"
#include "enigma/featurizer.hpp"

namespace enigma {

enum class Label : std::int8_t { Negative = -1, Positive = 1 };

inline int sign(Label y) { return static_cast<int>(y); }

struct TrainingSet {
  std::uint64_t dimension = 0;
  std::vector<SparseVector> x;
  std::vector<Label> y;

  void add(SparseVector v, Label label);
  std::size_t size() const { return x.size(); }
  std::size_t positives() const;
  std::size_t negatives() const;
};

struct SolverConfig {
  double c = 1.0;
  double tolerance = 1e-3;
  std::uint32_t max_epochs = 1000;
  std::uint64_t seed = 0;
  // Refuse signatures larger than this; w is dense over (|Σ|+1)³ entries.
  std::size_t max_signature = 200;
  // Record the dual objective after every epoch (costs one pass over w).
  bool track_dual = false;
};

struct SolverStats {
  std::uint32_t epochs = 0;
  double max_violation = 0;  // projected-gradient violation of the last epoch
  bool converged = false;
  double dual_objective = 0;
  std::vector<double> dual_history;  // filled when track_dual is set
};

struct SolverResult {
  std::vector<double> w;
  std::vector<double> alpha;
  SolverStats stats;
};

/// L2-regularized squared-hinge linear SVM without bias:
///
///   min_w  ½ wᵀw + c Σᵢ max(1 − yᵢ wᵀxᵢ, 0)²
///
/// solved in the dual by coordinate descent. Each coordinate step exactly
/// minimizes ½ αᵀ(Q + D)α − eᵀα in αᵢ ≥ 0, with Qᵢⱼ = yᵢyⱼ xᵢᵀxⱼ and
/// D = I/(2c); w = Σ αᵢ yᵢ xᵢ is maintained incrementally. Example order is
/// reshuffled every epoch from `seed`. Stops once the largest projected
/// gradient in an epoch drops below `tolerance`.
///
/// Throws EmptyClass when a label is missing, NonFinite on divergence.
SolverResult solve_l2svm(const TrainingSet& data, const SolverConfig& cfg);

double primal_objective(const TrainingSet& data, std::span<const double> w, double c);
// Maximization form: eᵀα − ½‖w‖² − Σ αᵢ²/(4c), with w = Σ αᵢyᵢxᵢ.
double dual_objective(const TrainingSet& data, std::span<const double> alpha, double c);

double dot(std::span<const double> w, const SparseVector& x);

struct ModelInfo {
  double c = 1.0;
  double tolerance = 0;
  std::uint32_t epochs = 0;
  double max_violation = 0;
  std::uint64_t examples = 0;
};

/// A trained classifier: a frozen signature snapshot and a dense weight
/// vector over its (|Σ|+1)³ features. Immutable once constructed.
class Model {
 public:
  Model(Signature signature, std::vector<double> weights, ModelInfo info = {});

  const Signature& signature() const { return signature_; }
  std::span<const double> weights() const { return weights_; }
  std::uint64_t dimension() const { return weights_.size(); }
  const ModelInfo& info() const { return info_; }

  double score(const SparseVector& x) const { return dot(weights_, x); }
  Label classify(const SparseVector& x) const {
    return score(x) > 0 ? Label::Positive : Label::Negative;
  }

 private:
  Signature signature_;
  std::vector<double> weights_;
  ModelInfo info_;
};

TrainingSet make_training_set(std::span<const Clause> positives, std::span<const Clause> negatives,
                              const Signature& sig);

Model train(const TrainingSet& data, const Signature& sig, const SolverConfig& cfg = {});
Model train(std::span<const Clause> positives, std::span<const Clause> negatives,
            const Signature& sig, const SolverConfig& cfg = {});

// Positive iff wᵀx > 0 (strict).
Label predict(const Clause& c, const Model& model, const Signature& sig);

struct AccuracyReport {
  double accuracy = 1.0;
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t true_positives = 0;
  std::size_t true_negatives = 0;
  // Undefined (nullopt) when the class is absent.
  std::optional<double> positive_recall;
  std::optional<double> negative_recall;
};

AccuracyReport accuracy(const Model& model, const TrainingSet& examples);

void save_model(const Model& model, std::ostream& out);
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(std::istream& in, std::string_view source = "<model>");
Model load_model(const std::filesystem::path& path);

}  // namespace enigma
