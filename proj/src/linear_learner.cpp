#include "enigma/linear_learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "enigma/error.hpp"
#include "enigma/log.hpp"

namespace enigma {

void TrainingSet::add(SparseVector v, Label label) {
  x.push_back(std::move(v));
  y.push_back(label);
}

std::size_t TrainingSet::positives() const {
  return static_cast<std::size_t>(std::count(y.begin(), y.end(), Label::Positive));
}

std::size_t TrainingSet::negatives() const { return y.size() - positives(); }

double dot(std::span<const double> w, const SparseVector& x) {
  double s = 0;
  for (const auto& e : x.entries) s += w[e.index - 1] * e.value;
  return s;
}

namespace {

void axpy(double a, const SparseVector& x, std::vector<double>& w) {
  for (const auto& e : x.entries) w[e.index - 1] += a * e.value;
}

double squared_norm(const SparseVector& x) {
  double s = 0;
  for (const auto& e : x.entries) s += e.value * e.value;
  return s;
}

void validate(const TrainingSet& data, const SolverConfig& cfg) {
  if (!(cfg.c > 0) || !std::isfinite(cfg.c)) {
    throw Error(ErrorCode::InvalidArgument, "penalty c must be a positive finite number");
  }
  if (!(cfg.tolerance > 0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (data.positives() == 0 || data.negatives() == 0) {
    throw Error(ErrorCode::EmptyClass,
                "empty class: training needs at least one positive and one negative example (got " +
                    std::to_string(data.positives()) + " positive, " +
                    std::to_string(data.negatives()) + " negative)");
  }
  for (const auto& v : data.x) {
    for (const auto& e : v.entries) {
      if (e.index == 0 || e.index > data.dimension) {
        throw Error(ErrorCode::InvalidArgument, "feature index " + std::to_string(e.index) +
                                                    " outside [1, " + std::to_string(data.dimension) + "]");
      }
      if (!std::isfinite(e.value)) {
        throw Error(ErrorCode::NonFinite, "feature value at index " + std::to_string(e.index) + " is not finite");
      }
    }
  }
}

std::vector<double> weights_from_alpha(const TrainingSet& data, std::span<const double> alpha) {
  std::vector<double> w(data.dimension, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (alpha[i] != 0) axpy(alpha[i] * sign(data.y[i]), data.x[i], w);
  }
  return w;
}

double dual_from(std::span<const double> w, std::span<const double> alpha, double c) {
  double ww = 0;
  for (double v : w) ww += v * v;
  double sum = 0, sq = 0;
  for (double a : alpha) {
    sum += a;
    sq += a * a;
  }
  return sum - 0.5 * ww - sq / (4 * c);
}

}  // namespace

double primal_objective(const TrainingSet& data, std::span<const double> w, double c) {
  double ww = 0;
  for (double v : w) ww += v * v;
  double loss = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    double margin = 1 - sign(data.y[i]) * dot(w, data.x[i]);
    if (margin > 0) loss += margin * margin;
  }
  return 0.5 * ww + c * loss;
}

double dual_objective(const TrainingSet& data, std::span<const double> alpha, double c) {
  std::vector<double> w = weights_from_alpha(data, alpha);
  return dual_from(w, alpha, c);
}

SolverResult solve_l2svm(const TrainingSet& data, const SolverConfig& cfg) {
  validate(data, cfg);
  const std::size_t l = data.size();
  const double diag = 0.5 / cfg.c;

  SolverResult result;
  result.w.assign(data.dimension, 0.0);
  result.alpha.assign(l, 0.0);
  std::vector<double>& w = result.w;
  std::vector<double>& alpha = result.alpha;

  std::vector<double> qd(l);
  for (std::size_t i = 0; i < l; ++i) qd[i] = diag + squared_norm(data.x[i]);

  std::vector<std::size_t> order(l);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed);

  SolverStats& stats = result.stats;
  while (stats.epochs < cfg.max_epochs) {
    std::shuffle(order.begin(), order.end(), rng);
    double max_pg = 0;
    for (std::size_t i : order) {
      const double yi = sign(data.y[i]);
      const double g = yi * dot(w, data.x[i]) - 1 + alpha[i] * diag;
      const double pg = alpha[i] == 0 ? std::min(g, 0.0) : g;
      max_pg = std::max(max_pg, std::fabs(pg));
      if (std::fabs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::max(old - g / qd[i], 0.0);
        axpy((alpha[i] - old) * yi, data.x[i], w);
      }
    }
    ++stats.epochs;
    stats.max_violation = max_pg;
    if (!std::isfinite(max_pg)) {
      throw Error(ErrorCode::NonFinite, "dual coordinate descent diverged (check feature scaling)");
    }
    if (cfg.track_dual) stats.dual_history.push_back(dual_from(w, alpha, cfg.c));
    log::debug("epoch ", stats.epochs, " max violation ", max_pg);
    if (max_pg < cfg.tolerance) {
      stats.converged = true;
      break;
    }
  }
  if (!std::all_of(w.begin(), w.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::NonFinite, "trained weights contain non-finite values");
  }
  stats.dual_objective = dual_from(w, alpha, cfg.c);
  log::info("trained on ", l, " examples: ", stats.epochs, " epochs, violation ",
            stats.max_violation, stats.converged ? "" : " (max epochs reached)");
  return result;
}

Model::Model(Signature signature, std::vector<double> weights, ModelInfo info)
    : signature_(std::move(signature)), weights_(std::move(weights)), info_(info) {
  signature_.freeze();
  if (weights_.size() != feature_dimension(signature_)) {
    throw Error(ErrorCode::InvalidArgument,
                "model weight vector has " + std::to_string(weights_.size()) +
                    " entries, signature requires " + std::to_string(feature_dimension(signature_)));
  }
  if (!std::all_of(weights_.begin(), weights_.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::NonFinite, "model weights contain non-finite values");
  }
}

TrainingSet make_training_set(std::span<const Clause> positives, std::span<const Clause> negatives,
                              const Signature& sig) {
  TrainingSet data;
  data.dimension = feature_dimension(sig);
  data.x.reserve(positives.size() + negatives.size());
  for (const auto& c : positives) data.add(vectorize(clause_features(c, sig), sig), Label::Positive);
  for (const auto& c : negatives) data.add(vectorize(clause_features(c, sig), sig), Label::Negative);
  return data;
}

Model train(const TrainingSet& data, const Signature& sig, const SolverConfig& cfg) {
  if (!sig.frozen()) throw Error(ErrorCode::InvalidArgument, "training requires a frozen signature");
  if (sig.size() > cfg.max_signature) {
    throw Error(ErrorCode::SignatureTooLarge,
                "signature has " + std::to_string(sig.size()) + " symbols, above the cap of " +
                    std::to_string(cfg.max_signature) + "; prune the signature or raise the cap");
  }
  if (data.dimension != feature_dimension(sig)) {
    throw Error(ErrorCode::InvalidArgument, "training set dimension does not match the signature");
  }
  SolverResult r = solve_l2svm(data, cfg);
  ModelInfo info{cfg.c, cfg.tolerance, r.stats.epochs, r.stats.max_violation, data.size()};
  return Model(sig, std::move(r.w), info);
}

Model train(std::span<const Clause> positives, std::span<const Clause> negatives,
            const Signature& sig, const SolverConfig& cfg) {
  if (positives.empty() || negatives.empty()) {
    throw Error(ErrorCode::EmptyClass, "empty class: " + std::to_string(positives.size()) +
                                           " positive and " + std::to_string(negatives.size()) +
                                           " negative clauses");
  }
  if (!sig.frozen()) throw Error(ErrorCode::InvalidArgument, "training requires a frozen signature");
  return train(make_training_set(positives, negatives, sig), sig, cfg);
}

Label predict(const Clause& c, const Model& model, const Signature& sig) {
  FeatureEncoder encoder(model.signature());
  return model.classify(encoder.encode(c, sig));
}

AccuracyReport accuracy(const Model& model, const TrainingSet& examples) {
  AccuracyReport r;
  r.total = examples.size();
  for (std::size_t i = 0; i < examples.size(); ++i) {
    Label got = model.classify(examples.x[i]);
    if (examples.y[i] == Label::Positive) {
      ++r.positives;
      if (got == Label::Positive) ++r.true_positives;
    } else {
      ++r.negatives;
      if (got == Label::Negative) ++r.true_negatives;
    }
  }
  r.correct = r.true_positives + r.true_negatives;
  r.accuracy = r.total ? static_cast<double>(r.correct) / r.total : 1.0;
  if (r.positives) r.positive_recall = static_cast<double>(r.true_positives) / r.positives;
  if (r.negatives) r.negative_recall = static_cast<double>(r.true_negatives) / r.negatives;
  return r;
}

}  // namespace enigma
