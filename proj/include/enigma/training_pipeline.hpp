#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "enigma/guidance.hpp"
#include "enigma/linear_learner.hpp"
#include "enigma/saturation.hpp"
#include "enigma/tptp.hpp"

namespace enigma {

struct Provenance {
  std::string problem;
  std::string search;  // strategy text of the run
};

/// Given clauses of proof searches, split by membership in the proof. All
/// clauses are over one signature (the corpus signature).
struct ExampleSet {
  std::vector<Clause> positives;
  std::vector<Clause> negatives;
  std::vector<Provenance> positive_provenance;
  std::vector<Provenance> negative_provenance;

  void append(const ExampleSet& other);
};

/// Positives are the given clauses that are ancestors of (or equal to) the
/// empty clause; every other given clause is negative. Throws NoProof.
ExampleSet extract_examples(const ProofSearchRecord& record);

// Repeats every positive k times; negatives are untouched.
ExampleSet boost(const ExampleSet& examples, std::uint32_t k);

struct Corpus {
  std::shared_ptr<Signature> signature;
  std::vector<Problem> problems;
};

/// Manifest: one problem per line, either `<path>` or `<id> <path>`, paths
/// relative to the manifest; `#` starts a comment. All problems are parsed
/// into one signature, which is frozen afterwards.
Corpus load_corpus(const std::filesystem::path& manifest);
Corpus make_corpus(const std::vector<std::pair<std::string, std::string>>& named_texts);

struct GridSpec {
  std::vector<double> gammas;
  std::vector<std::uint32_t> frequencies;
  bool include_model_alone = true;
  bool include_baseline_alone = true;
};

// γ ∈ {0,0.1,0.2,0.4,0.7,1,2,4,8}, frequencies {1,5,6,7,8,9,10,15,20,30,40,50}.
GridSpec full_grid();

enum class CellKind { Baseline, Combined, ModelAlone };

struct ProblemRun {
  Outcome outcome = Outcome::Saturated;
  std::uint64_t processed = 0;
  std::optional<ProofSearchRecord> proof;  // trimmed, present when solved
};

struct GridCell {
  CellKind kind = CellKind::Baseline;
  double gamma = 0;
  std::uint32_t frequency = 0;  // 0 for the baseline, unused for model-alone
  Strategy strategy;
  std::vector<ProblemRun> runs;  // parallel to GridResults::problems

  std::size_t solved() const;
  std::set<std::size_t> solved_set() const;
  std::string label() const;
};

struct GridResults {
  std::vector<std::string> problems;
  std::vector<GridCell> cells;

  std::string to_csv() const;
  // Rows are γ values, columns frequency 0 (baseline), the grid, then ∞.
  std::string to_table() const;
};

struct RunJob {
  std::size_t problem;
  const Strategy* strategy;
};

// Runs every job, `jobs` at a time. Results are in job order.
std::vector<ProofSearchRecord> run_jobs(const Corpus& corpus, const std::vector<RunJob>& work,
                                        const ProverLimits& limits, unsigned jobs);

/// For each γ: base + f⋆Learned(γ) for every frequency f, and Learned(γ)
/// alone; plus the base strategy alone once.
GridResults run_grid(const Corpus& corpus, std::shared_ptr<const Model> model,
                     const std::string& model_name, const Strategy& base, const GridSpec& grid,
                     const ProverLimits& limits, unsigned jobs = 1);

/// Greedy set cover: repeatedly take the set adding the most uncovered
/// elements, ties to the earlier set. Returns set indices in pick order.
std::vector<std::size_t> greedy_cover(const std::vector<std::set<std::size_t>>& solved);
std::vector<std::size_t> greedy_cover(const GridResults& results);

struct LoopConfig {
  std::uint32_t rounds = 1;
  GridSpec grid;
  std::uint32_t boost = 1;
  ProverLimits limits;
  SolverConfig solver;
  unsigned jobs = 1;
};

struct ModelReport {
  std::string name;
  std::size_t positives = 0;  // before boosting
  std::size_t negatives = 0;
  std::size_t training_examples = 0;  // after boosting
  AccuracyReport fit;                 // on the unboosted training data
};

struct RoundReport {
  std::uint32_t round = 0;
  std::string model;  // model guiding this round's grid
  std::size_t solved_before = 0;
  std::size_t solved_after = 0;
  std::size_t new_proofs = 0;
  std::vector<std::string> cover;  // labels of the greedily chosen cells
  std::string table;
};

struct LoopResult {
  std::size_t baseline_solved = 0;
  std::vector<std::shared_ptr<const Model>> models;
  std::vector<ModelReport> model_reports;
  std::vector<RoundReport> rounds;
  std::set<std::size_t> solved;
  bool stalled = false;
  std::string stall_reason;

  std::string report() const;
};

/// Solve with `base`, train M0 on its proofs, then per round: run the grid
/// with the latest model, keep the proofs of the greedily covering cells
/// (cumulatively, one per problem and strategy), and retrain on all proofs
/// so far with positives boosted `boost` times.
LoopResult loop(const Corpus& corpus, const Strategy& base, const LoopConfig& cfg);

}  // namespace enigma
