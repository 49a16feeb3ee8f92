#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "enigma/error.hpp"
#include "enigma/featurizer.hpp"
#include "enigma/guidance.hpp"
#include "enigma/linear_learner.hpp"
#include "enigma/log.hpp"
#include "enigma/record_io.hpp"
#include "enigma/saturation.hpp"
#include "enigma/sparse_io.hpp"
#include "enigma/tptp.hpp"
#include "enigma/training_pipeline.hpp"

namespace fs = std::filesystem;
using namespace enigma;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

const char* kStrategyHelp =
    "Strategy text: items joined by ',' or '+'. An item is 'baseline' or\n"
    "[FREQ*]CEF where CEF is FIFO, ClauseLen, SymbolCount or\n"
    "Learned(MODEL_FILE[,gamma=G]). FREQ defaults to 1, G to 0.2.\n"
    "'baseline' is 1*FIFO,4*SymbolCount. Example:\n"
    "  1*Learned(m.model,gamma=0.2),30*Learned(m.model,gamma=0.2)+baseline";

struct LimitFlags {
  std::uint64_t max_processed = ProverLimits{}.max_processed;
  std::uint64_t max_generated = ProverLimits{}.max_generated;
  double timeout = 0;
  std::size_t max_literals = ProverLimits{}.max_literals;
  std::size_t max_depth = ProverLimits{}.max_depth;

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-processed", max_processed, "Stop after this many given clauses")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-generated", max_generated, "Stop after this many generated clauses")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--timeout", timeout, "Wall-clock seconds per problem, 0 for none")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--max-literals", max_literals, "Discard generated clauses with more literals")
        ->capture_default_str();
    cmd->add_option("--max-depth", max_depth, "Discard generated clauses with deeper terms")
        ->capture_default_str();
  }

  ProverLimits limits() const {
    ProverLimits l;
    l.max_processed = max_processed;
    l.max_generated = max_generated;
    l.time_budget = timeout;
    l.max_literals = max_literals;
    l.max_depth = max_depth;
    return l;
  }
};

struct SolverFlags {
  double c = SolverConfig{}.c;
  double tolerance = SolverConfig{}.tolerance;
  std::uint32_t max_epochs = SolverConfig{}.max_epochs;

  void attach(CLI::App* cmd) {
    cmd->add_option("-c", c, "Misclassification cost of the squared-hinge SVM")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tolerance", tolerance, "Stop when the largest projected gradient is below this")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-epochs", max_epochs, "Upper bound on passes over the data")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }

  SolverConfig config(std::uint64_t seed) const {
    SolverConfig cfg;
    cfg.c = c;
    cfg.tolerance = tolerance;
    cfg.max_epochs = max_epochs;
    cfg.seed = seed;
    return cfg;
  }
};

struct GridFlags {
  std::vector<double> gammas = full_grid().gammas;
  std::vector<std::uint32_t> frequencies = full_grid().frequencies;
  bool no_model_alone = false;
  bool no_baseline = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--gammas", gammas, "Comma-separated length weights γ of the learned CEF")
        ->delimiter(',')
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--frequencies", frequencies, "Comma-separated frequencies of the learned CEF")
        ->delimiter(',')
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--no-model-alone", no_model_alone, "Skip the learned-CEF-only column");
    cmd->add_flag("--no-baseline", no_baseline, "Skip the base-strategy-only cell");
  }

  GridSpec spec() const { return GridSpec{gammas, frequencies, !no_model_alone, !no_baseline}; }
};

int usage_error(const std::string& message) {
  std::cerr << "enigma: " << message << '\n';
  return kExitUsage;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

Strategy strategy_flag(const std::string& flag, const std::string& text) {
  try {
    return parse_strategy(text);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ParseError && e.code() != ErrorCode::InvalidArgument) throw;
    throw Error(ErrorCode::InvalidArgument, flag + ": " + e.what());
  }
}

fs::path sidecar(const fs::path& examples) { return fs::path(examples.string() + ".sig"); }

std::string recall_text(const std::optional<double>& r) {
  if (!r) return "n/a";
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << *r;
  return os.str();
}

void print_accuracy(std::ostream& os, const AccuracyReport& a) {
  os << std::fixed << std::setprecision(4);
  os << "examples: " << a.total << " (" << a.positives << " positive, " << a.negatives << " negative)\n";
  os << "accuracy: " << a.accuracy << " (" << a.correct << "/" << a.total << ")\n";
  os << "positive recall: " << recall_text(a.positive_recall) << " (" << a.true_positives << "/"
     << a.positives << ")\n";
  os << "negative recall: " << recall_text(a.negative_recall) << " (" << a.true_negatives << "/"
     << a.negatives << ")\n";
  os.unsetf(std::ios::floatfield);
}

int cmd_featurize(const fs::path& file, const std::string& format, bool per_literal) {
  Problem p = load_problem(file);
  const Signature& sig = *p.signature;
  if (format == "sparse") p.signature->freeze();
  for (const Clause& c : p.clauses) {
    std::cout << c.name << ": " << to_string(c, sig) << '\n';
    if (per_literal) {
      for (const Literal& lit : c.literals) {
        std::cout << "  " << to_string(lit, sig) << " : " << format_features(literal_features(lit, sig), sig)
                  << '\n';
      }
    }
    FeatureMultiset phi = clause_features(c, sig);
    if (format == "sparse") {
      std::cout << "  ";
      SparseVector v = vectorize(phi, sig);
      for (std::size_t i = 0; i < v.entries.size(); ++i) {
        std::cout << (i ? " " : "") << v.entries[i].index << ':' << v.entries[i].value;
      }
      std::cout << '\n';
    } else {
      std::cout << "  " << format_features(phi, sig) << '\n';
    }
  }
  return 0;
}

int cmd_prove(const fs::path& file, const std::string& strategy_text, const LimitFlags& flags,
              const std::string& record_path, bool show_proof) {
  Problem p = load_problem(file);
  Strategy strategy = strategy_flag("--strategy", strategy_text);
  ProofSearchRecord r = prove(p, strategy, flags.limits());
  std::cout << "problem: " << r.problem << '\n';
  std::cout << "strategy: " << r.strategy << '\n';
  std::cout << "outcome: " << to_string(r.outcome) << '\n';
  std::cout << "processed: " << r.stats.processed << '\n';
  std::cout << "generated: " << r.stats.generated << '\n';
  std::cout << "kept: " << r.stats.kept << '\n';
  std::cout << "subsumed: " << r.stats.subsumed << '\n';
  std::cout << "dropped features: " << r.stats.dropped_features << '\n';
  if (show_proof && r.empty_clause) {
    std::cout << "proof:\n";
    for (ClauseId id : r.proof()) {
      const Clause* c = r.find(id);
      std::cout << "  " << id << ". " << to_string(*c, *r.signature);
      if (c->parents.empty()) {
        std::cout << "  [input " << c->name << "]";
      } else {
        std::cout << "  [";
        for (std::size_t i = 0; i < c->parents.size(); ++i) std::cout << (i ? "," : "") << c->parents[i];
        std::cout << "]";
      }
      std::cout << '\n';
    }
  }
  if (!record_path.empty()) save_record(r, record_path);
  return 0;
}

int cmd_extract(const std::vector<std::string>& records, const std::string& out, std::uint32_t k) {
  auto sig = std::make_shared<Signature>();
  std::vector<ProofSearchRecord> loaded;
  for (const auto& path : records) loaded.push_back(load_record(path, sig));
  ExampleSet all;
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    try {
      all.append(extract_examples(loaded[i]));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoProof) throw;
      throw Error(ErrorCode::NoProof, records[i] + ": " + e.what());
    }
  }
  sig->freeze();
  ExampleSet boosted = boost(all, k);
  TrainingSet data = make_training_set(boosted.positives, boosted.negatives, *sig);
  write_training_set(data, out);
  write_signature(*sig, sidecar(out));
  std::cout << "positives: " << all.positives.size() << " (x" << k << " = " << boosted.positives.size()
            << ")\nnegatives: " << all.negatives.size() << "\nwrote " << out << " and "
            << sidecar(out).string() << '\n';
  return 0;
}

int cmd_train(const fs::path& examples, const std::string& out, const SolverConfig& cfg) {
  TrainingSet data = read_training_set(examples);
  if (data.positives() == 0 || data.negatives() == 0) {
    throw Error(ErrorCode::EmptyClass, "empty class: '" + examples.string() + "' has " +
                                           std::to_string(data.positives()) + " positive and " +
                                           std::to_string(data.negatives()) + " negative examples");
  }
  fs::path sig_path = sidecar(examples);
  if (!fs::exists(sig_path)) {
    throw Error(ErrorCode::IoError, "missing symbol table '" + sig_path.string() + "' for '" +
                                        examples.string() + "'");
  }
  Signature sig = read_signature(sig_path);
  std::uint64_t dim = feature_dimension(sig);
  if (data.dimension > dim) {
    throw Error(ErrorCode::FormatError, "'" + examples.string() + "' uses feature index " +
                                            std::to_string(data.dimension) + " beyond the dimension " +
                                            std::to_string(dim) + " of '" + sig_path.string() + "'");
  }
  data.dimension = dim;
  Model model = train(data, sig, cfg);
  save_model(model, fs::path(out));
  std::cout << "trained on " << data.size() << " examples (" << data.positives() << " positive, "
            << data.negatives() << " negative)\n"
            << "epochs: " << model.info().epochs << (model.info().max_violation < cfg.tolerance ? "" : " (not converged)")
            << "\nwrote " << out << '\n';
  return 0;
}

int cmd_eval(const fs::path& model_path, const fs::path& examples) {
  Model model = load_model(model_path);
  TrainingSet data = read_training_set(examples);
  fs::path sig_path = sidecar(examples);
  if (fs::exists(sig_path)) {
    Signature from = read_signature(sig_path);
    if (from == model.signature()) {
      data.dimension = model.dimension();
    } else {
      std::uint64_t dropped = 0;
      data = remap_training_set(data, from, model.signature(), &dropped);
      if (dropped) log::info("eval: ", dropped, " features of '", examples.string(), "' unknown to the model");
    }
  } else {
    if (data.dimension > model.dimension()) {
      throw Error(ErrorCode::FormatError, "'" + examples.string() + "' has indices beyond the model dimension");
    }
    data.dimension = model.dimension();
  }
  print_accuracy(std::cout, accuracy(model, data));
  return 0;
}

int cmd_predict(const fs::path& model_path, const fs::path& file, double gamma) {
  Model model = load_model(model_path);
  Problem p = load_problem(file);
  FeatureEncoder encoder(model.signature());
  std::cout << "# label score weight clause\n";
  for (const Clause& c : p.clauses) {
    SparseVector x = encoder.encode(c, *p.signature);
    double s = model.score(x);
    Label y = model.classify(x);
    std::cout << (y == Label::Positive ? "+1" : "-1") << ' ' << s << ' '
              << weight(clause_len(c), y, gamma) << ' ' << to_string(c, *p.signature) << '\n';
  }
  if (encoder.dropped()) log::info("predict: ", encoder.dropped(), " features unknown to the model");
  return 0;
}

int cmd_grid(const fs::path& manifest, const std::string& model_path, const std::string& base_text,
             const GridFlags& grid, const LimitFlags& limits, unsigned jobs, const std::string& csv) {
  Corpus corpus = load_corpus(manifest);
  auto model = std::make_shared<const Model>(load_model(fs::path(model_path)));
  Strategy base = strategy_flag("--base", base_text);
  GridResults results = run_grid(corpus, model, model_path, base, grid.spec(), limits.limits(), jobs);
  std::cout << "problems: " << corpus.problems.size() << '\n' << results.to_table();
  std::cout << "greedy cover:";
  for (std::size_t i : greedy_cover(results)) std::cout << ' ' << results.cells[i].label();
  std::cout << '\n';
  if (!csv.empty()) write_text(csv, results.to_csv());
  return 0;
}

int cmd_loop(const fs::path& manifest, const std::string& base_text, const GridFlags& grid,
             const LimitFlags& limits, const SolverConfig& solver, std::uint32_t rounds,
             std::uint32_t boost_k, unsigned jobs, const std::string& models_dir) {
  Corpus corpus = load_corpus(manifest);
  Strategy base = strategy_flag("--base", base_text);
  LoopConfig cfg;
  cfg.rounds = rounds;
  cfg.grid = grid.spec();
  cfg.boost = boost_k;
  cfg.limits = limits.limits();
  cfg.solver = solver;
  cfg.jobs = jobs;
  LoopResult result = loop(corpus, base, cfg);
  std::cout << "problems: " << corpus.problems.size() << '\n' << result.report();
  if (!models_dir.empty()) {
    fs::create_directories(models_dir);
    for (std::size_t i = 0; i < result.models.size(); ++i) {
      save_model(*result.models[i], fs::path(models_dir) / (result.model_reports[i].name + ".model"));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("ENIGMA_LOG")) {
    std::string v(env);
    if (v != "quiet" && v != "info" && v != "debug") {
      return usage_error("ENIGMA_LOG must be quiet, info or debug (got '" + v + "')");
    }
  }

  CLI::App app{"Learned clause selection for saturation proving"};
  app.name("enigma");
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for every random choice (example shuffling)")->capture_default_str();

  auto* featurize = app.add_subcommand("featurize", "Print the feature multiset of every clause");
  std::string feat_file, feat_format = "multiset";
  bool per_literal = false;
  featurize->add_option("file", feat_file, "TPTP CNF problem")->required();
  featurize->add_option("--format", feat_format, "multiset or sparse (idx:count)")
      ->capture_default_str()
      ->check(CLI::IsMember({"multiset", "sparse"}));
  featurize->add_flag("--per-literal", per_literal, "Also print each literal's multiset");

  auto* prove_cmd = app.add_subcommand("prove", "Run the given-clause prover on one problem");
  prove_cmd->footer(kStrategyHelp);
  std::string prove_file, prove_strategy = "baseline", record_path;
  bool show_proof = false;
  LimitFlags prove_limits;
  prove_cmd->add_option("file", prove_file, "TPTP CNF problem")->required();
  prove_cmd->add_option("--strategy", prove_strategy, "Clause selection strategy")->capture_default_str();
  prove_limits.attach(prove_cmd);
  prove_cmd->add_option("--record", record_path, "Write the proof search record as JSON");
  prove_cmd->add_flag("--show-proof", show_proof, "Print the proof clauses");

  auto* extract = app.add_subcommand("extract", "Turn proof search records into training examples");
  std::vector<std::string> extract_records;
  std::string extract_out = "examples.txt";
  std::uint32_t extract_boost = 1;
  extract->add_option("records", extract_records, "Record JSON files")->required();
  extract->add_option("-o,--output", extract_out, "Sparse example file; the symbol table goes to <output>.sig")
      ->capture_default_str();
  extract->add_option("--boost", extract_boost, "Repeat every positive example this many times")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* train_cmd = app.add_subcommand("train", "Train a clause classifier");
  std::string train_examples, train_out = "model.txt";
  SolverFlags train_solver;
  train_cmd->add_option("examples", train_examples, "Sparse example file with a .sig sidecar")->required();
  train_solver.attach(train_cmd);
  train_cmd->add_option("-o,--output", train_out, "Model file")->capture_default_str();

  auto* eval_cmd = app.add_subcommand("eval", "Report accuracy and per-class recall");
  std::string eval_model, eval_examples;
  eval_cmd->add_option("model", eval_model, "Model file")->required();
  eval_cmd->add_option("examples", eval_examples, "Sparse example file")->required();

  auto* predict_cmd = app.add_subcommand("predict", "Classify every clause of a problem");
  std::string predict_model, predict_file;
  double predict_gamma = 0.2;
  predict_cmd->add_option("model", predict_model, "Model file")->required();
  predict_cmd->add_option("file", predict_file, "TPTP CNF problem")->required();
  predict_cmd->add_option("--gamma", predict_gamma, "Length weight for the printed clause weight")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);

  auto* grid_cmd = app.add_subcommand("grid", "Evaluate base + learned CEF over a γ/frequency grid");
  grid_cmd->footer(kStrategyHelp);
  std::string grid_manifest, grid_model, grid_base = "baseline", grid_csv;
  GridFlags grid_flags;
  LimitFlags grid_limits;
  unsigned grid_jobs = 1;
  grid_cmd->add_option("manifest", grid_manifest, "Corpus manifest")->required();
  grid_cmd->add_option("--model", grid_model, "Model file")->required();
  grid_cmd->add_option("--base", grid_base, "Base strategy")->capture_default_str();
  grid_flags.attach(grid_cmd);
  grid_limits.attach(grid_cmd);
  grid_cmd->add_option("--jobs", grid_jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  grid_cmd->add_option("--csv", grid_csv, "Also write the results as CSV");

  auto* loop_cmd = app.add_subcommand("loop", "Solve, train, evaluate the grid and retrain");
  loop_cmd->footer(kStrategyHelp);
  std::string loop_manifest, loop_base = "baseline", loop_models;
  GridFlags loop_grid;
  LimitFlags loop_limits;
  SolverFlags loop_solver;
  std::uint32_t loop_rounds = 1, loop_boost = 1;
  unsigned loop_jobs = 1;
  loop_cmd->add_option("manifest", loop_manifest, "Corpus manifest")->required();
  loop_cmd->add_option("--base", loop_base, "Base strategy")->capture_default_str();
  loop_cmd->add_option("--rounds", loop_rounds, "Grid-and-retrain rounds after the first model")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  loop_cmd->add_option("--boost", loop_boost, "Repeat every positive example this many times")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  loop_grid.attach(loop_cmd);
  loop_limits.attach(loop_cmd);
  loop_solver.attach(loop_cmd);
  loop_cmd->add_option("--jobs", loop_jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  loop_cmd->add_option("--models-dir", loop_models, "Save every trained model here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*featurize) return cmd_featurize(feat_file, feat_format, per_literal);
    if (*prove_cmd) return cmd_prove(prove_file, prove_strategy, prove_limits, record_path, show_proof);
    if (*extract) return cmd_extract(extract_records, extract_out, extract_boost);
    if (*train_cmd) return cmd_train(train_examples, train_out, train_solver.config(seed));
    if (*eval_cmd) return cmd_eval(eval_model, eval_examples);
    if (*predict_cmd) return cmd_predict(predict_model, predict_file, predict_gamma);
    if (*grid_cmd) {
      return cmd_grid(grid_manifest, grid_model, grid_base, grid_flags, grid_limits, grid_jobs, grid_csv);
    }
    if (*loop_cmd) {
      return cmd_loop(loop_manifest, loop_base, loop_grid, loop_limits, loop_solver.config(seed), loop_rounds,
                      loop_boost, loop_jobs, loop_models);
    }
  } catch (const Error& e) {
    std::cerr << "enigma: " << e.what() << '\n';
    bool usage = e.code() == ErrorCode::EmptyClass || e.code() == ErrorCode::InvalidArgument;
    return usage ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "enigma: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
