#include "enigma/training_pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "enigma/error.hpp"
#include "enigma/log.hpp"
#include "text_util.hpp"

namespace enigma {

void ExampleSet::append(const ExampleSet& other) {
  positives.insert(positives.end(), other.positives.begin(), other.positives.end());
  negatives.insert(negatives.end(), other.negatives.begin(), other.negatives.end());
  positive_provenance.insert(positive_provenance.end(), other.positive_provenance.begin(),
                             other.positive_provenance.end());
  negative_provenance.insert(negative_provenance.end(), other.negative_provenance.begin(),
                             other.negative_provenance.end());
}

ExampleSet extract_examples(const ProofSearchRecord& record) {
  if (record.outcome != Outcome::ProofFound || !record.empty_clause) {
    throw Error(ErrorCode::NoProof, "record for '" + record.problem + "' has no proof (outcome " +
                                        to_string(record.outcome) + ")");
  }
  std::vector<ClauseId> proof = record.proof();
  std::set<ClauseId> seen;
  ExampleSet out;
  Provenance prov{record.problem, record.strategy};
  for (ClauseId id : record.given_sequence) {
    if (!seen.insert(id).second) continue;
    const Clause* c = record.find(id);
    if (!c) throw Error(ErrorCode::FormatError, "given clause " + std::to_string(id) + " missing");
    if (std::binary_search(proof.begin(), proof.end(), id)) {
      out.positives.push_back(*c);
      out.positive_provenance.push_back(prov);
    } else {
      out.negatives.push_back(*c);
      out.negative_provenance.push_back(prov);
    }
  }
  return out;
}

ExampleSet boost(const ExampleSet& examples, std::uint32_t k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "boost factor must be at least 1");
  ExampleSet out;
  out.negatives = examples.negatives;
  out.negative_provenance = examples.negative_provenance;
  out.positives.reserve(examples.positives.size() * k);
  for (std::uint32_t r = 0; r < k; ++r) {
    out.positives.insert(out.positives.end(), examples.positives.begin(), examples.positives.end());
    out.positive_provenance.insert(out.positive_provenance.end(), examples.positive_provenance.begin(),
                                   examples.positive_provenance.end());
  }
  return out;
}

Corpus load_corpus(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error(ErrorCode::IoError, "cannot open corpus manifest '" + manifest.string() + "'");
  Corpus corpus{std::make_shared<Signature>(), {}};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto fields = detail::split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() > 2) {
      throw Error(ErrorCode::FormatError, manifest.string() + ":" + std::to_string(lineno) +
                                              ": expected '<path>' or '<id> <path>'");
    }
    std::filesystem::path path(fields.back());
    if (path.is_relative()) path = manifest.parent_path() / path;
    Problem p = load_problem(path, corpus.signature);
    if (fields.size() == 2) p.name = std::string(fields[0]);
    corpus.problems.push_back(std::move(p));
  }
  corpus.signature->freeze();
  return corpus;
}

Corpus make_corpus(const std::vector<std::pair<std::string, std::string>>& named_texts) {
  Corpus corpus{std::make_shared<Signature>(), {}};
  for (const auto& [name, text] : named_texts) {
    corpus.problems.push_back(parse_problem(text, corpus.signature, name, name));
  }
  corpus.signature->freeze();
  return corpus;
}

GridSpec full_grid() {
  return GridSpec{{0, 0.1, 0.2, 0.4, 0.7, 1, 2, 4, 8}, {1, 5, 6, 7, 8, 9, 10, 15, 20, 30, 40, 50}, true, true};
}

std::size_t GridCell::solved() const {
  return static_cast<std::size_t>(std::count_if(
      runs.begin(), runs.end(), [](const ProblemRun& r) { return r.outcome == Outcome::ProofFound; }));
}

std::set<std::size_t> GridCell::solved_set() const {
  std::set<std::size_t> s;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].outcome == Outcome::ProofFound) s.insert(i);
  }
  return s;
}

std::string GridCell::label() const {
  switch (kind) {
    case CellKind::Baseline: return "base";
    case CellKind::Combined:
      return "base+" + std::to_string(frequency) + "*gamma=" + detail::format_double(gamma);
    case CellKind::ModelAlone: return "model,gamma=" + detail::format_double(gamma);
  }
  return "";
}

std::string GridResults::to_csv() const {
  std::ostringstream os;
  os << "kind,gamma,frequency,strategy,solved,total\n";
  for (const auto& c : cells) {
    const char* kind = c.kind == CellKind::Baseline ? "baseline"
                       : c.kind == CellKind::Combined ? "combined"
                                                      : "model";
    os << kind << ',' << (c.kind == CellKind::Baseline ? "" : detail::format_double(c.gamma)) << ','
       << (c.kind == CellKind::ModelAlone ? "inf" : std::to_string(c.frequency)) << ",\""
       << format_strategy(c.strategy) << "\"," << c.solved() << ',' << c.runs.size() << '\n';
  }
  return os.str();
}

std::string GridResults::to_table() const {
  std::vector<double> gammas;
  std::vector<std::uint32_t> freqs;
  const GridCell* baseline = nullptr;
  std::map<std::pair<double, std::uint32_t>, const GridCell*> combined;
  std::map<double, const GridCell*> alone;
  for (const auto& c : cells) {
    if (c.kind == CellKind::Baseline) {
      baseline = &c;
      continue;
    }
    if (std::find(gammas.begin(), gammas.end(), c.gamma) == gammas.end()) gammas.push_back(c.gamma);
    if (c.kind == CellKind::Combined) {
      if (std::find(freqs.begin(), freqs.end(), c.frequency) == freqs.end()) freqs.push_back(c.frequency);
      combined[{c.gamma, c.frequency}] = &c;
    } else {
      alone[c.gamma] = &c;
    }
  }
  std::ostringstream os;
  auto cell = [&](const std::string& s) { os << std::setw(6) << s; };
  os << std::setw(6) << "gamma";
  cell("0");
  for (auto f : freqs) cell(std::to_string(f));
  cell("inf");
  os << '\n';
  if (gammas.empty() && baseline) {
    os << std::setw(6) << "-";
    cell(std::to_string(baseline->solved()));
    os << '\n';
  }
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    os << std::setw(6) << detail::format_double(gammas[g]);
    cell(g == 0 && baseline ? std::to_string(baseline->solved()) : "-");
    for (auto f : freqs) {
      auto it = combined.find({gammas[g], f});
      cell(it == combined.end() ? "-" : std::to_string(it->second->solved()));
    }
    auto a = alone.find(gammas[g]);
    cell(a == alone.end() ? "-" : std::to_string(a->second->solved()));
    os << '\n';
  }
  return os.str();
}

std::vector<ProofSearchRecord> run_jobs(const Corpus& corpus, const std::vector<RunJob>& work,
                                        const ProverLimits& limits, unsigned jobs) {
  std::vector<ProofSearchRecord> out(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t k = next.fetch_add(1);
      if (k >= work.size()) return;
      const RunJob& job = work[k];
      out[k] = prove(corpus.problems[job.problem], *job.strategy, limits).trimmed();
    }
  };
  unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(work.size())));
  if (n <= 1) {
    worker();
    return out;
  }
  std::vector<std::thread> threads;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned t = 0; t < n; ++t) {
    threads.emplace_back([&]() {
      try {
        worker();
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(work.size());
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

GridResults run_grid(const Corpus& corpus, std::shared_ptr<const Model> model,
                     const std::string& model_name, const Strategy& base, const GridSpec& grid,
                     const ProverLimits& limits, unsigned jobs) {
  GridResults results;
  for (const auto& p : corpus.problems) results.problems.push_back(p.name);
  if (grid.include_baseline_alone) {
    results.cells.push_back(GridCell{CellKind::Baseline, 0, 0, base, {}});
  }
  for (double gamma : grid.gammas) {
    Cef learned = learned_cef(model, gamma, model_name);
    for (auto f : grid.frequencies) {
      if (f == 0) throw Error(ErrorCode::InvalidArgument, "grid frequencies must be positive");
      results.cells.push_back(GridCell{CellKind::Combined, gamma, f, base.with(f, learned), {}});
    }
    if (grid.include_model_alone) {
      results.cells.push_back(GridCell{CellKind::ModelAlone, gamma, 0, Strategy({{1, learned}}), {}});
    }
  }
  std::vector<RunJob> work;
  for (const auto& cell : results.cells) {
    for (std::size_t p = 0; p < corpus.problems.size(); ++p) work.push_back({p, &cell.strategy});
  }
  std::vector<ProofSearchRecord> records = run_jobs(corpus, work, limits, jobs);
  std::size_t k = 0;
  for (auto& cell : results.cells) {
    cell.runs.resize(corpus.problems.size());
    for (std::size_t p = 0; p < corpus.problems.size(); ++p, ++k) {
      ProblemRun& run = cell.runs[p];
      run.outcome = records[k].outcome;
      run.processed = records[k].stats.processed;
      if (run.outcome == Outcome::ProofFound) run.proof = std::move(records[k]);
    }
    log::info("grid cell ", cell.label(), ": solved ", cell.solved(), "/", cell.runs.size());
  }
  return results;
}

std::vector<std::size_t> greedy_cover(const std::vector<std::set<std::size_t>>& solved) {
  std::set<std::size_t> covered;
  std::vector<std::size_t> picks;
  for (;;) {
    std::size_t best = solved.size();
    std::size_t best_gain = 0;
    for (std::size_t i = 0; i < solved.size(); ++i) {
      std::size_t gain = 0;
      for (std::size_t e : solved[i]) gain += covered.count(e) == 0;
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best_gain == 0) return picks;
    picks.push_back(best);
    covered.insert(solved[best].begin(), solved[best].end());
  }
}

std::vector<std::size_t> greedy_cover(const GridResults& results) {
  std::vector<std::set<std::size_t>> sets;
  for (const auto& c : results.cells) sets.push_back(c.solved_set());
  return greedy_cover(sets);
}

namespace {

using ProofKey = std::pair<std::size_t, std::string>;

ExampleSet examples_from(const std::map<ProofKey, ProofSearchRecord>& proofs) {
  ExampleSet all;
  for (const auto& [key, record] : proofs) all.append(extract_examples(record));
  return all;
}

}  // namespace

LoopResult loop(const Corpus& corpus, const Strategy& base, const LoopConfig& cfg) {
  if (cfg.rounds < 1) throw Error(ErrorCode::InvalidArgument, "rounds must be at least 1");
  LoopResult result;
  std::map<ProofKey, ProofSearchRecord> proofs;

  std::vector<RunJob> work;
  for (std::size_t p = 0; p < corpus.problems.size(); ++p) work.push_back({p, &base});
  auto base_records = run_jobs(corpus, work, cfg.limits, cfg.jobs);
  for (std::size_t p = 0; p < base_records.size(); ++p) {
    if (base_records[p].outcome != Outcome::ProofFound) continue;
    result.solved.insert(p);
    proofs.emplace(ProofKey{p, base_records[p].strategy}, std::move(base_records[p]));
  }
  result.baseline_solved = result.solved.size();

  auto train_next = [&]() -> bool {
    ExampleSet examples = examples_from(proofs);
    ModelReport report;
    report.name = "M" + std::to_string(result.models.size());
    report.positives = examples.positives.size();
    report.negatives = examples.negatives.size();
    if (examples.positives.empty() || examples.negatives.empty()) {
      result.stalled = true;
      result.stall_reason = "no training data of both classes for " + report.name;
      return false;
    }
    ExampleSet boosted = boost(examples, cfg.boost);
    report.training_examples = boosted.positives.size() + boosted.negatives.size();
    auto model = std::make_shared<const Model>(
        train(boosted.positives, boosted.negatives, *corpus.signature, cfg.solver));
    report.fit = accuracy(*model, make_training_set(examples.positives, examples.negatives, *corpus.signature));
    result.models.push_back(std::move(model));
    result.model_reports.push_back(std::move(report));
    return true;
  };

  if (!train_next()) return result;
  for (std::uint32_t round = 1; round <= cfg.rounds; ++round) {
    RoundReport rr;
    rr.round = round;
    rr.model = result.model_reports.back().name;
    rr.solved_before = result.solved.size();
    GridResults grid = run_grid(corpus, result.models.back(), rr.model, base, cfg.grid, cfg.limits, cfg.jobs);
    rr.table = grid.to_table();
    for (std::size_t cell_index : greedy_cover(grid)) {
      GridCell& cell = grid.cells[cell_index];
      rr.cover.push_back(cell.label());
      for (std::size_t p = 0; p < cell.runs.size(); ++p) {
        if (!cell.runs[p].proof) continue;
        result.solved.insert(p);
        ProofKey key{p, cell.runs[p].proof->strategy};
        if (proofs.emplace(key, std::move(*cell.runs[p].proof)).second) ++rr.new_proofs;
      }
    }
    rr.solved_after = result.solved.size();
    result.rounds.push_back(rr);
    if (rr.new_proofs == 0) {
      result.stalled = true;
      result.stall_reason = "round " + std::to_string(round) + " found no new proofs";
      break;
    }
    if (!train_next()) break;
  }
  return result;
}

std::string LoopResult::report() const {
  std::ostringstream os;
  os << "baseline solved: " << baseline_solved << '\n';
  auto fraction = [](const std::optional<double>& v) {
    if (!v) return std::string("n/a");
    std::ostringstream f;
    f << std::fixed << std::setprecision(4) << *v;
    return f.str();
  };
  for (const auto& m : model_reports) {
    os << m.name << ": " << m.positives << " pos / " << m.negatives << " neg, " << m.training_examples
       << " training examples, accuracy " << std::fixed << std::setprecision(4) << m.fit.accuracy
       << ", positive recall "
       << fraction(m.fit.positive_recall)
       << ", negative recall "
       << fraction(m.fit.negative_recall)
       << '\n';
    os.unsetf(std::ios::floatfield);
  }
  for (const auto& r : rounds) {
    os << "round " << r.round << " (" << r.model << "): solved " << r.solved_before << " -> "
       << r.solved_after << ", new proofs " << r.new_proofs << ", cover [";
    for (std::size_t i = 0; i < r.cover.size(); ++i) os << (i ? ", " : "") << r.cover[i];
    os << "]\n" << r.table;
  }
  os << "total solved: " << solved.size() << '\n';
  if (stalled) os << "stopped early: " << stall_reason << '\n';
  return os.str();
}

}  // namespace enigma
