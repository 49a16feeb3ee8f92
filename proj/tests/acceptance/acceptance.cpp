// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "enigma/clause_model.hpp"
#include "enigma/featurizer.hpp"
#include "enigma/guidance.hpp"
#include "enigma/linear_learner.hpp"
#include "enigma/saturation.hpp"
#include "enigma/tptp.hpp"
#include "enigma/training_pipeline.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace enigma;

namespace {

const fs::path kFixtures = ENIGMA_FIXTURE_DIR;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

using Criterion = std::function<void(Verdict&)>;

FeatureTriple triple(const Signature& sig, const std::string& a, const std::string& b, const std::string& c) {
  auto id = [&](const std::string& n) { return n == "ε" ? kEpsilon : *sig.lookup(n); };
  return {id(a), id(b), id(c)};
}

void feature_golden(Verdict& out) {
  Signature sig;
  Literal l2 = parse_literals("p(X)", sig).front();
  Literal q = parse_literals("~q(X,Y)", sig).front();
  Literal l1 = parse_literals("f(X,Y) = g(sko1,sko2(X))", sig).front();
  Literal prop = parse_literals("r", sig).front();

  FeatureMultiset want_l2;
  want_l2.add(triple(sig, "⊕", "p", "⊛"));
  FeatureMultiset want_q;
  want_q.add(triple(sig, "⊖", "q", "⊛"), 2);
  FeatureMultiset want_l1;
  want_l1.add(triple(sig, "⊕", "=", "f"));
  want_l1.add(triple(sig, "⊕", "=", "g"));
  want_l1.add(triple(sig, "=", "f", "⊛"), 2);
  want_l1.add(triple(sig, "=", "g", "⊙"), 2);
  want_l1.add(triple(sig, "g", "⊙", "⊛"));
  FeatureMultiset want_prop;
  want_prop.add(triple(sig, "⊕", "r", "ε"));

  out.check(literal_features(l2, sig) == want_l2, "P(x)");
  out.check(literal_features(q, sig) == want_q, "~Q(x,y)");
  out.check(literal_features(l1, sig) == want_l1, "L1");
  out.check(literal_features(prop, sig) == want_prop, "propositional padding");
  out.detail << "L1 = " << format_features(literal_features(l1, sig), sig);
}

void index_bijectivity(Verdict& out) {
  std::size_t checked = 0;
  for (std::size_t extra = 0; extra <= 4; ++extra) {
    Signature sig;
    for (std::size_t k = 0; k < extra; ++k) {
      sig.intern("s" + std::to_string(k), static_cast<std::uint32_t>(k % 3),
                 k % 2 ? SymbolKind::Predicate : SymbolKind::Function);
    }
    sig.freeze();
    const std::uint64_t n = sig.size();
    const std::uint64_t dim = (n + 1) * (n + 1) * (n + 1);
    out.check(feature_dimension(sig) == dim, "dimension formula");
    std::vector<SymbolId> ids;
    for (SymbolId i = 0; i < n; ++i) ids.push_back(i);
    ids.push_back(kEpsilon);
    std::vector<char> hit(dim + 1, 0);
    for (auto a : ids) {
      for (auto b : ids) {
        for (auto c : ids) {
          std::uint64_t idx = feature_index({a, b, c}, sig);
          out.check(idx >= 1 && idx <= dim, "index range");
          if (idx >= 1 && idx <= dim) {
            out.check(!hit[idx], "collision");
            hit[idx] = 1;
          }
          ++checked;
        }
      }
    }
    out.check(std::count(hit.begin() + 1, hit.end(), 1) == static_cast<std::ptrdiff_t>(dim), "surjectivity");
  }
  out.detail << checked << " triples over |Σ| = 4..8";
}

void svm_oracle(Verdict& out) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> nex(2, 6), ndim(1, 3), coin(0, 1);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::uniform_real_distribution<double> cdist(0.1, 4.0);
  double worst = 0;
  std::size_t epochs = 0;
  const int instances = 60;
  for (int inst = 0; inst < instances; ++inst) {
    int l = nex(rng), d = ndim(rng);
    double c = cdist(rng);
    TrainingSet data;
    data.dimension = static_cast<std::uint64_t>(d);
    std::vector<oracle::Dense> xs;
    std::vector<int> ys;
    for (int i = 0; i < l; ++i) {
      SparseVector v;
      v.dimension = data.dimension;
      oracle::Dense dense(d, 0.0);
      for (int k = 0; k < d; ++k) {
        if (coin(rng) || k == 0) {
          double x = std::round(val(rng) * 4) / 4;
          if (x != 0) {
            v.entries.push_back({static_cast<std::uint64_t>(k + 1), x});
            dense[k] = x;
          }
        }
      }
      Label y = (i == 0) ? Label::Positive : (i == 1) ? Label::Negative : (coin(rng) ? Label::Positive : Label::Negative);
      data.add(v, y);
      xs.push_back(dense);
      ys.push_back(sign(y));
    }
    SolverConfig cfg;
    cfg.c = c;
    cfg.tolerance = 1e-9;
    cfg.max_epochs = 100000;
    cfg.seed = static_cast<std::uint64_t>(inst);
    cfg.track_dual = true;
    SolverResult r = solve_l2svm(data, cfg);
    oracle::Dense want = oracle::svm_minimizer(xs, ys, c);
    out.check(!want.empty(), "oracle found a minimizer");
    for (int k = 0; k < d && !want.empty(); ++k) worst = std::max(worst, std::abs(r.w[k] - want[k]));
    const auto& h = r.stats.dual_history;
    for (std::size_t e = 1; e < h.size(); ++e) {
      out.check(h[e] >= h[e - 1] - 1e-12 * std::max(1.0, std::abs(h[e - 1])), "dual objective decreased");
    }
    epochs += r.stats.epochs;
  }
  out.check(worst <= 1e-4, "w within 1e-4");
  out.detail << instances << " instances, max |w - w*|∞ = " << worst << ", " << epochs << " epochs total";
}

void prediction_rule(Verdict& out) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> wd(-2, 2), xd(0, 2);
  Signature sig;
  sig.intern("p", 1, SymbolKind::Predicate);
  sig.freeze();
  const std::uint64_t dim = feature_dimension(sig);
  std::size_t zeros = 0, cases = 0;
  for (int m = 0; m < 200; ++m) {
    std::vector<double> w(dim);
    for (auto& x : w) x = wd(rng);
    Model model(sig, w);
    for (int t = 0; t < 50; ++t) {
      SparseVector v;
      v.dimension = dim;
      long long exact = 0;
      for (std::uint64_t k = 1; k <= dim; ++k) {
        int x = xd(rng) * (rng() % 8 == 0);
        if (x) {
          v.entries.push_back({k, static_cast<double>(x)});
          exact += static_cast<long long>(x) * static_cast<long long>(w[k - 1]);
        }
      }
      zeros += exact == 0;
      ++cases;
      out.check((model.classify(v) == Label::Positive) == (exact > 0), "classify vs exact sign");
    }
  }
  // Clause-level: predict on real clauses agrees with the dense score.
  auto csig = std::make_shared<Signature>();
  Problem p = load_problem(kFixtures / "corpus" / "chain00.p", csig);
  csig->freeze();
  std::vector<double> w(feature_dimension(*csig), 0.0);
  Model zero(*csig, w);
  for (const auto& c : p.clauses) out.check(predict(c, zero, *csig) == Label::Negative, "zero score is negative");
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(static_cast<int>(i % 5) - 2);
  Model mixed(*csig, w);
  for (const auto& c : p.clauses) {
    SparseVector x = vectorize(clause_features(c, *csig), *csig);
    double s = oracle::dense_dot(oracle::densify(x, w.size()), w);
    out.check((predict(c, mixed, *csig) == Label::Positive) == (s > 0), "clause predict");
  }
  out.detail << cases << " random cases, " << zeros << " with wᵀx = 0";
}

void guidance_arithmetic(Verdict& out) {
  const std::vector<double> gammas = full_grid().gammas;
  const std::vector<std::uint32_t> freqs = full_grid().frequencies;
  auto sig = std::make_shared<Signature>();
  Problem p = load_problem(kFixtures / "corpus" / "chain00.p", sig);
  sig->freeze();
  std::vector<double> w(feature_dimension(*sig), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = (i % 3 == 0) ? 1.0 : -0.5;
  auto model = std::make_shared<const Model>(*sig, w);
  std::size_t checks = 0;
  for (double g : gammas) {
    for (std::size_t len = 0; len <= 40; ++len) {
      out.check(weight(len, Label::Positive, g) == g * static_cast<double>(len) + 1.0, "weight pos");
      out.check(weight(len, Label::Negative, g) == g * static_cast<double>(len) + 10.0, "weight neg");
      checks += 2;
    }
    for (const auto& c : p.clauses) {
      double pre = predict(c, *model, *sig) == Label::Positive ? 1.0 : 10.0;
      double want = g * static_cast<double>(clause_len(c)) + pre;
      out.check(weight(c, *model, g, *sig) == want, "weight(C,M,γ)");
      out.check(evaluate(c, learned_cef(model, g, "m"), *sig) == want, "learned CEF");
      ++checks;
    }
    for (auto f : freqs) {
      Strategy s = baseline_strategy().with(f, learned_cef(model, g, "m"));
      std::uint64_t cycle = s.cycle_length();
      std::uint64_t learned_steps = 0;
      for (std::uint64_t step = 0; step < cycle; ++step) {
        const Cef& cef = next_cef(s, step);
        if (cef.learned()) {
          ++learned_steps;
          out.check(std::get<LearnedWeight>(cef.kind).gamma == g, "γ carried");
        }
      }
      out.check(learned_steps == f, "frequency honored");
      ++checks;
    }
  }
  out.detail << checks << " checks over " << gammas.size() << " γ values and " << freqs.size() << " frequencies";
}

void round_robin(Verdict& out) {
  std::size_t strategies = 0;
  std::vector<Cef> cefs{Cef{FifoWeight{}}, Cef{ClauseLenWeight{}}, Cef{SymbolCountWeight{}}};
  std::function<void(std::vector<std::uint32_t>&)> rec = [&](std::vector<std::uint32_t>& fs) {
    if (!fs.empty()) {
      std::vector<StrategyEntry> entries;
      for (std::size_t i = 0; i < fs.size(); ++i) entries.push_back({fs[i], cefs[i]});
      Strategy s(entries);
      std::uint64_t cycle = 0;
      for (auto f : fs) cycle += f;
      for (std::uint64_t start = 0; start < 3 * cycle; ++start) {
        std::vector<std::uint32_t> count(fs.size(), 0);
        for (std::uint64_t step = start; step < start + cycle; ++step) ++count[s.index_at(step)];
        out.check(count == fs, "window counts");
      }
      ++strategies;
    }
    if (fs.size() == 3) return;
    for (std::uint32_t f = 1; f <= 5; ++f) {
      fs.push_back(f);
      rec(fs);
      fs.pop_back();
    }
  };
  std::vector<std::uint32_t> fs;
  rec(fs);
  out.detail << strategies << " strategies, every window start in three cycles";
}

void soundness(Verdict& out) {
  std::size_t problems = 0, derived = 0, proofs = 0;
  std::vector<Strategy> strategies{baseline_strategy(), Strategy({{1, Cef{ClauseLenWeight{}}}}),
                                   Strategy({{1, Cef{FifoWeight{}}}})};
  for (const auto& entry : fs::directory_iterator(kFixtures / "soundness")) {
    if (entry.path().extension() != ".p") continue;
    auto sig = std::make_shared<Signature>();
    Problem p = load_problem(entry.path(), sig);
    sig->freeze();
    std::vector<SymbolId> constants;
    for (const auto& s : sig->symbols()) {
      if (s.kind == SymbolKind::Function && s.arity == 0) constants.push_back(s.id);
    }
    if (constants.empty()) constants.push_back(kVariableMarker);  // any single element universe
    for (const auto& strategy : strategies) {
      ProverLimits limits;
      limits.max_processed = 200;
      ProofSearchRecord r = prove(p, strategy, limits);
      proofs += r.outcome == enigma::Outcome::ProofFound;
      oracle::GroundOracle g(*sig, constants);
      for (const auto& c : r.clauses) {
        if (c.parents.empty()) continue;
        std::vector<const Clause*> parents;
        for (auto pid : c.parents) parents.push_back(r.find(pid));
        out.check(g.entails(parents, c), entry.path().filename().string() + ": " + to_string(c, *sig));
        ++derived;
      }
      out.check(g.atom_count() <= 12, "fixture exceeds 12 ground atoms");
    }
    ++problems;
  }
  out.check(problems >= 10, "soundness fixtures present");
  out.detail << problems << " problems, " << derived << " derived clauses checked, " << proofs << " proofs";
}

struct CorpusRuns {
  Corpus corpus;
  std::vector<ProofSearchRecord> baseline;
};

const CorpusRuns& corpus_runs() {
  static CorpusRuns runs = [] {
    CorpusRuns r{load_corpus(kFixtures / "corpus" / "manifest.txt"), {}};
    Strategy base = baseline_strategy();
    std::vector<RunJob> jobs;
    for (std::size_t i = 0; i < r.corpus.problems.size(); ++i) jobs.push_back({i, &base});
    r.baseline = run_jobs(r.corpus, jobs, ProverLimits{}, 1);
    return r;
  }();
  return runs;
}

ExampleSet baseline_examples() {
  ExampleSet all;
  for (const auto& rec : corpus_runs().baseline) {
    if (rec.outcome == enigma::Outcome::ProofFound) all.append(extract_examples(rec));
  }
  return all;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void guided_rerun(Verdict& out) {
  const CorpusRuns& runs = corpus_runs();
  const Signature& sig = *runs.corpus.signature;
  ExampleSet examples = baseline_examples();
  auto model = std::make_shared<const Model>(train(examples.positives, examples.negatives, sig));
  Strategy guided({{1, learned_cef(model, 0.2, "M0")}});
  std::vector<double> before, after;
  std::size_t solved = 0, lost = 0;
  for (std::size_t i = 0; i < runs.corpus.problems.size(); ++i) {
    const auto& base = runs.baseline[i];
    if (base.outcome != enigma::Outcome::ProofFound) continue;
    ++solved;
    ProverLimits limits;
    limits.max_processed = 2 * base.stats.processed;
    ProofSearchRecord r = prove(runs.corpus.problems[i], guided, limits);
    if (r.outcome != enigma::Outcome::ProofFound) {
      ++lost;
      out.check(false, runs.corpus.problems[i].name + " lost under the learned CEF");
      continue;
    }
    before.push_back(static_cast<double>(base.stats.processed));
    after.push_back(static_cast<double>(r.stats.processed));
  }
  out.check(solved >= 20, "at least 20 baseline-solved problems");
  double mb = before.empty() ? 0 : median(before), ma = after.empty() ? 0 : median(after);
  double reduction = mb > 0 ? 1.0 - ma / mb : 0;
  out.check(reduction >= 0.20, "median reduction below 20%");
  out.detail << solved << " problems, median processed " << mb << " -> " << ma << " (" << 100 * reduction
             << "% fewer), " << lost << " lost";
}

void boosting_direction(Verdict& out) {
  Corpus corpus = load_corpus(kFixtures / "skewed" / "manifest.txt");
  const Signature& sig = *corpus.signature;
  Strategy base = baseline_strategy();
  ExampleSet skewed;
  for (const auto& p : corpus.problems) {
    ProofSearchRecord r = prove(p, base);
    out.check(r.outcome == enigma::Outcome::ProofFound, p.name + " unsolved");
    if (r.outcome == enigma::Outcome::ProofFound) skewed.append(extract_examples(r));
  }
  double ratio = static_cast<double>(skewed.negatives.size()) / static_cast<double>(skewed.positives.size());
  out.check(ratio >= 20 && ratio <= 40, "fixture is not skewed about 1:30");
  TrainingSet eval = make_training_set(skewed.positives, skewed.negatives, sig);
  Model plain = train(skewed.positives, skewed.negatives, sig);
  ExampleSet boosted = boost(skewed, 10);
  Model strong = train(boosted.positives, boosted.negatives, sig);
  AccuracyReport a = accuracy(plain, eval);
  AccuracyReport b = accuracy(strong, eval);
  out.check(b.positive_recall.value_or(0) > a.positive_recall.value_or(0), "boosted positive recall not greater");
  out.check(a.accuracy >= b.accuracy, "unboosted accuracy below boosted");
  out.detail << skewed.positives.size() << ":" << skewed.negatives.size() << ", positive recall "
             << a.positive_recall.value_or(0) << " -> " << b.positive_recall.value_or(0) << ", accuracy "
             << a.accuracy << " -> " << b.accuracy;
}

void throughput(Verdict& out) {
  const CorpusRuns& runs = corpus_runs();
  const Signature& sig = *runs.corpus.signature;
  std::vector<Clause> pool;
  for (const auto& r : runs.baseline) {
    for (const auto& c : r.clauses) {
      if (clause_len(c) <= 30 && !c.literals.empty()) pool.push_back(c);
    }
  }
  ExampleSet examples = baseline_examples();
  Model model = train(examples.positives, examples.negatives, sig);
  std::size_t done = 0, positive = 0;
  auto start = std::chrono::steady_clock::now();
  double seconds = 0;
  while (seconds < 0.5) {
    for (std::size_t i = 0; i < pool.size() && i < 5000; ++i) {
      positive += predict(pool[(done + i) % pool.size()], model, sig) == Label::Positive;
    }
    done += std::min<std::size_t>(pool.size(), 5000);
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  double rate = static_cast<double>(done) / seconds;
  out.check(pool.size() >= 100, "enough fixture clauses");
  out.check(rate >= 10000, "below 10k clauses/s");
  out.detail << pool.size() << " distinct clauses, " << static_cast<long long>(rate) << " clauses/s ("
             << 1e6 / rate << " µs each, " << positive << " positive)";
}

void greedy_cover_coverage(Verdict& out) {
  std::mt19937_64 rng(11);
  std::size_t instances = 0;
  std::size_t larger = 0;
  for (std::size_t strategies = 0; strategies <= 10; ++strategies) {
    for (int rep = 0; rep < 60; ++rep) {
      std::size_t problems = 1 + rng() % 20;
      double density = (rng() % 100) / 100.0;
      std::vector<std::set<std::size_t>> sets(strategies);
      for (auto& s : sets) {
        for (std::size_t p = 0; p < problems; ++p) {
          if ((rng() % 1000) / 1000.0 < density) s.insert(p);
        }
      }
      auto picks = greedy_cover(sets);
      std::set<std::size_t> covered;
      for (auto i : picks) covered.insert(sets[i].begin(), sets[i].end());
      auto best = oracle::brute_force_cover(sets);
      out.check(covered == best.covered, "coverage differs from brute force");
      larger += picks.size() > best.size;
      ++instances;
    }
  }
  out.detail << instances << " instances, greedy larger than minimum on " << larger;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Criterion>> criteria{
      {"feature extraction golden outputs", feature_golden},
      {"feature index bijectivity", index_bijectivity},
      {"SVM matches exact QP minimizer; dual monotone", svm_oracle},
      {"prediction is positive iff w.x > 0", prediction_rule},
      {"weight arithmetic over the full γ and frequency grids", guidance_arithmetic},
      {"round-robin window exactness", round_robin},
      {"prover soundness against ground truth tables", soundness},
      {"learned CEF cuts median processed clauses by 20%", guided_rerun},
      {"boosting raises positive recall", boosting_direction},
      {"featurize+predict throughput", throughput},
      {"greedy cover coverage equals brute force", greedy_cover_coverage},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict out;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << "exception: " << e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !out.pass;
    std::printf("criterion %2zu %s  %s  [%s] (%.2fs)\n", i + 1, out.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), out.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed;
}
