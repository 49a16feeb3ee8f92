#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <tuple>

#include "enigma/error.hpp"
#include "enigma/featurizer.hpp"
#include "enigma/guidance.hpp"
#include "enigma/linear_learner.hpp"
#include "enigma/record_io.hpp"
#include "enigma/saturation.hpp"
#include "enigma/tptp.hpp"
#include "enigma/training_pipeline.hpp"

namespace py = pybind11;
using namespace enigma;

namespace {

using NamedTriple = std::tuple<std::string, std::string, std::string>;

std::string symbol_name(SymbolId id, const Signature& sig) { return id == kEpsilon ? "ε" : sig[id].name; }

std::map<NamedTriple, std::uint32_t> named(const FeatureMultiset& phi, const Signature& sig) {
  std::map<NamedTriple, std::uint32_t> out;
  for (const auto& [t, n] : phi) {
    out[{symbol_name(t.s1, sig), symbol_name(t.s2, sig), symbol_name(t.s3, sig)}] = n;
  }
  return out;
}

SymbolId symbol_id(const std::string& name, const Signature& sig) {
  if (name == "ε") return kEpsilon;
  auto id = sig.lookup(name);
  if (!id) throw Error(ErrorCode::UnknownSymbol, "unknown symbol '" + name + "'");
  return *id;
}

Label label_of(bool positive) { return positive ? Label::Positive : Label::Negative; }

// A clause together with the signature its ids refer to.
struct PyClause {
  Clause clause;
  std::shared_ptr<Signature> signature;

  std::string text() const { return to_string(clause, *signature); }
};

std::vector<PyClause> wrap(const std::vector<Clause>& cs, const std::shared_ptr<Signature>& sig) {
  std::vector<PyClause> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back({c, sig});
  return out;
}

std::vector<Clause> unwrap(const std::vector<PyClause>& cs) {
  std::vector<Clause> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(c.clause);
  return out;
}

ModelResolver dict_resolver(const std::map<std::string, std::shared_ptr<Model>>& models) {
  return [models](const std::string& name) -> std::shared_ptr<const Model> {
    auto it = models.find(name);
    if (it != models.end()) return it->second;
    return file_model_resolver()(name);
  };
}

ProverLimits limits_from(std::uint64_t max_processed, std::uint64_t max_generated, double timeout,
                         std::size_t max_literals, std::size_t max_depth) {
  ProverLimits lim;
  lim.max_processed = max_processed;
  lim.max_generated = max_generated;
  lim.time_budget = timeout;
  lim.max_literals = max_literals;
  lim.max_depth = max_depth;
  return lim;
}

}  // namespace

PYBIND11_MODULE(_enigma, m) {
  m.doc() = "Learned clause selection for a small saturation prover";

  py::register_exception<Error>(m, "EnigmaError", PyExc_ValueError);

  py::class_<Signature, std::shared_ptr<Signature>>(m, "Signature")
      .def(py::init<>())
      .def("__len__", &Signature::size)
      .def("lookup", &Signature::lookup)
      .def("freeze", &Signature::freeze)
      .def_property_readonly("frozen", &Signature::frozen)
      .def_property_readonly("names", [](const Signature& s) {
        std::vector<std::string> out;
        for (const auto& sym : s.symbols()) out.push_back(sym.name);
        return out;
      });

  py::class_<PyClause>(m, "Clause")
      .def_property_readonly("id", [](const PyClause& c) { return c.clause.id; })
      .def_property_readonly("name", [](const PyClause& c) { return c.clause.name; })
      .def_property_readonly("parents", [](const PyClause& c) { return c.clause.parents; })
      .def_property_readonly("length", [](const PyClause& c) { return clause_len(c.clause); })
      .def("features", [](const PyClause& c) { return named(clause_features(c.clause, *c.signature), *c.signature); })
      .def("__str__", &PyClause::text)
      .def("__repr__", [](const PyClause& c) { return "<Clause " + c.text() + ">"; });

  py::class_<Problem>(m, "Problem")
      .def_readonly("name", &Problem::name)
      .def_readonly("signature", &Problem::signature)
      .def_property_readonly("clauses", [](const Problem& p) { return wrap(p.clauses, p.signature); });

  m.def("parse_problem",
        [](const std::string& text, const std::string& name, std::shared_ptr<Signature> sig) {
          if (!sig) sig = std::make_shared<Signature>();
          return parse_problem(text, sig, name);
        },
        py::arg("text"), py::arg("name") = "problem", py::arg("signature") = nullptr);
  m.def("load_problem", [](const std::filesystem::path& path) { return load_problem(path); }, py::arg("path"));

  m.def("parse_clause",
        [](const std::string& text, std::shared_ptr<Signature> sig) {
          return PyClause{parse_clause(text, *sig), sig};
        },
        py::arg("text"), py::arg("signature"));
  m.def("clause_len", [](const PyClause& c) { return clause_len(c.clause); });
  m.def("literal_features", [](const PyClause& c, std::size_t i) {
    if (i >= c.clause.literals.size()) throw py::index_error("literal index out of range");
    return named(literal_features(c.clause.literals[i], *c.signature), *c.signature);
  }, py::arg("clause"), py::arg("literal") = 0);
  m.def("feature_index",
        [](const NamedTriple& t, const Signature& sig) {
          return feature_index({symbol_id(std::get<0>(t), sig), symbol_id(std::get<1>(t), sig),
                                symbol_id(std::get<2>(t), sig)},
                               sig);
        },
        py::arg("triple"), py::arg("signature"));
  m.def("feature_dimension", &feature_dimension);

  py::class_<Model, std::shared_ptr<Model>>(m, "Model")
      .def_property_readonly("dimension", &Model::dimension)
      .def_property_readonly("weights", [](const Model& mo) {
        return std::vector<double>(mo.weights().begin(), mo.weights().end());
      })
      .def("score", [](const Model& mo, const PyClause& c) {
        FeatureEncoder enc(mo.signature());
        return mo.score(enc.encode(c.clause, *c.signature));
      })
      .def("predict", [](const Model& mo, const PyClause& c) {
        FeatureEncoder enc(mo.signature());
        return sign(mo.classify(enc.encode(c.clause, *c.signature)));
      })
      .def("save", [](const Model& mo, const std::filesystem::path& p) { save_model(mo, p); });
  m.def("load_model", [](const std::filesystem::path& p) { return std::make_shared<Model>(load_model(p)); });

  m.def("train",
        [](const std::vector<PyClause>& positives, const std::vector<PyClause>& negatives,
           const Signature& sig, double c, double tolerance, std::uint32_t max_epochs, std::uint64_t seed) {
          SolverConfig cfg;
          cfg.c = c;
          cfg.tolerance = tolerance;
          cfg.max_epochs = max_epochs;
          cfg.seed = seed;
          return std::make_shared<Model>(train(unwrap(positives), unwrap(negatives), sig, cfg));
        },
        py::arg("positives"), py::arg("negatives"), py::arg("signature"), py::arg("c") = 1.0,
        py::arg("tolerance") = 1e-3, py::arg("max_epochs") = 1000, py::arg("seed") = 0);

  m.def("weight", [](std::size_t len, bool positive, double gamma) { return weight(len, label_of(positive), gamma); },
        py::arg("length"), py::arg("positive"), py::arg("gamma"));
  m.def("preweight", [](bool positive) { return preweight(label_of(positive)); }, py::arg("positive"));

  py::class_<Strategy>(m, "Strategy")
      .def("__str__", &format_strategy)
      .def("__len__", &Strategy::size)
      .def_property_readonly("cycle_length", &Strategy::cycle_length)
      .def("cef_at", [](const Strategy& s, std::uint64_t step) { return next_cef(s, step).name(); });
  m.def("baseline_strategy", &baseline_strategy);
  m.def("parse_strategy",
        [](const std::string& text, const std::map<std::string, std::shared_ptr<Model>>& models) {
          return parse_strategy(text, dict_resolver(models));
        },
        py::arg("text"), py::arg("models") = std::map<std::string, std::shared_ptr<Model>>{});

  py::class_<ProofSearchRecord>(m, "ProofSearchRecord")
      .def_readonly("problem", &ProofSearchRecord::problem)
      .def_readonly("strategy", &ProofSearchRecord::strategy)
      .def_property_readonly("outcome", [](const ProofSearchRecord& r) { return std::string(to_string(r.outcome)); })
      .def_readonly("given", &ProofSearchRecord::given_sequence)
      .def_readonly("empty_clause", &ProofSearchRecord::empty_clause)
      .def_property_readonly("processed", [](const ProofSearchRecord& r) { return r.stats.processed; })
      .def_property_readonly("generated", [](const ProofSearchRecord& r) { return r.stats.generated; })
      .def("proof", &ProofSearchRecord::proof)
      .def("to_json", [](const ProofSearchRecord& r) { return record_to_json(r); });

  m.def("prove",
        [](const Problem& p, const Strategy* strategy, std::uint64_t max_processed, std::uint64_t max_generated,
           double timeout, std::size_t max_literals, std::size_t max_depth) {
          Strategy s = strategy ? *strategy : baseline_strategy();
          py::gil_scoped_release release;
          return prove(p, s, limits_from(max_processed, max_generated, timeout, max_literals, max_depth));
        },
        py::arg("problem"), py::arg("strategy") = nullptr, py::arg("max_processed") = 1000,
        py::arg("max_generated") = 200000, py::arg("timeout") = 0.0, py::arg("max_literals") = 12,
        py::arg("max_depth") = 8);

  m.def("extract_examples", [](const ProofSearchRecord& r) {
    ExampleSet ex = extract_examples(r);
    auto sig = std::const_pointer_cast<Signature>(r.signature);
    return py::make_tuple(wrap(ex.positives, sig), wrap(ex.negatives, sig));
  }, py::arg("record"));

  m.def("greedy_cover", py::overload_cast<const std::vector<std::set<std::size_t>>&>(&greedy_cover),
        py::arg("solved_sets"));

  py::class_<Corpus>(m, "Corpus")
      .def_readonly("signature", &Corpus::signature)
      .def_readonly("problems", &Corpus::problems);
  m.def("load_corpus", &load_corpus, py::arg("manifest"));

  m.def("loop",
        [](const Corpus& corpus, std::uint32_t rounds, std::vector<double> gammas,
           std::vector<std::uint32_t> frequencies, std::uint32_t boost, std::uint64_t max_processed,
           unsigned jobs) {
          LoopConfig cfg;
          cfg.rounds = rounds;
          cfg.grid = GridSpec{std::move(gammas), std::move(frequencies), true, true};
          cfg.boost = boost;
          cfg.limits.max_processed = max_processed;
          cfg.jobs = jobs;
          py::gil_scoped_release release;
          LoopResult r = loop(corpus, baseline_strategy(), cfg);
          return std::make_tuple(r.baseline_solved, r.solved.size(), r.report());
        },
        py::arg("corpus"), py::arg("rounds") = 1, py::arg("gammas") = full_grid().gammas,
        py::arg("frequencies") = full_grid().frequencies, py::arg("boost") = 1, py::arg("max_processed") = 1000,
        py::arg("jobs") = 1);
}
