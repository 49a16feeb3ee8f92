#include "enigma/record_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "enigma/error.hpp"

namespace enigma {

using nlohmann::json;

std::string record_to_json(const ProofSearchRecord& record, int indent) {
  ProofSearchRecord r = record.trimmed();
  const Signature& sig = *r.signature;
  json j;
  j["problem"] = r.problem;
  j["strategy"] = r.strategy;
  j["outcome"] = to_string(r.outcome);
  j["given"] = r.given_sequence;
  j["empty_clause"] = r.empty_clause ? json(*r.empty_clause) : json(nullptr);
  json clauses = json::array();
  for (const auto& c : r.clauses) {
    clauses.push_back({{"id", c.id},
                       {"parents", c.parents},
                       {"role", c.role == ClauseRole::Input ? "input" : "derived"},
                       {"name", c.name},
                       {"literals", to_string(c, sig)}});
  }
  j["clauses"] = std::move(clauses);
  const ProverStats& s = r.stats;
  j["stats"] = {{"processed", s.processed},   {"generated", s.generated},
                {"kept", s.kept},             {"subsumed", s.subsumed},
                {"tautologies", s.tautologies}, {"duplicates", s.duplicates},
                {"over_limits", s.over_limits}, {"dropped_features", s.dropped_features},
                {"seconds", s.seconds}};
  return j.dump(indent);
}

void save_record(const ProofSearchRecord& record, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write record '" + path.string() + "'");
  out << record_to_json(record) << '\n';
}

ProofSearchRecord record_from_json(std::string_view text, std::shared_ptr<Signature> sig,
                                   std::string_view source) {
  auto fail = [&](const std::string& what) {
    return Error(ErrorCode::FormatError, std::string(source) + ": " + what);
  };
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw fail(e.what());
  }
  try {
    ProofSearchRecord r;
    r.signature = sig;
    r.problem = j.at("problem").get<std::string>();
    r.strategy = j.value("strategy", std::string());
    auto outcome = outcome_from_string(j.at("outcome").get<std::string>());
    if (!outcome) throw fail("unknown outcome");
    r.outcome = *outcome;
    r.given_sequence = j.at("given").get<std::vector<ClauseId>>();
    if (!j.at("empty_clause").is_null()) r.empty_clause = j.at("empty_clause").get<ClauseId>();
    for (const auto& jc : j.at("clauses")) {
      Clause c;
      c.id = jc.at("id").get<ClauseId>();
      c.age = c.id;
      c.parents = jc.at("parents").get<std::vector<ClauseId>>();
      c.role = jc.at("role").get<std::string>() == "input" ? ClauseRole::Input : ClauseRole::Derived;
      c.name = jc.value("name", std::string());
      std::string lits = jc.at("literals").get<std::string>();
      c.literals = parse_literals(lits, *sig, source);
      c.num_vars = normalize_variables(c.literals);
      for (ClauseId p : c.parents) {
        if (p >= c.id) throw fail("clause " + std::to_string(c.id) + " has a parent with a larger id");
      }
      if (!r.clauses.empty() && r.clauses.back().id >= c.id) throw fail("clauses must be sorted by id");
      r.clauses.push_back(std::move(c));
    }
    for (ClauseId id : r.given_sequence) {
      if (!r.find(id)) throw fail("given clause " + std::to_string(id) + " missing from clauses");
    }
    if (r.empty_clause && !r.find(*r.empty_clause)) throw fail("empty clause missing from clauses");
    if (r.outcome == Outcome::ProofFound && !r.empty_clause) throw fail("proof without an empty clause");
    if (j.contains("stats")) {
      const json& s = j["stats"];
      r.stats.processed = s.value("processed", std::uint64_t{0});
      r.stats.generated = s.value("generated", std::uint64_t{0});
      r.stats.kept = s.value("kept", std::uint64_t{0});
      r.stats.subsumed = s.value("subsumed", std::uint64_t{0});
      r.stats.tautologies = s.value("tautologies", std::uint64_t{0});
      r.stats.duplicates = s.value("duplicates", std::uint64_t{0});
      r.stats.over_limits = s.value("over_limits", std::uint64_t{0});
      r.stats.dropped_features = s.value("dropped_features", std::uint64_t{0});
      r.stats.seconds = s.value("seconds", 0.0);
    }
    return r;
  } catch (const json::exception& e) {
    throw fail(e.what());
  }
}

ProofSearchRecord load_record(const std::filesystem::path& path, std::shared_ptr<Signature> sig) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open record '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return record_from_json(buffer.str(), std::move(sig), path.string());
}

}  // namespace enigma
