#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "enigma/clause_model.hpp"

namespace enigma {

/// One problem file: its input clauses over a (possibly shared) signature.
struct Problem {
  std::string name;
  std::shared_ptr<Signature> signature;
  std::vector<Clause> clauses;
};

// Parses the TPTP CNF subset: `cnf(name, role, (lit | ... )).`, `%` comments.
// Clauses are numbered from 0 in file order; `source` names the input in errors.
Problem parse_problem(std::string_view text, std::shared_ptr<Signature> sig,
                      std::string name = "problem", std::string_view source = "<input>");

Problem load_problem(const std::filesystem::path& path, std::shared_ptr<Signature> sig = nullptr);

// Parses a bare disjunction such as `p(X) | ~q(f(a)) | X != Y` (or `$false`).
std::vector<Literal> parse_literals(std::string_view text, Signature& sig,
                                    std::string_view source = "<input>");

Clause parse_clause(std::string_view text, Signature& sig);

}  // namespace enigma
