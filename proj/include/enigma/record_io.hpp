#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "enigma/saturation.hpp"

namespace enigma {

// JSON shape:
//   { "problem", "strategy", "outcome", "given": [ids], "empty_clause": id|null,
//     "clauses": [{"id", "parents": [ids], "role", "name", "literals"}], "stats": {...} }
// Only given clauses, the proof and their ancestors are written.
std::string record_to_json(const ProofSearchRecord& record, int indent = 1);
void save_record(const ProofSearchRecord& record, const std::filesystem::path& path);

// Clause texts are parsed into `sig`, which must accept any new symbols.
ProofSearchRecord record_from_json(std::string_view json, std::shared_ptr<Signature> sig,
                                   std::string_view source = "<record>");
ProofSearchRecord load_record(const std::filesystem::path& path, std::shared_ptr<Signature> sig);

}  // namespace enigma
