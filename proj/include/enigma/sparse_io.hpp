#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "enigma/linear_learner.hpp"

namespace enigma {

// One example per line: `<label> <idx>:<value> ...`, label `+1` or `-1`,
// indices strictly increasing. Integral values are written without a
// fractional part, so feature counts come out as `17:2`.
void write_example(std::ostream& out, Label label, const SparseVector& x);
void write_training_set(std::ostream& out, const TrainingSet& data);
void write_training_set(const TrainingSet& data, const std::filesystem::path& path);

// `dimension` of 0 means: infer as the largest index seen.
TrainingSet read_training_set(std::istream& in, std::uint64_t dimension = 0,
                              std::string_view source = "<examples>");
TrainingSet read_training_set(const std::filesystem::path& path, std::uint64_t dimension = 0);

// Symbol-table sidecar (`<examples>.sig`) so indices can be interpreted later.
void write_signature(std::ostream& out, const Signature& sig);
void write_signature(const Signature& sig, const std::filesystem::path& path);
Signature read_signature(std::istream& in, std::string_view source = "<signature>");
Signature read_signature(const std::filesystem::path& path);

// Re-indexes `data` (indexed over `from`) into the feature space of `to`,
// matching symbols by name. Features with unmatched symbols are dropped.
TrainingSet remap_training_set(const TrainingSet& data, const Signature& from, const Signature& to,
                               std::uint64_t* dropped = nullptr);

}  // namespace enigma
