#pragma once

#include <stdexcept>
#include <string>

namespace enigma {

enum class ErrorCode {
  ArityClash,
  KindClash,
  SignatureFrozen,
  UnknownSymbol,
  ParseError,
  FormatError,
  EmptyClass,
  NonFinite,
  SignatureTooLarge,
  NoProof,
  InvalidArgument,
  IoError,
};

const char* to_string(ErrorCode code);

// Single exception type for the library; the code distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace enigma
