#include "enigma/error.hpp"

namespace enigma {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ArityClash: return "ArityClash";
    case ErrorCode::KindClash: return "KindClash";
    case ErrorCode::SignatureFrozen: return "SignatureFrozen";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::SignatureTooLarge: return "SignatureTooLarge";
    case ErrorCode::NoProof: return "NoProof";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace enigma
