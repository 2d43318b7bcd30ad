#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clir {

enum class ErrorCode {
  MalformedHeader,
  CountMismatch,
  IndexOutOfRange,
  InvalidMesh,
  ZeroSurfaceArea,
  DegenerateExtent,
  ModeMismatch,
  EmptySet,
  OrderTooLarge,
  ZeroMass,
  ConfigError,
  EmptyCorpus,
  UnwritableOutput,
  KindMismatch,
  ConfigMismatch,
  NoRelevantModels,
  CorruptIndex,
  NotFound,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it to an exit status and tests can check the exact failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidMesh: return "InvalidMesh";
    case ErrorCode::ZeroSurfaceArea: return "ZeroSurfaceArea";
    case ErrorCode::DegenerateExtent: return "DegenerateExtent";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::OrderTooLarge: return "OrderTooLarge";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::UnwritableOutput: return "UnwritableOutput";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::NoRelevantModels: return "NoRelevantModels";
    case ErrorCode::CorruptIndex: return "CorruptIndex";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace clir
