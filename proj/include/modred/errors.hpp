#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace modred {

enum class ErrorCode {
  NotSPD,
  NotHurwitz,
  Singular,
  QuadratureFailure,
  InvalidParams,
  NotOverdamped,
  Unsupported,
  EmptyGrid,
  UnstableStep,
  NonFinite,
  LengthMismatch,
  TooFewSamples,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSPD: return "NotSPD";
    case ErrorCode::NotHurwitz: return "NotHurwitz";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NotOverdamped: return "NotOverdamped";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::UnstableStep: return "UnstableStep";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message is "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace modred
