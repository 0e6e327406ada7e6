#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace uqg {

enum class ErrorCode {
  InvalidInput,
  InvalidTolerance,
  NotHermitian,
  Singular,
  NotPositive,
  NotScalarQQbar,
  OddNegative,
  PairingViolation,
  EquationResidual,
  BadN,
  UnsupportedInput,
  AmbiguousClustering,
  Undecidable,
};

// Stable machine-readable name, used verbatim in CLI reports.
constexpr std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid_input";
    case ErrorCode::InvalidTolerance: return "invalid_tolerance";
    case ErrorCode::NotHermitian: return "not_hermitian";
    case ErrorCode::Singular: return "singular";
    case ErrorCode::NotPositive: return "not_positive";
    case ErrorCode::NotScalarQQbar: return "not_scalar_qqbar";
    case ErrorCode::OddNegative: return "odd_negative";
    case ErrorCode::PairingViolation: return "pairing_violation";
    case ErrorCode::EquationResidual: return "equation_residual";
    case ErrorCode::BadN: return "bad_n";
    case ErrorCode::UnsupportedInput: return "unsupported_input";
    case ErrorCode::AmbiguousClustering: return "ambiguous_clustering";
    case ErrorCode::Undecidable: return "undecidable";
  }
  return "unknown";
}

/// Exception carrying a machine-readable code and optional diagnostic lines.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::vector<std::string> diagnostics = {})
      : std::runtime_error(what), code_(code), diagnostics_(std::move(diagnostics)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  ErrorCode code_;
  std::vector<std::string> diagnostics_;
};

}  // namespace uqg
