#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace latmaj {

enum class Errc {
  RaggedRows,
  LevelOutOfRange,
  Unbalanced,
  QNotDividingN,
  TooFewRuns,
  EmptySubset,
  ColumnOutOfRange,
  LengthMismatch,
  SumMismatch,
  MixedParameters,
  MfNotIntegral,
  InvalidParameter,
  OutOfRange,
  RouteMismatch,
  RelationMismatch,
  TooFewFactors,
  WrongLevelCount,
  InvalidDiscrepancyParams,
  UnsupportedLevelCount,
  StaleProposal,
  KernelSyntax,
  FileNotFound,
  ParseError,
};

std::string_view errc_name(Errc code) noexcept;

/// Domain error raised by every library operation. `code()` identifies the
/// failure class; `what()` carries a human-readable description.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace latmaj
