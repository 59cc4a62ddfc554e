#include "latmaj/error.hpp"

namespace latmaj {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::RaggedRows: return "RaggedRows";
    case Errc::LevelOutOfRange: return "LevelOutOfRange";
    case Errc::Unbalanced: return "Unbalanced";
    case Errc::QNotDividingN: return "QNotDividingN";
    case Errc::TooFewRuns: return "TooFewRuns";
    case Errc::EmptySubset: return "EmptySubset";
    case Errc::ColumnOutOfRange: return "ColumnOutOfRange";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::SumMismatch: return "SumMismatch";
    case Errc::MixedParameters: return "MixedParameters";
    case Errc::MfNotIntegral: return "MfNotIntegral";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::RouteMismatch: return "RouteMismatch";
    case Errc::RelationMismatch: return "RelationMismatch";
    case Errc::TooFewFactors: return "TooFewFactors";
    case Errc::WrongLevelCount: return "WrongLevelCount";
    case Errc::InvalidDiscrepancyParams: return "InvalidDiscrepancyParams";
    case Errc::UnsupportedLevelCount: return "UnsupportedLevelCount";
    case Errc::StaleProposal: return "StaleProposal";
    case Errc::KernelSyntax: return "KernelSyntax";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace latmaj
