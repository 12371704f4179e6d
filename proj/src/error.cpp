#include "blog/error.hpp"

namespace blog {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::MissingCell: return "MissingCell";
    case ErrorCode::RaggedPanel: return "RaggedPanel";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::TooFewTimePoints: return "TooFewTimePoints";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidR2: return "InvalidR2";
    case ErrorCode::DegenerateDf: return "DegenerateDf";
    case ErrorCode::EmptyChain: return "EmptyChain";
    case ErrorCode::ZeroDesign: return "ZeroDesign";
    case ErrorCode::SingularDesign: return "SingularDesign";
    case ErrorCode::UnderdeterminedSystem: return "UnderdeterminedSystem";
    case ErrorCode::RankDeficientDesign: return "RankDeficientDesign";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::NonPositiveG: return "NonPositiveG";
    case ErrorCode::ZeroResidual: return "ZeroResidual";
    case ErrorCode::DegenerateBeta: return "DegenerateBeta";
    case ErrorCode::NonConvergentSigma: return "NonConvergentSigma";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularDesign:
    case ErrorCode::UnderdeterminedSystem:
    case ErrorCode::RankDeficientDesign:
    case ErrorCode::SingularCovariance:
    case ErrorCode::NonPositiveG:
    case ErrorCode::ZeroResidual:
    case ErrorCode::DegenerateBeta:
    case ErrorCode::NonConvergentSigma:
      return true;
    default:
      return false;
  }
}

}  // namespace blog
