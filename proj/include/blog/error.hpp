#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blog {

enum class ErrorCode {
  // input / validation
  FileNotFound,
  MissingCell,
  RaggedPanel,
  DuplicateKey,
  MissingColumn,
  TooFewTimePoints,
  DimensionMismatch,
  InvalidArgument,
  InvalidR2,
  DegenerateDf,
  EmptyChain,
  ZeroDesign,
  // numerical
  SingularDesign,
  UnderdeterminedSystem,
  RankDeficientDesign,
  SingularCovariance,
  NonPositiveG,
  ZeroResidual,
  DegenerateBeta,
  NonConvergentSigma,
};

std::string_view to_string(ErrorCode code) noexcept;

// True for failures of the numerical machinery rather than of the input.
bool is_numerical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace blog
