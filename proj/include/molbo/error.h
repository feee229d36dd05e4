//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_ERROR_H_
#define MOLBO_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace molbo {

enum class ErrorCode {
  // SMILES / molecule construction
  kUnknownToken,
  kUnbalancedBranch,
  kUnclosedRing,
  kValenceExceeded,
  kMultiFragmentInput,
  kInvalidStructure,
  // numerics
  kLengthMismatch,
  kSolverFailure,
  kEigenFailure,
  kCholeskyFailure,
  kFitFailure,
  // synthesis bookkeeping
  kCycleDetected,
  kUnknownMolecule,
  // objectives
  kMissingContribution,
  // configuration and files
  kInvalidConfig,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

class Error: public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) { }

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace molbo

#endif  // MOLBO_ERROR_H_
