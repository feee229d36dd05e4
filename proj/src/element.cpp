//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbo/element.h"

#include "molbo/error.h"

namespace molbo {
namespace {
constexpr int kValence1[] = { 1 };
constexpr int kValence2[] = { 2 };
constexpr int kValence3[] = { 3 };
constexpr int kValence4[] = { 4 };
constexpr int kValence5[] = { 5 };
constexpr int kSulfurValences[] = { 2, 4, 6 };

const std::array<ElementInfo, kNumElements> kTable = { {
  { "H", 1.008, 1, kValence1, false },
  { "B", 10.81, 3, kValence3, true },
  { "C", 12.011, 4, kValence4, true },
  { "N", 14.007, 3, kValence3, true },
  { "O", 15.999, 2, kValence2, true },
  { "F", 18.998, 1, kValence1, false },
  { "P", 30.974, 5, kValence5, true },
  { "S", 32.06, 6, kSulfurValences, true },
  { "Cl", 35.45, 1, kValence1, false },
  { "Br", 79.904, 1, kValence1, false },
  { "I", 126.904, 1, kValence1, false },
} };
}  // namespace

const ElementInfo &element_info(Element e) {
  return kTable[static_cast<std::size_t>(e)];
}

std::optional<Element> element_from_symbol(std::string_view sym) {
  for (Element e: kAllElements) {
    if (element_info(e).symbol == sym)
      return e;
  }
  return std::nullopt;
}

char bond_symbol(BondOrder order) {
  switch (order) {
  case BondOrder::kSingle:
    return '-';
  case BondOrder::kDouble:
    return '=';
  case BondOrder::kTriple:
    return '#';
  case BondOrder::kAromatic:
    return ':';
  }
  return '?';
}

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
  case ErrorCode::kUnknownToken:
    return "UnknownToken";
  case ErrorCode::kUnbalancedBranch:
    return "UnbalancedBranch";
  case ErrorCode::kUnclosedRing:
    return "UnclosedRing";
  case ErrorCode::kValenceExceeded:
    return "ValenceExceeded";
  case ErrorCode::kMultiFragmentInput:
    return "MultiFragmentInput";
  case ErrorCode::kInvalidStructure:
    return "InvalidStructure";
  case ErrorCode::kLengthMismatch:
    return "LengthMismatch";
  case ErrorCode::kSolverFailure:
    return "SolverFailure";
  case ErrorCode::kEigenFailure:
    return "EigenFailure";
  case ErrorCode::kCholeskyFailure:
    return "CholeskyFailure";
  case ErrorCode::kFitFailure:
    return "FitFailure";
  case ErrorCode::kCycleDetected:
    return "CycleDetected";
  case ErrorCode::kUnknownMolecule:
    return "UnknownMolecule";
  case ErrorCode::kMissingContribution:
    return "MissingContribution";
  case ErrorCode::kInvalidConfig:
    return "InvalidConfig";
  case ErrorCode::kIoError:
    return "IoError";
  }
  return "Unknown";
}

}  // namespace molbo
