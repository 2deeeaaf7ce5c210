#pragma once

#include <stdexcept>
#include <string>

namespace stochastik {

enum class ErrorCode {
  NegativeEntry,
  RowSumNotOne,
  DimensionMismatch,
  NoReturnPath,
  NotAbsorbing,
  SingularMatrix,
  NotIrreducible,
  DegenerateNullSpace,
  ZeroMass,
  NotReversible,
  ConvergenceFailure,
  NonPositiveRate,
  DomainError,
  EmptyProposalSet,
  BadSite,
  UniformConfig,
  BadDistanceMatrix,
  BadInterval,
  HorizonMismatch,
  Collision,
  BadDiagonal,
  NegativeRate,
  RowSumNotZero,
  ToleranceUnachievable,
  DivergentNormalizer,
  CapTooSmall,
  StabilityError,
  InsufficientData,
  UnknownModel,
  BadLawSpec,
  BadInput,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::RowSumNotOne: return "RowSumNotOne";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoReturnPath: return "NoReturnPath";
    case ErrorCode::NotAbsorbing: return "NotAbsorbing";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::DegenerateNullSpace: return "DegenerateNullSpace";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::NotReversible: return "NotReversible";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NonPositiveRate: return "NonPositiveRate";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::EmptyProposalSet: return "EmptyProposalSet";
    case ErrorCode::BadSite: return "BadSite";
    case ErrorCode::UniformConfig: return "UniformConfig";
    case ErrorCode::BadDistanceMatrix: return "BadDistanceMatrix";
    case ErrorCode::BadInterval: return "BadInterval";
    case ErrorCode::HorizonMismatch: return "HorizonMismatch";
    case ErrorCode::Collision: return "Collision";
    case ErrorCode::BadDiagonal: return "BadDiagonal";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::RowSumNotZero: return "RowSumNotZero";
    case ErrorCode::ToleranceUnachievable: return "ToleranceUnachievable";
    case ErrorCode::DivergentNormalizer: return "DivergentNormalizer";
    case ErrorCode::CapTooSmall: return "CapTooSmall";
    case ErrorCode::StabilityError: return "StabilityError";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::UnknownModel: return "UnknownModel";
    case ErrorCode::BadLawSpec: return "BadLawSpec";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stochastik
