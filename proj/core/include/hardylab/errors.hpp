#pragma once

#include <stdexcept>
#include <string>

namespace hardylab {

enum class ErrorCode {
  BasisMismatch,
  DimensionMismatch,
  ZeroVector,
  ZeroProbabilityCondition,
  PostSelectionIncompatible,
  NonIsometricMap,
  MissingObservable,
  StageMismatch,
  InvalidArgument,
};

/// Domain-level failure carrying a stable code alongside the message, so
/// callers (and the CLI exit-code mapping) can dispatch without string
/// matching.
class DomainError : public std::runtime_error {
 public:
  DomainError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hardylab
