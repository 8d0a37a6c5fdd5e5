#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tdp {

enum class ErrorKind {
  DivisionByZero,
  MixedFields,
  ExtensionHeightExceeded,
  EvenCharacteristic,
  NotAnExtension,
  NotInSubfield,
  InvalidField,
  Parse,
  DimensionMismatch,
  ZeroVector,
  EigenvalueSearchFailed,
  NotDiagonalizable,
  TooLarge,
  RepeatedEigenvalue,
  NotAPath,
  InvariantViolation,
  NotSharp,
  NotScalarMultiple,
  OnlyIfViolated,
  IndexOutOfRange,
  ZeroPhi,
  IdentityViolated,
  ActionMismatch,
  CapExceeded,
  InvalidArgument,
  CandidateRejected,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace tdp
