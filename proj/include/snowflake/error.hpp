#pragma once

#include <stdexcept>
#include <string>

namespace snowflake {

enum class Errc {
  InvalidMatrix,
  NotIrreducible,
  ZeroMatrix,
  LambdaNotGreaterThanOne,
  RowSumViolation,
  DomainError,
  OutOfRange,
  NonRepresentable,
  InvalidArity,
  RationalRNotAllowed,
  UnknownGenerator,
  NotACPower,
  NotEqual,
  SlopeTooSmall,
  InsufficientData,
  NonPositiveIndex,
  IllFormed,
  Overflow,
  Internal,
};

const char* errc_name(Errc code);

// Precondition and domain failures. The message is a single line.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace snowflake
