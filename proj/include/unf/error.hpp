#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace unf {

// Failure categories shared by every module. Domain errors map to CLI exit
// code 2, numerical failures to exit code 3.
enum class ErrorKind {
  InvalidDomain,
  NonPositiveBeta,
  DegenerateParameters,
  OutOfRange,
  NoConvergence,
  StepSizeUnderflow,
  EventNotFound,
  Escaped,
  ConvergedToFocus,
  LadderTruncated,
  BracketNotSignChanging,
  FateInterference,
  TwistMismatch,
  EmptyTrace,
  Unconverged,
};

std::string_view to_string(ErrorKind kind) noexcept;

bool is_domain_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace unf
