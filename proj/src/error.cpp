#include "unf/error.hpp"

namespace unf {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidDomain: return "InvalidDomain";
    case ErrorKind::NonPositiveBeta: return "NonPositiveBeta";
    case ErrorKind::DegenerateParameters: return "DegenerateParameters";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::EventNotFound: return "EventNotFound";
    case ErrorKind::Escaped: return "Escaped";
    case ErrorKind::ConvergedToFocus: return "ConvergedToFocus";
    case ErrorKind::LadderTruncated: return "LadderTruncated";
    case ErrorKind::BracketNotSignChanging: return "BracketNotSignChanging";
    case ErrorKind::FateInterference: return "FateInterference";
    case ErrorKind::TwistMismatch: return "TwistMismatch";
    case ErrorKind::EmptyTrace: return "EmptyTrace";
    case ErrorKind::Unconverged: return "Unconverged";
  }
  return "Unknown";
}

bool is_domain_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidDomain:
    case ErrorKind::NonPositiveBeta:
    case ErrorKind::DegenerateParameters:
    case ErrorKind::OutOfRange:
    case ErrorKind::BracketNotSignChanging:
      return true;
    default:
      return false;
  }
}

}  // namespace unf
