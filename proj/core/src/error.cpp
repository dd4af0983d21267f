#include "curvedborn/types.hpp"

namespace curvedborn {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonLorentzian: return "NonLorentzian";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::DifferentiationFailure: return "DifferentiationFailure";
    case ErrorKind::NotTimelike: return "NotTimelike";
    case ErrorKind::PastDirected: return "PastDirected";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::DegenerateImmersion: return "DegenerateImmersion";
    case ErrorKind::NotSpacelike: return "NotSpacelike";
    case ErrorKind::LeftChartDomain: return "LeftChartDomain";
    case ErrorKind::StepSizeTooLarge: return "StepSizeTooLarge";
    case ErrorKind::RootNotBracketable: return "RootNotBracketable";
    case ErrorKind::SuperluminalVelocity: return "SuperluminalVelocity";
    case ErrorKind::NonPositiveRescaling: return "NonPositiveRescaling";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace curvedborn
