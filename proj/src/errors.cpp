#include "afsec/errors.hpp"

namespace afsec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NoRelays: return "NoRelays";
    case ErrorCode::InfeasibleThreshold: return "InfeasibleThreshold";
    case ErrorCode::SingularObservation: return "SingularObservation";
    case ErrorCode::DegenerateAlpha: return "DegenerateAlpha";
    case ErrorCode::InfeasibleBudget: return "InfeasibleBudget";
    case ErrorCode::NoFeasibleRoot: return "NoFeasibleRoot";
    case ErrorCode::OracleEvalError: return "OracleEvalError";
    case ErrorCode::OracleTooLarge: return "OracleTooLarge";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace afsec
