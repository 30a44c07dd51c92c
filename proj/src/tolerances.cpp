#include "afsec/tolerances.hpp"

#include <cstdlib>
#include <string>

#include "afsec/errors.hpp"

namespace afsec {

Tolerances tolerance_profile(std::string_view name) {
  Tolerances tol;
  if (name.empty() || name == "default") return tol;
  if (name == "strict") {
    tol.equality = 1e-10;
    tol.total_oracle_gap = 1e-8;
    tol.individual_oracle_gap = 1e-5;
    return tol;
  }
  if (name == "loose") {
    tol.equality = 1e-6;
    tol.residual = 1e-10;
    tol.total_oracle_gap = 1e-4;
    tol.individual_oracle_gap = 1e-3;
    tol.eigen_relative = 1e-8;
    return tol;
  }
  throw Error(ErrorCode::InvalidInput, "unknown tolerance profile '" + std::string(name) + "'");
}

Tolerances tolerances_from_env() {
  const char* profile = std::getenv("AFSEC_TOLERANCE_PROFILE");
  return tolerance_profile(profile ? profile : "");
}

}  // namespace afsec
