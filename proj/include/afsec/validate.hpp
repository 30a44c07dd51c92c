#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "afsec/tolerances.hpp"

namespace afsec {

struct ValidationOptions {
  std::string suite;  // total | individual | signals
  std::uint64_t seed = 1;
  std::size_t instances = 0;  // 0 picks the suite default
  std::size_t workers = 1;
  Tolerances tol;
};

struct ValidationResult {
  bool passed = true;
  std::size_t checks = 0;
  std::size_t failures = 0;
  nlohmann::json report;  // one entry per instance
};

/// Cross-checks the analytic solvers against the oracles on seeded random
/// instances. Throws InvalidInput for an unknown suite name.
ValidationResult run_validation(const ValidationOptions& options);

}  // namespace afsec
