#pragma once

#include <string_view>

namespace afsec {

/// Every numeric tolerance used by the solvers and validators lives here.
struct Tolerances {
  double equality = 1e-8;         // relative; constraint equalities
  double residual = 1e-12;        // relative; cancellation / round-trip checks
  double gain_epsilon = 1e-9;     // minimum |h_sd| accepted by NetworkInstance
  double root_imag = 1e-9;        // |Im| <= root_imag * max(1, |Re|) counts as real
  double radicand_clip = 1e-12;   // radicand in [-clip*eta1, 0) is treated as 0
  double leading_coeff = 1e-14;   // relative size below which a leading coeff is dropped
  double observation_rho = 1e-9;  // |rho_e - 2| below this is singular
  double total_oracle_gap = 1e-6;
  double individual_oracle_gap = 1e-4;
  double eigen_relative = 1e-10;
};

/// Reads AFSEC_TOLERANCE_PROFILE (default | strict | loose).
Tolerances tolerances_from_env();

Tolerances tolerance_profile(std::string_view name);

}  // namespace afsec
