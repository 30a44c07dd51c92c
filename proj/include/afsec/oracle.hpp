#pragma once

// Independent numerical checks for the analytic solvers. Nothing here calls
// into the solvers' optimization paths except to obtain the value being
// checked; every oracle reaches its own answer by search or simulation.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "afsec/model.hpp"

namespace afsec {

struct OracleReport {
  double analytic_value = 0.0;
  double oracle_value = 0.0;
  double gap = 0.0;  // analytic - oracle; negative means the oracle won
  double argmax_distance = 0.0;
  std::size_t samples_or_evals = 0;
};

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
  std::size_t iterations = 0;
};

/// Maximizes f on [lo, hi] by golden-section search to bracket width tol.
/// The endpoints are compared against the interior result and the best is
/// returned. Throws OracleEvalError if f returns a non-finite value.
GoldenResult golden_section(const std::function<double(double)>& f, double lo, double hi,
                            double tol);

/// Coarse grid scan first, then golden-section search in the two cells
/// around the best node. Guards against f not being unimodal.
GoldenResult maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                             double tol, std::size_t grid_points = 256);

struct TotalOracleOptions {
  std::size_t samples = 10000;
  std::size_t sweeps = 200;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

/// Random directions scaled onto w^H D w = P_tot, then projected coordinate
/// ascent from the best sample. Values are C_d in bits per channel use.
OracleReport oracle_total(const NetworkInstance& instance, double p1, double alpha, double p_tot,
                          const TotalOracleOptions& options = {});

/// Largest eigenvalue of D~^{-1} conj(h) conj(h)^H by power iteration, with
/// D~ inverted through a full-pivot LU.
double eigen_rayleigh_value(const NetworkInstance& instance, double p1, double alpha,
                            double p_tot, std::size_t iterations = 5, std::uint64_t seed = 1);

/// Exhaustive grid over the relay magnitude box (M <= 3), followed by a
/// pattern-search refinement from the best cells. Values are C_d.
OracleReport oracle_individual_grid(const NetworkInstance& instance, double p1, double alpha,
                                    const IndividualBudget& budget, double grid_step);

struct EmpiricalSnr {
  double snr_direct = 0.0;
  double snr_beam = 0.0;
  std::vector<double> relay_snr;
  std::vector<double> relay_snr_stderr;  // standard error of each relay estimate
  double message_power_at_relays = 0.0;  // mean over relays of measured message power
  double artificial_noise_power = 0.0;   // measured u power at the destination, phase 2
  double second_phase_power = 0.0;       // mean transmitted power, phase 2
  std::size_t symbols = 0;
};

/// Simulates every waveform of both phases symbol by symbol and measures
/// SINRs from sample averages. Symbols are drawn in fixed-size chunks, one
/// stream per chunk, so the result does not depend on the worker count.
EmpiricalSnr empirical_snr(const NetworkInstance& instance, double p1, double alpha,
                           const CVector& w, std::size_t n_symbols, std::uint64_t seed,
                           std::size_t workers = 1);

}  // namespace afsec
