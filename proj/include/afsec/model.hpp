#pragma once

// Channel model for two-phase amplify-and-forward relaying with
// source-injected artificial noise.
//
// Phase 1: the source broadcasts sqrt(a P1) x + sqrt((1-a) P1) u, where x is
// the message and u the artificial noise. Phase 2: relay i forwards w_i y_i,
// and the source sends w_0 sqrt(a P1) x minus the term that cancels the
// relayed u at the destination.

#include <complex>
#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "afsec/tolerances.hpp"

namespace afsec {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// One channel realization. Validated on construction.
class NetworkInstance {
 public:
  NetworkInstance(cplx h_sd, std::vector<cplx> h_sr, std::vector<cplx> h_rd, double sigma2,
                  const Tolerances& tol = {});

  cplx h_sd() const { return h_sd_; }
  const std::vector<cplx>& h_sr() const { return h_sr_; }
  const std::vector<cplx>& h_rd() const { return h_rd_; }
  double sigma2() const { return sigma2_; }
  std::size_t relay_count() const { return h_sr_.size(); }

  /// Keeps only the first m relays.
  NetworkInstance truncated(std::size_t m) const;

  friend bool operator==(const NetworkInstance&, const NetworkInstance&) = default;

 private:
  cplx h_sd_;
  std::vector<cplx> h_sr_;
  std::vector<cplx> h_rd_;
  double sigma2_;
};

struct TotalBudget {
  double p_tot = 0.0;
  friend bool operator==(const TotalBudget&, const TotalBudget&) = default;
};

struct IndividualBudget {
  double p_s = 0.0;
  std::vector<double> p_i;
  friend bool operator==(const IndividualBudget&, const IndividualBudget&) = default;
};

using Budget = std::variant<TotalBudget, IndividualBudget>;

struct SystemParams {
  double p1 = 1.0;
  double gamma = 1.0;
  Budget budget = TotalBudget{1.0};

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Throws InvalidInput on non-positive powers or a P_i list of the wrong length.
void validate_params(const SystemParams& params, std::size_t relay_count);

/// Quantities derived from (instance, P1, alpha). The eta* fields and u_max
/// are filled only when an individual budget is supplied.
struct DerivedModel {
  double alpha = 0.0;
  double p1 = 0.0;
  double sigma2 = 0.0;
  CVector h;         // [h_sd, h_s1 h_1d, ...]; message coefficient at D is h^T w
  CVector g;         // g_i = h_si h_id / h_sd
  RVector c;         // [|h_sd|, |h_s1|, ..., |h_sM|]
  RVector d_h_diag;  // [0, |h_1d|^2, ...]
  RVector t_diag;    // |h_si|^2 P1 + sigma^2
  RVector u_max;     // |h_id| sqrt(P_i / t_i)
  std::optional<double> p_s;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double eta3 = 0.0;

  std::size_t relay_count() const { return static_cast<std::size_t>(g.size()); }
};

DerivedModel derive_model(const NetworkInstance& instance, double p1, double alpha,
                          const IndividualBudget* budget = nullptr);

/// Dense second-phase power matrix D, so that w^H D w is the total power.
CMatrix power_matrix(const DerivedModel& model);

/// Dense D_s: the source's share of D.
CMatrix source_power_matrix(const DerivedModel& model);

struct BeamDiagnostics {
  struct RootCandidate {
    double r = 0.0;
    double objective = 0.0;
    bool boundary = false;
  };

  std::vector<std::size_t> clamped;  // relay indices fixed at their bound, in clamp order
  std::vector<RootCandidate> root_candidates;
  std::size_t iterations = 0;
  bool root_fallback = false;  // no admissible quartic root; r = 0 used
  // Total-power solve only.
  CVector direction;  // unnormalized D~^{-1} conj(h)
  double mu = 0.0;
  double rayleigh_value = 0.0;
};

struct BeamSolution {
  CVector w;  // [w_0, w_1, ..., w_M]
  double alpha = 0.0;
  double c_d = 0.0;
  double second_phase_power = 0.0;
  double source_power = 0.0;
  std::vector<double> relay_powers;
  BeamDiagnostics diagnostics;
};

/// One draw of the random quantities in the signal model. z[0] is the
/// destination's second-phase noise, z[i] the noise at relay i.
struct SignalRealization {
  cplx x;
  cplx u;
  std::vector<cplx> z;
};

/// Index (0-based) of the relay with the largest |h_si|^2; ties go low.
std::size_t strongest_relay(const NetworkInstance& instance);

/// Power split that puts the strongest relay's SNR exactly at gamma.
double alpha_for_threshold(const NetworkInstance& instance, double p1, double gamma);

double relay_snr(const NetworkInstance& instance, double p1, double alpha, std::size_t relay);
double capacity_relay(const NetworkInstance& instance, double p1, double alpha, std::size_t relay);

/// SINR of the direct first-phase link, noise plus artificial noise as interference.
double direct_sinr(const NetworkInstance& instance, double p1, double alpha);

/// SINR contributed by the second (beamforming) phase.
double beam_sinr(const NetworkInstance& instance, double p1, double alpha, const CVector& w);

/// MRC capacity at the destination, bits per channel use (two-phase pre-log 1/2).
double capacity_dest(const NetworkInstance& instance, double p1, double alpha, const CVector& w);

/// C_d - C_e for the strongest relay e. May be negative.
double secrecy_rate(const NetworkInstance& instance, double p1, double alpha, const CVector& w);

/// f(w) = |h^T w|^2 P1 / (sigma^2 (1 + w^H D_h w)).
double beam_gain(const NetworkInstance& instance, double p1, const CVector& w);

/// Right-hand side of the alpha-monotonicity condition on f(w).
/// Throws SingularObservation when rho_e is within tolerance of 2.
double alpha_monotonicity_threshold(const NetworkInstance& instance, double p1,
                                    const Tolerances& tol = {});

/// True when f(w) clears the threshold. Sufficient for C_d - C_e to increase
/// in alpha only when rho_e > 2.
bool secrecy_increases_with_alpha(const NetworkInstance& instance, double p1, const CVector& w,
                                  const Tolerances& tol = {});

/// Block-form second-phase power: source plus all relays.
double second_phase_power(const NetworkInstance& instance, double p1, double alpha,
                          const CVector& w);
double source_power(const NetworkInstance& instance, double p1, double alpha, const CVector& w);
/// |w_i|^2 (|h_si|^2 P1 + sigma^2) per relay.
std::vector<double> relay_powers(const NetworkInstance& instance, double p1, const CVector& w);

/// Coefficients of y_d (second phase) obtained by propagating every
/// transmitted component separately.
struct DestinationResponse {
  cplx message;          // multiplies x
  cplx artificial_noise; // multiplies u; zero up to rounding
  cplx received;         // y_d for the given realization
  double noise_scale = 0.0;  // sum |w_i h_si h_id| sqrt((1-a) P1), the size of the cancelled terms
};

DestinationResponse propagate_second_phase(const NetworkInstance& instance, double p1,
                                           double alpha, const CVector& w,
                                           const SignalRealization& realization);

/// The u-coefficient at the destination after cancellation.
cplx simulate_noise_residual(const NetworkInstance& instance, double p1, double alpha,
                             const CVector& w, const SignalRealization& realization);

}  // namespace afsec
