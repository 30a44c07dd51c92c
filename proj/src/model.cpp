#include "afsec/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "afsec/errors.hpp"

namespace afsec {

namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

void require_alpha(double alpha) {
  require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::InvalidInput, "alpha must lie in [0, 1]");
}

void require_length(const NetworkInstance& instance, const CVector& w) {
  require(static_cast<std::size_t>(w.size()) == instance.relay_count() + 1,
          ErrorCode::InvalidInput, "w must have M + 1 entries");
}

double half_log2(double sinr) { return 0.5 * std::log2(1.0 + sinr); }

}  // namespace

NetworkInstance::NetworkInstance(cplx h_sd, std::vector<cplx> h_sr, std::vector<cplx> h_rd,
                                 double sigma2, const Tolerances& tol)
    : h_sd_(h_sd), h_sr_(std::move(h_sr)), h_rd_(std::move(h_rd)), sigma2_(sigma2) {
  require(h_sr_.size() == h_rd_.size(), ErrorCode::InvalidInput,
          "h_sr and h_rd must have the same length");
  require(std::isfinite(sigma2_) && sigma2_ > 0.0, ErrorCode::InvalidInput, "sigma2 must be > 0");
  require(std::abs(h_sd_) >= tol.gain_epsilon, ErrorCode::InvalidInput,
          "|h_sd| is below the gain floor");
  auto finite = [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
  require(finite(h_sd_), ErrorCode::InvalidInput, "h_sd is not finite");
  for (std::size_t i = 0; i < h_sr_.size(); ++i) {
    require(finite(h_sr_[i]) && finite(h_rd_[i]), ErrorCode::InvalidInput,
            "relay gain " + std::to_string(i) + " is not finite");
  }
}

NetworkInstance NetworkInstance::truncated(std::size_t m) const {
  require(m <= relay_count(), ErrorCode::InvalidInput, "cannot truncate to more relays");
  return NetworkInstance(h_sd_, {h_sr_.begin(), h_sr_.begin() + static_cast<long>(m)},
                         {h_rd_.begin(), h_rd_.begin() + static_cast<long>(m)}, sigma2_);
}

void validate_params(const SystemParams& params, std::size_t relay_count) {
  require(std::isfinite(params.p1) && params.p1 > 0.0, ErrorCode::InvalidInput, "p1 must be > 0");
  require(std::isfinite(params.gamma) && params.gamma > 0.0, ErrorCode::InvalidInput,
          "gamma must be > 0");
  if (const auto* total = std::get_if<TotalBudget>(&params.budget)) {
    require(std::isfinite(total->p_tot) && total->p_tot > 0.0, ErrorCode::InvalidInput,
            "p_tot must be > 0");
  } else {
    const auto& ind = std::get<IndividualBudget>(params.budget);
    require(std::isfinite(ind.p_s) && ind.p_s > 0.0, ErrorCode::InvalidInput, "p_s must be > 0");
    require(ind.p_i.size() == relay_count, ErrorCode::InvalidInput,
            "p_i must list one budget per relay");
    for (double p : ind.p_i) {
      require(std::isfinite(p) && p >= 0.0, ErrorCode::InvalidInput, "p_i must be >= 0");
    }
  }
}

DerivedModel derive_model(const NetworkInstance& instance, double p1, double alpha,
                          const IndividualBudget* budget) {
  require_alpha(alpha);
  require(p1 > 0.0, ErrorCode::InvalidInput, "p1 must be > 0");
  const auto m = static_cast<Eigen::Index>(instance.relay_count());
  const double sigma2 = instance.sigma2();
  const cplx h_sd = instance.h_sd();

  DerivedModel model;
  model.alpha = alpha;
  model.p1 = p1;
  model.sigma2 = sigma2;
  model.h.resize(m + 1);
  model.g.resize(m);
  model.c.resize(m + 1);
  model.d_h_diag.resize(m + 1);
  model.t_diag.resize(m);

  model.h(0) = h_sd;
  model.c(0) = std::abs(h_sd);
  model.d_h_diag(0) = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const cplx sr = instance.h_sr()[static_cast<std::size_t>(i)];
    const cplx rd = instance.h_rd()[static_cast<std::size_t>(i)];
    model.h(i + 1) = sr * rd;
    model.g(i) = sr * rd / h_sd;
    model.c(i + 1) = std::abs(sr);
    model.d_h_diag(i + 1) = std::norm(rd);
    model.t_diag(i) = std::norm(sr) * p1 + sigma2;
  }

  if (budget != nullptr) {
    require(budget->p_i.size() == instance.relay_count(), ErrorCode::InvalidInput,
            "p_i must list one budget per relay");
    require(alpha > 0.0, ErrorCode::DegenerateAlpha, "individual budget needs alpha > 0");
    model.p_s = budget->p_s;
    model.u_max.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double rd = std::abs(instance.h_rd()[static_cast<std::size_t>(i)]);
      model.u_max(i) = rd * std::sqrt(budget->p_i[static_cast<std::size_t>(i)] / model.t_diag(i));
    }
    const double c1 = model.c(0);
    model.eta1 = budget->p_s / (alpha * p1);
    model.eta2 = (1.0 - alpha) / (alpha * c1 * c1);
    model.eta3 = 1.0 + model.eta2 * c1 * c1;
  }
  return model;
}

CMatrix power_matrix(const DerivedModel& model) {
  CMatrix d = source_power_matrix(model);
  for (Eigen::Index i = 0; i < model.t_diag.size(); ++i) d(i + 1, i + 1) += model.t_diag(i);
  return d;
}

CMatrix source_power_matrix(const DerivedModel& model) {
  const Eigen::Index n = model.h.size();
  CMatrix d = CMatrix::Zero(n, n);
  d(0, 0) = model.alpha * model.p1;
  // |sum g_i w_i|^2 = w^H conj(g) g^T w
  const CVector gc = model.g.conjugate();
  d.bottomRightCorner(n - 1, n - 1) = (1.0 - model.alpha) * model.p1 * (gc * gc.adjoint());
  return d;
}

std::size_t strongest_relay(const NetworkInstance& instance) {
  require(instance.relay_count() > 0, ErrorCode::NoRelays, "instance has no relays");
  std::size_t best = 0;
  double best_gain = std::norm(instance.h_sr()[0]);
  for (std::size_t i = 1; i < instance.relay_count(); ++i) {
    const double gain = std::norm(instance.h_sr()[i]);
    if (gain > best_gain) {
      best = i;
      best_gain = gain;
    }
  }
  return best;
}

double alpha_for_threshold(const NetworkInstance& instance, double p1, double gamma) {
  require(gamma > 0.0, ErrorCode::InvalidInput, "gamma must be > 0");
  require(p1 > 0.0, ErrorCode::InvalidInput, "p1 must be > 0");
  const double received = std::norm(instance.h_sr()[strongest_relay(instance)]) * p1;
  const double bound = received / instance.sigma2();
  if (gamma > bound) {
    throw Error(ErrorCode::InfeasibleThreshold,
                "gamma " + std::to_string(gamma) + " exceeds the strongest relay's SNR bound " +
                    std::to_string(bound));
  }
  // gamma (sigma^2 + a) / (a (1 + gamma)), algebraically equal to
  // (1 + sigma^2/a) / (1 + 1/gamma) but without the 1/gamma cancellation.
  const double alpha = gamma * (instance.sigma2() + received) / (received * (1.0 + gamma));
  return std::min(alpha, 1.0);
}

double relay_snr(const NetworkInstance& instance, double p1, double alpha, std::size_t relay) {
  require_alpha(alpha);
  require(relay < instance.relay_count(), ErrorCode::InvalidInput, "relay index out of range");
  const double gain = std::norm(instance.h_sr()[relay]) * p1;
  return gain * alpha / (instance.sigma2() + gain * (1.0 - alpha));
}

double capacity_relay(const NetworkInstance& instance, double p1, double alpha, std::size_t relay) {
  return half_log2(relay_snr(instance, p1, alpha, relay));
}

double direct_sinr(const NetworkInstance& instance, double p1, double alpha) {
  require_alpha(alpha);
  const double gain = std::norm(instance.h_sd()) * p1;
  return gain * alpha / (instance.sigma2() + gain * (1.0 - alpha));
}

namespace {

struct BeamTerms {
  cplx coherent;     // h^T w
  double forwarded;  // w^H D_h w
};

BeamTerms beam_terms(const NetworkInstance& instance, const CVector& w) {
  BeamTerms terms{instance.h_sd() * w(0), 0.0};
  for (std::size_t i = 0; i < instance.relay_count(); ++i) {
    const auto k = static_cast<Eigen::Index>(i + 1);
    terms.coherent += instance.h_sr()[i] * instance.h_rd()[i] * w(k);
    terms.forwarded += std::norm(instance.h_rd()[i]) * std::norm(w(k));
  }
  return terms;
}

}  // namespace

double beam_gain(const NetworkInstance& instance, double p1, const CVector& w) {
  require_length(instance, w);
  const auto terms = beam_terms(instance, w);
  return std::norm(terms.coherent) * p1 / (instance.sigma2() * (1.0 + terms.forwarded));
}

double beam_sinr(const NetworkInstance& instance, double p1, double alpha, const CVector& w) {
  require_alpha(alpha);
  return alpha * beam_gain(instance, p1, w);
}

double capacity_dest(const NetworkInstance& instance, double p1, double alpha, const CVector& w) {
  return half_log2(direct_sinr(instance, p1, alpha) + beam_sinr(instance, p1, alpha, w));
}

double secrecy_rate(const NetworkInstance& instance, double p1, double alpha, const CVector& w) {
  const std::size_t e = strongest_relay(instance);
  return capacity_dest(instance, p1, alpha, w) - capacity_relay(instance, p1, alpha, e);
}

double alpha_monotonicity_threshold(const NetworkInstance& instance, double p1,
                                    const Tolerances& tol) {
  const std::size_t e = strongest_relay(instance);
  const double rho_d = instance.sigma2() / (std::norm(instance.h_sd()) * p1) + 1.0;
  const double rho_e = instance.sigma2() / (std::norm(instance.h_sr()[e]) * p1) + 1.0;
  if (std::abs(rho_e - 2.0) < tol.observation_rho) {
    throw Error(ErrorCode::SingularObservation, "rho_e = 2 is excluded");
  }
  return (rho_d - rho_e) * rho_d / ((rho_d - 1.0) * (rho_d - 1.0) * (rho_e - 2.0));
}

bool secrecy_increases_with_alpha(const NetworkInstance& instance, double p1, const CVector& w,
                                  const Tolerances& tol) {
  return beam_gain(instance, p1, w) >= alpha_monotonicity_threshold(instance, p1, tol);
}

double source_power(const NetworkInstance& instance, double p1, double alpha, const CVector& w) {
  require_alpha(alpha);
  require_length(instance, w);
  cplx cancel = 0.0;
  for (std::size_t i = 0; i < instance.relay_count(); ++i) {
    cancel += instance.h_sr()[i] * instance.h_rd()[i] / instance.h_sd() *
              w(static_cast<Eigen::Index>(i + 1));
  }
  return alpha * p1 * std::norm(w(0)) + (1.0 - alpha) * p1 * std::norm(cancel);
}

std::vector<double> relay_powers(const NetworkInstance& instance, double p1, const CVector& w) {
  require_length(instance, w);
  std::vector<double> powers(instance.relay_count());
  for (std::size_t i = 0; i < powers.size(); ++i) {
    powers[i] = (std::norm(instance.h_sr()[i]) * p1 + instance.sigma2()) *
                std::norm(w(static_cast<Eigen::Index>(i + 1)));
  }
  return powers;
}

double second_phase_power(const NetworkInstance& instance, double p1, double alpha,
                          const CVector& w) {
  double total = source_power(instance, p1, alpha, w);
  for (double p : relay_powers(instance, p1, w)) total += p;
  return total;
}

namespace {

/// A signal written as a linear combination of the random symbols.
struct LinearSignal {
  cplx x = 0.0;
  cplx u = 0.0;
  std::vector<cplx> z;  // same layout as SignalRealization::z

  explicit LinearSignal(std::size_t n) : z(n, 0.0) {}

  LinearSignal& operator+=(const LinearSignal& other) {
    x += other.x;
    u += other.u;
    for (std::size_t k = 0; k < z.size(); ++k) z[k] += other.z[k];
    return *this;
  }

  LinearSignal scaled(cplx s) const {
    LinearSignal out = *this;
    out.x *= s;
    out.u *= s;
    for (auto& v : out.z) v *= s;
    return out;
  }

  cplx evaluate(const SignalRealization& r) const {
    cplx y = x * r.x + u * r.u;
    for (std::size_t k = 0; k < z.size(); ++k) y += z[k] * r.z[k];
    return y;
  }
};

}  // namespace

DestinationResponse propagate_second_phase(const NetworkInstance& instance, double p1,
                                           double alpha, const CVector& w,
                                           const SignalRealization& realization) {
  require_alpha(alpha);
  require_length(instance, w);
  const std::size_t m = instance.relay_count();
  require(realization.z.size() == m + 1, ErrorCode::InvalidInput,
          "realization needs M + 1 noise samples");
  const double msg_amp = std::sqrt(alpha * p1);
  const double an_amp = std::sqrt((1.0 - alpha) * p1);

  LinearSignal at_destination(m + 1);
  at_destination.z[0] = 1.0;

  // Source second-phase waveform.
  LinearSignal source(m + 1);
  source.x = msg_amp * w(0);
  for (std::size_t i = 0; i < m; ++i) {
    source.u -= an_amp * w(static_cast<Eigen::Index>(i + 1)) * instance.h_sr()[i] *
                instance.h_rd()[i] / instance.h_sd();
  }
  at_destination += source.scaled(instance.h_sd());

  double noise_scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    // First-phase reception at relay i, then amplify and forward.
    LinearSignal received(m + 1);
    received.x = instance.h_sr()[i] * msg_amp;
    received.u = instance.h_sr()[i] * an_amp;
    received.z[i + 1] = 1.0;
    const cplx wi = w(static_cast<Eigen::Index>(i + 1));
    at_destination += received.scaled(wi).scaled(instance.h_rd()[i]);
    noise_scale += std::abs(wi * instance.h_sr()[i] * instance.h_rd()[i]) * an_amp;
  }

  DestinationResponse response;
  response.message = at_destination.x;
  response.artificial_noise = at_destination.u;
  response.received = at_destination.evaluate(realization);
  response.noise_scale = noise_scale;
  return response;
}

cplx simulate_noise_residual(const NetworkInstance& instance, double p1, double alpha,
                             const CVector& w, const SignalRealization& realization) {
  return propagate_second_phase(instance, p1, alpha, w, realization).artificial_noise;
}

}  // namespace afsec
