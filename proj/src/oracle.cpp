#include "afsec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/LU>

#include "afsec/errors.hpp"
#include "afsec/individual_solver.hpp"
#include "afsec/parallel.hpp"
#include "afsec/rng.hpp"
#include "afsec/total_solver.hpp"

namespace afsec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double checked(const std::function<double(double)>& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::OracleEvalError, "objective is not finite at " + std::to_string(x));
  }
  return v;
}

double capacity_from_sinr(double sinr) { return 0.5 * std::log2(1.0 + sinr); }

}  // namespace

GoldenResult golden_section(const std::function<double(double)>& f, double lo, double hi,
                            double tol) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidInput, "golden_section needs lo < hi");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = checked(f, x1);
  double f2 = checked(f, x2);
  std::size_t iterations = 0;
  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = checked(f, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = checked(f, x2);
    }
    ++iterations;
  }
  GoldenResult best{f1 >= f2 ? x1 : x2, std::max(f1, f2), iterations};
  for (double end : {lo, hi}) {
    const double v = checked(f, end);
    if (v > best.value) {
      best.x = end;
      best.value = v;
    }
  }
  return best;
}

GoldenResult maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                             double tol, std::size_t grid_points) {
  grid_points = std::max<std::size_t>(grid_points, 3);
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);
  std::size_t best = 0;
  double best_value = kNegInf;
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double v = checked(f, lo + step * static_cast<double>(k));
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  const double a = lo + step * static_cast<double>(best == 0 ? 0 : best - 1);
  const double b = std::min(hi, lo + step * static_cast<double>(best + 1));
  GoldenResult refined = golden_section(f, a, b, tol);
  refined.iterations += grid_points;
  return refined;
}

namespace {

/// Second-phase problem pieces evaluated straight from the block formulas.
struct TotalProblemView {
  const NetworkInstance& instance;
  double p1;
  double alpha;
  double p_tot;

  double power(const CVector& w) const { return second_phase_power(instance, p1, alpha, w); }

  /// Scales w onto the power boundary and returns C_d; -inf for w = 0.
  double project_and_value(CVector& w) const {
    const double pw = power(w);
    if (!(pw > 0.0)) return kNegInf;
    w *= std::sqrt(p_tot / pw);
    return capacity_dest(instance, p1, alpha, w);
  }
};

double phase_aligned_distance(const CVector& a, const CVector& b) {
  const cplx overlap = b.dot(a);  // b^H a
  const cplx rotation = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0);
  return (a - rotation * b).norm();
}

}  // namespace

OracleReport oracle_total(const NetworkInstance& instance, double p1, double alpha, double p_tot,
                          const TotalOracleOptions& options) {
  const TotalProblemView view{instance, p1, alpha, p_tot};
  const auto n = static_cast<Eigen::Index>(instance.relay_count() + 1);

  // Random search, split into fixed chunks with their own streams.
  constexpr std::size_t kChunk = 1024;
  const std::size_t samples = std::max<std::size_t>(options.samples, 1);
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<CVector> chunk_best(chunks);
  std::vector<double> chunk_value(chunks, kNegInf);
  parallel_for(chunks, options.workers, [&](std::size_t chunk) {
    Engine engine = make_stream(options.seed, {kOracleStreams, 1, chunk});
    const std::size_t count = std::min(kChunk, samples - chunk * kChunk);
    for (std::size_t s = 0; s < count; ++s) {
      CVector w(n);
      for (Eigen::Index k = 0; k < n; ++k) w(k) = complex_gaussian(engine, 1.0);
      const double v = view.project_and_value(w);
      if (v > chunk_value[chunk]) {
        chunk_value[chunk] = v;
        chunk_best[chunk] = w;
      }
    }
  });
  std::size_t evals = samples;
  std::size_t winner = 0;
  for (std::size_t c = 1; c < chunks; ++c) {
    if (chunk_value[c] > chunk_value[winner]) winner = c;
  }
  CVector best = chunk_best[winner];
  double best_value = chunk_value[winner];

  // Projected coordinate ascent.
  const std::array<cplx, 4> directions{cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)};
  double step = 0.5;
  for (std::size_t sweep = 0; sweep < options.sweeps && step > 1e-13; ++sweep) {
    bool improved = false;
    const double scale = best.norm() / std::sqrt(static_cast<double>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
      for (cplx dir : directions) {
        CVector trial = best;
        trial(k) += step * (std::abs(best(k)) + scale) * dir;
        const double v = view.project_and_value(trial);
        ++evals;
        if (v > best_value) {
          best_value = v;
          best = trial;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  const BeamSolution analytic = solve_total(instance, p1, alpha, p_tot);
  OracleReport report;
  report.analytic_value = analytic.c_d;
  report.oracle_value = best_value;
  report.gap = analytic.c_d - best_value;
  report.argmax_distance = phase_aligned_distance(analytic.w, best);
  report.samples_or_evals = evals;
  return report;
}

double eigen_rayleigh_value(const NetworkInstance& instance, double p1, double alpha,
                            double p_tot, std::size_t iterations, std::uint64_t seed) {
  const DerivedModel model = derive_model(instance, p1, alpha);
  const auto n = model.h.size();
  // Dense assembly of D / P_tot + D_h from the scalar block formulas.
  CMatrix d_tilde = CMatrix::Zero(n, n);
  d_tilde(0, 0) = alpha * p1 / p_tot;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
      d_tilde(i + 1, j + 1) = (1.0 - alpha) * p1 * std::conj(model.g(i)) * model.g(j) / p_tot;
    }
    d_tilde(i + 1, i + 1) += model.t_diag(i) / p_tot + model.d_h_diag(i + 1);
  }
  const CVector b = model.h.conjugate();
  const CMatrix op = d_tilde.fullPivLu().inverse() * (b * b.adjoint());

  Engine engine = make_stream(seed, {kOracleStreams, 2});
  CVector x(n);
  for (Eigen::Index k = 0; k < n; ++k) x(k) = complex_gaussian(engine, 1.0);
  double lambda = 0.0;
  for (std::size_t it = 0; it < std::max<std::size_t>(iterations, 1); ++it) {
    const CVector y = op * x;
    lambda = (x.dot(y) / x.squaredNorm()).real();
    x = y / y.norm();
  }
  const CVector y = op * x;
  lambda = x.dot(y).real() / x.squaredNorm();
  return lambda;
}

OracleReport oracle_individual_grid(const NetworkInstance& instance, double p1, double alpha,
                                    const IndividualBudget& budget, double grid_step) {
  const std::size_t m = instance.relay_count();
  if (m > 3) throw Error(ErrorCode::OracleTooLarge, "grid oracle supports M <= 3");
  if (!(grid_step > 0.0)) throw Error(ErrorCode::InvalidInput, "grid_step must be > 0");

  const DerivedModel model = derive_model(instance, p1, alpha, &budget);
  const RVector& c = model.c;
  const RVector& u_max = model.u_max;
  const double direct = direct_sinr(instance, p1, alpha);
  const double beam_scale = alpha * p1 / instance.sigma2();

  // Objective in u (relays only); u_1 follows from the source equality.
  auto value = [&](const RVector& u) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (u(i) < 0.0 || u(i) > u_max(i)) return kNegInf;
    }
    const double s = c.tail(u.size()).dot(u);
    const double rad = model.eta1 - model.eta2 * s * s;
    if (rad < 0.0) return kNegInf;
    const double num = c(0) * std::sqrt(rad) + s;
    return num * num / (1.0 + u.squaredNorm());
  };

  std::vector<std::size_t> counts(m);
  std::size_t total_points = 1;
  for (std::size_t i = 0; i < m; ++i) {
    counts[i] = static_cast<std::size_t>(std::floor(u_max(static_cast<Eigen::Index>(i)) / grid_step)) + 2;
    total_points *= counts[i];
  }
  if (total_points > 200'000'000) {
    throw Error(ErrorCode::OracleTooLarge, "grid has too many points; increase grid_step");
  }

  // Keep the best few grid nodes as refinement seeds.
  constexpr std::size_t kSeeds = 3;
  std::vector<std::pair<double, RVector>> seeds;
  RVector u(static_cast<Eigen::Index>(m));
  std::vector<std::size_t> idx(m, 0);
  for (std::size_t p = 0; p < total_points; ++p) {
    std::size_t rest = p;
    for (std::size_t i = 0; i < m; ++i) {
      idx[i] = rest % counts[i];
      rest /= counts[i];
      // Last node of each axis sits exactly on the bound.
      const auto k = static_cast<Eigen::Index>(i);
      u(k) = idx[i] + 1 == counts[i] ? u_max(k) : grid_step * static_cast<double>(idx[i]);
    }
    const double v = value(u);
    if (v == kNegInf) continue;
    if (seeds.size() < kSeeds || v > seeds.back().first) {
      seeds.emplace_back(v, u);
      std::sort(seeds.begin(), seeds.end(),
                [](const auto& a, const auto& b) { return a.first > b.first; });
      if (seeds.size() > kSeeds) seeds.pop_back();
    }
  }
  std::size_t evals = total_points;

  // Pattern search over all 3^M - 1 neighbour directions, clipped to the box.
  std::vector<RVector> moves;
  for (std::size_t code = 0, n_codes = static_cast<std::size_t>(std::pow(3, m)); code < n_codes; ++code) {
    RVector d(static_cast<Eigen::Index>(m));
    std::size_t rest = code;
    bool zero = true;
    for (std::size_t i = 0; i < m; ++i) {
      d(static_cast<Eigen::Index>(i)) = static_cast<double>(rest % 3) - 1.0;
      zero = zero && rest % 3 == 1;
      rest /= 3;
    }
    if (!zero) moves.push_back(d);
  }
  double best_value = kNegInf;
  RVector best_u = RVector::Zero(static_cast<Eigen::Index>(m));
  for (auto& [start_value, start] : seeds) {
    RVector x = start;
    double fx = start_value;
    for (double step = grid_step; step > 1e-13;) {
      bool improved = false;
      for (const RVector& d : moves) {
        RVector trial = (x + step * d).cwiseMax(0.0).cwiseMin(u_max);
        const double v = value(trial);
        ++evals;
        if (v > fx) {
          fx = v;
          x = trial;
          improved = true;
        }
      }
      if (!improved) step *= 0.5;
    }
    if (fx > best_value) {
      best_value = fx;
      best_u = x;
    }
  }

  const BeamSolution analytic = solve_individual(instance, p1, alpha, budget);
  RVector analytic_u(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    analytic_u(static_cast<Eigen::Index>(i)) =
        std::abs(analytic.w(static_cast<Eigen::Index>(i + 1)) * instance.h_rd()[i]);
  }

  OracleReport report;
  report.analytic_value = analytic.c_d;
  report.oracle_value = m == 0 || best_value == kNegInf
                            ? capacity_from_sinr(direct + beam_scale * c(0) * c(0) * model.eta1)
                            : capacity_from_sinr(direct + beam_scale * best_value);
  report.gap = report.analytic_value - report.oracle_value;
  report.argmax_distance = (analytic_u - best_u).norm();
  report.samples_or_evals = evals;
  return report;
}

namespace {

struct SignalSums {
  double direct_signal = 0.0;
  double direct_rest = 0.0;
  cplx beam_cross = 0.0;  // sum y2 conj(x)
  double x_power = 0.0;
  double y2_power = 0.0;
  std::vector<double> relay_signal;
  std::vector<double> relay_rest;
  std::vector<double> relay_signal_sq;
  std::vector<double> relay_rest_sq;
  double noise_at_destination = 0.0;
  double transmitted = 0.0;

  explicit SignalSums(std::size_t m)
      : relay_signal(m, 0.0), relay_rest(m, 0.0), relay_signal_sq(m, 0.0), relay_rest_sq(m, 0.0) {}

  void add(const SignalSums& o) {
    direct_signal += o.direct_signal;
    direct_rest += o.direct_rest;
    beam_cross += o.beam_cross;
    x_power += o.x_power;
    y2_power += o.y2_power;
    for (std::size_t i = 0; i < relay_signal.size(); ++i) {
      relay_signal[i] += o.relay_signal[i];
      relay_rest[i] += o.relay_rest[i];
      relay_signal_sq[i] += o.relay_signal_sq[i];
      relay_rest_sq[i] += o.relay_rest_sq[i];
    }
    noise_at_destination += o.noise_at_destination;
    transmitted += o.transmitted;
  }
};

}  // namespace

EmpiricalSnr empirical_snr(const NetworkInstance& instance, double p1, double alpha,
                           const CVector& w, std::size_t n_symbols, std::uint64_t seed,
                           std::size_t workers) {
  if (n_symbols == 0) throw Error(ErrorCode::InvalidInput, "n_symbols must be > 0");
  if (static_cast<std::size_t>(w.size()) != instance.relay_count() + 1) {
    throw Error(ErrorCode::InvalidInput, "w must have M + 1 entries");
  }
  const std::size_t m = instance.relay_count();
  const double sigma2 = instance.sigma2();
  const double msg_amp = std::sqrt(alpha * p1);
  const double an_amp = std::sqrt((1.0 - alpha) * p1);
  const cplx h_sd = instance.h_sd();

  constexpr std::size_t kChunk = 1 << 15;
  const std::size_t chunks = (n_symbols + kChunk - 1) / kChunk;
  std::vector<SignalSums> partial(chunks, SignalSums(m));

  parallel_for(chunks, workers, [&](std::size_t chunk) {
    Engine engine = make_stream(seed, {kOracleStreams, 3, chunk});
    SignalSums& acc = partial[chunk];
    const std::size_t count = std::min(kChunk, n_symbols - chunk * kChunk);
    std::vector<cplx> relay_rx(m);
    for (std::size_t s = 0; s < count; ++s) {
      const cplx x = complex_gaussian(engine, 1.0);
      const cplx u = complex_gaussian(engine, 1.0);
      const cplx first_tx_msg = msg_amp * x;
      const cplx first_tx_an = an_amp * u;

      // Phase 1 at the destination.
      const cplx zd1 = complex_gaussian(engine, sigma2);
      acc.direct_signal += std::norm(h_sd * first_tx_msg);
      acc.direct_rest += std::norm(h_sd * first_tx_an + zd1);

      // Phase 1 at each relay.
      for (std::size_t i = 0; i < m; ++i) {
        const cplx zi = complex_gaussian(engine, sigma2);
        const cplx signal = instance.h_sr()[i] * first_tx_msg;
        const cplx rest = instance.h_sr()[i] * first_tx_an + zi;
        relay_rx[i] = signal + rest;
        const double ps = std::norm(signal);
        const double pr = std::norm(rest);
        acc.relay_signal[i] += ps;
        acc.relay_rest[i] += pr;
        acc.relay_signal_sq[i] += ps * ps;
        acc.relay_rest_sq[i] += pr * pr;
      }

      // Phase 2: source waveform and forwarded relay waveforms.
      cplx cancel = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        cancel += w(static_cast<Eigen::Index>(i + 1)) * instance.h_sr()[i] * instance.h_rd()[i] / h_sd;
      }
      const cplx source_tx = msg_amp * w(0) * x - an_amp * cancel * u;
      cplx y2 = h_sd * source_tx + complex_gaussian(engine, sigma2);
      cplx u_only = h_sd * (-an_amp * cancel * u);
      double tx_power = std::norm(source_tx);
      for (std::size_t i = 0; i < m; ++i) {
        const cplx wi = w(static_cast<Eigen::Index>(i + 1));
        const cplx relay_tx = wi * relay_rx[i];
        tx_power += std::norm(relay_tx);
        y2 += instance.h_rd()[i] * relay_tx;
        u_only += instance.h_rd()[i] * wi * instance.h_sr()[i] * first_tx_an;
      }
      acc.beam_cross += y2 * std::conj(x);
      acc.x_power += std::norm(x);
      acc.y2_power += std::norm(y2);
      acc.noise_at_destination += std::norm(u_only);
      acc.transmitted += tx_power;
    }
  });

  SignalSums total(m);
  for (const auto& p : partial) total.add(p);

  const double n = static_cast<double>(n_symbols);
  EmpiricalSnr out;
  out.symbols = n_symbols;
  out.snr_direct = total.direct_signal / total.direct_rest;
  // Least-squares estimate of the message coefficient in y2, then the power
  // of everything it does not explain.
  const cplx coeff = total.beam_cross / total.x_power;
  const double signal_power = std::norm(coeff) * total.x_power / n;
  const double rest_power = total.y2_power / n - signal_power;
  out.snr_beam = rest_power > 0.0 ? signal_power / rest_power : 0.0;
  out.relay_snr.resize(m);
  out.relay_snr_stderr.resize(m);
  double message_power = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double ms = total.relay_signal[i] / n;
    const double mr = total.relay_rest[i] / n;
    out.relay_snr[i] = mr > 0.0 ? ms / mr : 0.0;
    // Delta method for a ratio of independent sample means.
    const double var_s = std::max(0.0, total.relay_signal_sq[i] / n - ms * ms);
    const double var_r = std::max(0.0, total.relay_rest_sq[i] / n - mr * mr);
    const double rel = (ms > 0.0 ? var_s / (ms * ms) : 0.0) + (mr > 0.0 ? var_r / (mr * mr) : 0.0);
    out.relay_snr_stderr[i] = out.relay_snr[i] * std::sqrt(rel / n);
    message_power += ms;
  }
  out.message_power_at_relays = m > 0 ? message_power / static_cast<double>(m) : 0.0;
  out.artificial_noise_power = total.noise_at_destination / n;
  out.second_phase_power = total.transmitted / n;
  return out;
}

}  // namespace afsec
