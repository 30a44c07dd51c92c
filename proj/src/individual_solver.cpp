#include "afsec/individual_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "afsec/errors.hpp"
#include "afsec/polynomial.hpp"

namespace afsec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

RVector optimal_phases(const NetworkInstance& instance) {
  const std::size_t m = instance.relay_count();
  RVector phases(static_cast<Eigen::Index>(m + 1));
  phases(0) = -std::arg(instance.h_sd());
  for (std::size_t i = 0; i < m; ++i) {
    phases(static_cast<Eigen::Index>(i + 1)) =
        -(std::arg(instance.h_sr()[i]) + std::arg(instance.h_rd()[i]));
  }
  return phases;
}

MagnitudeProblem MagnitudeProblem::from_model(const DerivedModel& model) {
  if (!model.p_s) throw Error(ErrorCode::InvalidInput, "model carries no individual budget");
  MagnitudeProblem problem;
  problem.c = model.c;
  problem.u_max = model.u_max;
  problem.eta1 = model.eta1;
  problem.eta2 = model.eta2;
  problem.eta3 = model.eta3;
  for (std::size_t i = 0; i < model.relay_count(); ++i) problem.active.push_back(i);
  problem.recompute_tau();
  return problem;
}

void MagnitudeProblem::recompute_tau() {
  double sum = 0.0;
  for (std::size_t i : active) sum += relay_c(i) * relay_c(i);
  tau = std::sqrt(sum);
}

void MagnitudeProblem::clamp(std::size_t relay) {
  const auto it = std::find(active.begin(), active.end(), relay);
  if (it == active.end()) throw Error(ErrorCode::InvalidInput, "relay is not active");
  const double bound = u_max(static_cast<Eigen::Index>(relay));
  t1 += relay_c(relay) * bound;
  t2 += bound * bound;
  active.erase(it);
  recompute_tau();
}

double MagnitudeProblem::radicand(double r) const {
  const double s = t1 + tau * r;
  return eta1 - eta2 * s * s;
}

double MagnitudeProblem::max_radius() const {
  if (eta2 <= 0.0 || tau <= 0.0) return kInf;
  return (std::sqrt(eta1 / eta2) - t1) / tau;
}

double MagnitudeProblem::objective(double r) const {
  double rad = radicand(r);
  if (rad < 0.0) {
    if (rad < -1e-12 * eta1) return -kInf;
    rad = 0.0;
  }
  const double num = t1 + tau * r + c1() * std::sqrt(rad);
  return num * num / (t2 + r * r);
}

SourceOnlySolution solve_source_only(const MagnitudeProblem& problem) {
  if (!(problem.eta1 > 0.0)) throw Error(ErrorCode::InfeasibleBudget, "eta1 must be > 0");
  const double tau = problem.tau;
  const double tau2 = tau * tau;
  const double c1 = problem.c1();
  const double denom = tau2 * tau2 * problem.eta2 +
                       std::pow(problem.eta1 + tau2 * problem.eta2, 2) * c1 * c1;

  SourceOnlySolution out;
  out.r = tau > 0.0 ? std::sqrt(tau2 * problem.eta1 / denom) : 0.0;
  out.u1 = std::sqrt(std::max(0.0, problem.eta1 - problem.eta2 * tau2 * out.r * out.r));
  out.u_relays = RVector::Zero(problem.u_max.size());
  if (tau > 0.0) {
    for (std::size_t i : problem.active) {
      out.u_relays(static_cast<Eigen::Index>(i)) = problem.relay_c(i) / tau * out.r;
    }
  }
  return out;
}

QuarticCoeffs quartic_coeffs(const MagnitudeProblem& p) {
  const double e1 = p.eta1;
  const double e2 = p.eta2;
  const double e3 = p.eta3;
  const double t1 = p.t1;
  const double t2 = p.t2;
  const double tau = p.tau;
  const double t1s = t1 * t1;
  const double tau2 = tau * tau;
  const double c1s = p.c1() * p.c1();

  QuarticCoeffs q;
  q.q0 = e2 * e3 * t1s * tau2;
  q.q1 = -2.0 * e2 * t1 * tau * (e1 * c1s + e3 * (t2 * tau2 - t1s));
  q.q2 = e1 * c1s * (e1 - e2 * t1s + 2.0 * e2 * t2 * tau2) -
         e3 * (e1 * t1s - e2 * (std::pow(t1s - t2 * tau2, 2) - 2.0 * t1s * t2 * tau2));
  q.q3 = 2.0 * t1 * t2 * tau * e3 * (e1 - e2 * t1s + e2 * t2 * tau2);
  q.q4 = -t2 * t2 * tau2 * (e1 - e2 * e3 * t1s);
  return q;
}

RootSelection select_root(const QuarticCoeffs& coeffs, const MagnitudeProblem& problem,
                          const Tolerances& tol) {
  const double clip = tol.radicand_clip * problem.eta1;
  auto admissible = [&](double r) { return problem.radicand(r) >= -clip; };

  RootSelection out;
  bool found = false;
  auto consider = [&](double r, bool boundary) {
    const double value = problem.objective(r);
    out.candidates.push_back({r, value, boundary});
    if (!found || value > out.objective) {
      out.r = r;
      out.objective = value;
      out.boundary = boundary;
      found = true;
    }
  };

  const std::array<double, 5> poly{coeffs.q0, coeffs.q1, coeffs.q2, coeffs.q3, coeffs.q4};
  for (double r : real_roots(poly, tol.root_imag, tol.leading_coeff)) {
    if (r > 0.0 && admissible(r)) consider(r, false);
  }
  if (admissible(0.0)) consider(0.0, true);
  const double r_max = problem.max_radius();
  if (std::isfinite(r_max) && r_max > 0.0) consider(r_max, true);

  if (!found) throw Error(ErrorCode::NoFeasibleRoot, "no admissible radius");
  return out;
}

MagnitudeSolution solve_magnitudes(MagnitudeProblem problem, const Tolerances& tol) {
  if (!(problem.eta1 > 0.0)) throw Error(ErrorCode::InfeasibleBudget, "eta1 must be > 0");
  const auto m = static_cast<std::size_t>(problem.u_max.size());
  problem.t1 = 0.0;
  problem.t2 = 1.0;
  problem.active.clear();
  for (std::size_t i = 0; i < m; ++i) problem.active.push_back(i);
  problem.recompute_tau();

  MagnitudeSolution out;
  double r = solve_source_only(problem).r;
  out.root_candidates.push_back({r, problem.objective(r), false});

  RVector u = RVector::Zero(static_cast<Eigen::Index>(m));
  auto spread = [&] {
    for (std::size_t i : problem.active) {
      u(static_cast<Eigen::Index>(i)) = problem.tau > 0.0 ? problem.relay_c(i) / problem.tau * r : 0.0;
    }
  };
  spread();

  for (;;) {
    std::size_t worst = m;
    double worst_ratio = 0.0;
    for (std::size_t i : problem.active) {
      const double ui = u(static_cast<Eigen::Index>(i));
      const double bound = problem.u_max(static_cast<Eigen::Index>(i));
      if (!(ui > bound)) continue;
      const double ratio = bound > 0.0 ? ui / bound : kInf;
      if (worst == m || ratio > worst_ratio) {
        worst = i;
        worst_ratio = ratio;
      }
    }
    if (worst == m) break;

    problem.clamp(worst);
    u(static_cast<Eigen::Index>(worst)) = problem.u_max(static_cast<Eigen::Index>(worst));
    out.clamped.push_back(worst);
    ++out.iterations;

    if (problem.radicand(0.0) < -tol.radicand_clip * problem.eta1) {
      throw Error(ErrorCode::InfeasibleBudget,
                  "clamped relays need more cancellation power than P_s allows");
    }
    if (problem.active.empty()) {
      r = 0.0;
      break;
    }
    try {
      const RootSelection sel = select_root(quartic_coeffs(problem), problem, tol);
      r = sel.r;
      out.root_candidates = sel.candidates;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoFeasibleRoot) throw;
      r = 0.0;
      out.root_fallback = true;
    }
    spread();
  }

  out.u1 = std::sqrt(std::max(0.0, problem.radicand(r)));
  out.u_relays = u;
  return out;
}

double magnitude_objective(const RVector& c, double u1, const RVector& u_relays) {
  const double num = c(0) * u1 + c.tail(u_relays.size()).dot(u_relays);
  return num * num / (1.0 + u_relays.squaredNorm());
}

CVector weights_from_magnitudes(const NetworkInstance& instance, double u1,
                                const RVector& u_relays) {
  const RVector phases = optimal_phases(instance);
  CVector w(phases.size());
  w(0) = std::polar(u1, phases(0));
  for (std::size_t i = 0; i < instance.relay_count(); ++i) {
    const auto k = static_cast<Eigen::Index>(i + 1);
    const double gain = std::abs(instance.h_rd()[i]);
    const double magnitude = gain > 0.0 ? u_relays(k - 1) / gain : 0.0;
    w(k) = std::polar(magnitude, phases(k));
  }
  return w;
}

BeamSolution solve_individual(const NetworkInstance& instance, double p1, double alpha,
                              const IndividualBudget& budget, const Tolerances& tol) {
  const DerivedModel model = derive_model(instance, p1, alpha, &budget);
  const MagnitudeSolution mags = solve_magnitudes(MagnitudeProblem::from_model(model), tol);

  BeamSolution solution;
  solution.w = weights_from_magnitudes(instance, mags.u1, mags.u_relays);
  solution.alpha = alpha;
  solution.c_d = capacity_dest(instance, p1, alpha, solution.w);
  solution.source_power = source_power(instance, p1, alpha, solution.w);
  solution.relay_powers = relay_powers(instance, p1, solution.w);
  solution.second_phase_power = second_phase_power(instance, p1, alpha, solution.w);
  solution.diagnostics.clamped = mags.clamped;
  solution.diagnostics.root_candidates = mags.root_candidates;
  solution.diagnostics.iterations = mags.iterations;
  solution.diagnostics.root_fallback = mags.root_fallback;
  return solution;
}

BeamSolution solve_individual(const NetworkInstance& instance, const SystemParams& params,
                              const Tolerances& tol) {
  validate_params(params, instance.relay_count());
  const auto* budget = std::get_if<IndividualBudget>(&params.budget);
  if (budget == nullptr) throw Error(ErrorCode::InvalidInput, "expected an individual budget");
  const double alpha = alpha_for_threshold(instance, params.p1, params.gamma);
  return solve_individual(instance, params.p1, alpha, *budget, tol);
}

}  // namespace afsec
