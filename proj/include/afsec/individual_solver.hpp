#pragma once

// Individual budgets: the source is limited to P_s and relay i to P_i.
//
// With phases aligned (every term of h^T w real and nonnegative) the problem
// becomes a magnitude problem in u = [|w_0|, |w_1 h_1d|, ..., |w_M h_Md|]:
//
//   maximize (c^T u)^2 / (1 + sum_{i>1} u_i^2)
//   subject to  alpha P1 u_1^2 + (1-alpha) P1 / |h_sd|^2 (c_rel^T u_rel)^2 = P_s
//               0 <= u_i <= u_max,i
//
// Relays whose bound binds are fixed at u_max and folded into (t1, t2); the
// free relays share a direction proportional to their c entries, leaving a
// one-dimensional search over r = ||u_free||.

#include <cstddef>
#include <vector>

#include "afsec/model.hpp"

namespace afsec {

/// arg(w_0) = -arg(h_sd), arg(w_i) = -(arg(h_si) + arg(h_id)).
RVector optimal_phases(const NetworkInstance& instance);

struct MagnitudeProblem {
  RVector c;      // [c_1, c_2, ..., c_{M+1}]
  RVector u_max;  // per relay
  double eta1 = 0.0;
  double eta2 = 0.0;
  double eta3 = 1.0;
  double t1 = 0.0;  // sum of c_i u_max,i over clamped relays
  double t2 = 1.0;  // 1 + sum of u_max,i^2 over clamped relays
  std::vector<std::size_t> active;  // unclamped relay indices, ascending
  double tau = 0.0;                 // norm of c over the active relays

  /// The unclamped problem of a derived model (needs an individual budget).
  static MagnitudeProblem from_model(const DerivedModel& model);

  double c1() const { return c(0); }
  /// c entry of relay i (0-based relay index).
  double relay_c(std::size_t relay) const { return c(static_cast<Eigen::Index>(relay + 1)); }

  void recompute_tau();
  /// Fixes relay at u_max and removes it from the active set.
  void clamp(std::size_t relay);

  /// eta1 - eta2 (t1 + tau r)^2, the u_1^2 implied by the source equality.
  double radicand(double r) const;
  /// (t1 + tau r + c1 sqrt(radicand))^2 / (t2 + r^2); -inf where infeasible.
  double objective(double r) const;
  /// Largest r with a nonnegative radicand; +inf when eta2 = 0 or tau = 0.
  double max_radius() const;
};

struct SourceOnlySolution {
  double u1 = 0.0;
  RVector u_relays;  // length M, proportional to c over the relays
  double r = 0.0;
};

/// Closed form with only the source constraint (t1 = 0, t2 = 1, all active).
SourceOnlySolution solve_source_only(const MagnitudeProblem& problem);

struct QuarticCoeffs {
  double q0 = 0.0;  // r^4
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
  double q4 = 0.0;  // constant
};

/// Stationarity polynomial of MagnitudeProblem::objective in r.
QuarticCoeffs quartic_coeffs(const MagnitudeProblem& problem);

struct RootSelection {
  double r = 0.0;
  double objective = 0.0;
  bool boundary = false;  // winner is r = 0 or r = max_radius()
  std::vector<BeamDiagnostics::RootCandidate> candidates;
};

/// Best of the admissible positive real roots and the boundary points.
/// Throws NoFeasibleRoot when even r = 0 violates the source constraint.
RootSelection select_root(const QuarticCoeffs& coeffs, const MagnitudeProblem& problem,
                          const Tolerances& tol = {});

/// Magnitudes plus bookkeeping from the clamping procedure.
struct MagnitudeSolution {
  double u1 = 0.0;
  RVector u_relays;
  std::vector<std::size_t> clamped;
  std::vector<BeamDiagnostics::RootCandidate> root_candidates;
  std::size_t iterations = 0;
  bool root_fallback = false;
};

MagnitudeSolution solve_magnitudes(MagnitudeProblem problem, const Tolerances& tol = {});

/// Objective of the magnitude problem at an arbitrary u (u1 given explicitly).
double magnitude_objective(const RVector& c, double u1, const RVector& u_relays);

/// Builds w from magnitudes and the aligned phases.
CVector weights_from_magnitudes(const NetworkInstance& instance, double u1,
                                const RVector& u_relays);

BeamSolution solve_individual(const NetworkInstance& instance, double p1, double alpha,
                              const IndividualBudget& budget, const Tolerances& tol = {});

/// Derives alpha from gamma, then solves. Params must carry an IndividualBudget.
BeamSolution solve_individual(const NetworkInstance& instance, const SystemParams& params,
                              const Tolerances& tol = {});

}  // namespace afsec
