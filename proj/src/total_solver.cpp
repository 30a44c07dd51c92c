#include "afsec/total_solver.hpp"

#include <cmath>

#include "afsec/errors.hpp"

namespace afsec {

CMatrix build_d_tilde(const DerivedModel& model, double p_tot) {
  if (!(p_tot > 0.0)) throw Error(ErrorCode::InvalidInput, "p_tot must be > 0");
  if (!(model.alpha > 0.0)) {
    throw Error(ErrorCode::DegenerateAlpha, "alpha = 0 leaves D~ singular");
  }
  CMatrix d_tilde = power_matrix(model) / p_tot;
  d_tilde.diagonal() += model.d_h_diag.cast<cplx>();
  return d_tilde;
}

double rayleigh_objective(const DerivedModel& model, const CMatrix& d_tilde, const CVector& w) {
  const cplx gain = model.h.transpose() * w;
  return std::norm(gain) / (w.adjoint() * d_tilde * w).value().real();
}

BeamSolution solve_total(const NetworkInstance& instance, double p1, double alpha, double p_tot) {
  const DerivedModel model = derive_model(instance, p1, alpha);
  const CMatrix d_tilde = build_d_tilde(model, p_tot);

  // h^T w = conj(h)^H w, so the maximizer is D~^{-1} conj(h).
  const CVector target = model.h.conjugate();
  const CVector v = d_tilde.ldlt().solve(target);

  const CMatrix d = power_matrix(model);
  const double v_power = (v.adjoint() * d * v).value().real();
  const double mu = std::sqrt(p_tot / v_power);

  BeamSolution solution;
  // conj(h)^H v = conj(h)^H D~^{-1} conj(h) > 0, so h^T w is already real
  // and nonnegative; no extra phase rotation is needed.
  solution.w = mu * v;
  solution.alpha = alpha;
  solution.c_d = capacity_dest(instance, p1, alpha, solution.w);
  solution.source_power = source_power(instance, p1, alpha, solution.w);
  solution.relay_powers = relay_powers(instance, p1, solution.w);
  solution.second_phase_power = second_phase_power(instance, p1, alpha, solution.w);
  solution.diagnostics.direction = v;
  solution.diagnostics.mu = mu;
  solution.diagnostics.rayleigh_value = (target.adjoint() * v).value().real();
  return solution;
}

BeamSolution solve_total(const NetworkInstance& instance, const SystemParams& params) {
  validate_params(params, instance.relay_count());
  const auto* budget = std::get_if<TotalBudget>(&params.budget);
  if (budget == nullptr) throw Error(ErrorCode::InvalidInput, "expected a total power budget");
  const double alpha = alpha_for_threshold(instance, params.p1, params.gamma);
  return solve_total(instance, params.p1, alpha, budget->p_tot);
}

}  // namespace afsec
