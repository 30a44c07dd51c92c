#pragma once

// Total second-phase power budget: maximize |h^T w|^2 / (1 + w^H D_h w)
// subject to w^H D w <= P_tot. The constraint is tight at the optimum, which
// turns the problem into a generalized Rayleigh quotient with
// D~ = D / P_tot + D_h and a rank-one numerator.

#include "afsec/model.hpp"

namespace afsec {

/// D / P_tot + D_h. Throws DegenerateAlpha for alpha = 0.
CMatrix build_d_tilde(const DerivedModel& model, double p_tot);

/// Optimal weights for a fixed alpha.
BeamSolution solve_total(const NetworkInstance& instance, double p1, double alpha, double p_tot);

/// Derives alpha from gamma, then solves. Params must carry a TotalBudget.
BeamSolution solve_total(const NetworkInstance& instance, const SystemParams& params);

/// |h^T w|^2 / (w^H D~ w), the objective after substituting the tight constraint.
double rayleigh_objective(const DerivedModel& model, const CMatrix& d_tilde, const CVector& w);

}  // namespace afsec
