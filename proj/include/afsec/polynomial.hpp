#pragma once

#include <complex>
#include <span>
#include <vector>

namespace afsec {

/// All complex roots of sum_k coeffs[k] x^(n-k) (highest degree first).
/// Leading coefficients that are negligible relative to the largest one are
/// dropped before the companion matrix is formed; each eigenvalue is then
/// polished with Newton steps that are kept only if they shrink |p(x)|.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs,
                                                   double leading_tol = 1e-14);

/// Roots with |Im| <= imag_tol * max(1, |Re|), returned as reals.
std::vector<double> real_roots(std::span<const double> coeffs, double imag_tol = 1e-9,
                               double leading_tol = 1e-14);

double polynomial_value(std::span<const double> coeffs, double x);

}  // namespace afsec
