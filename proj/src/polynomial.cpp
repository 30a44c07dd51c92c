#include "afsec/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace afsec {

namespace {

using cplx = std::complex<double>;

cplx evaluate(std::span<const double> coeffs, cplx x, cplx* derivative) {
  cplx p = 0.0;
  cplx dp = 0.0;
  for (double a : coeffs) {
    dp = dp * x + p;
    p = p * x + a;
  }
  if (derivative != nullptr) *derivative = dp;
  return p;
}

}  // namespace

double polynomial_value(std::span<const double> coeffs, double x) {
  double p = 0.0;
  for (double a : coeffs) p = p * x + a;
  return p;
}

std::vector<cplx> polynomial_roots(std::span<const double> coeffs, double leading_tol) {
  double scale = 0.0;
  for (double a : coeffs) scale = std::max(scale, std::abs(a));
  if (scale == 0.0) return {};

  std::size_t first = 0;
  while (first < coeffs.size() && std::abs(coeffs[first]) <= leading_tol * scale) ++first;
  const auto poly = coeffs.subspan(first);
  const auto degree = static_cast<Eigen::Index>(poly.size()) - 1;
  if (degree < 1) return {};

  // Companion matrix of the monic polynomial.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (Eigen::Index k = 0; k < degree; ++k) {
    companion(0, k) = -poly[static_cast<std::size_t>(k + 1)] / poly[0];
  }
  for (Eigen::Index k = 1; k < degree; ++k) companion(k, k - 1) = 1.0;

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<cplx> roots;
  roots.reserve(static_cast<std::size_t>(degree));
  for (Eigen::Index k = 0; k < degree; ++k) {
    cplx x = solver.eigenvalues()(k);
    for (int step = 0; step < 3; ++step) {
      cplx dp;
      const cplx p = evaluate(poly, x, &dp);
      if (p == 0.0 || dp == 0.0) break;
      const cplx next = x - p / dp;
      if (std::abs(evaluate(poly, next, nullptr)) >= std::abs(p)) break;
      x = next;
    }
    roots.push_back(x);
  }
  return roots;
}

std::vector<double> real_roots(std::span<const double> coeffs, double imag_tol,
                               double leading_tol) {
  std::vector<double> out;
  for (cplx r : polynomial_roots(coeffs, leading_tol)) {
    if (std::abs(r.imag()) <= imag_tol * std::max(1.0, std::abs(r.real()))) {
      out.push_back(r.real());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace afsec
