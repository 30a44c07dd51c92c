#include <doctest.h>

#include <cmath>
#include <numbers>

#include "afsec/errors.hpp"
#include "afsec/oracle.hpp"
#include "afsec/total_solver.hpp"
#include "test_support.hpp"

using namespace afsec;
using test::rel_err;

TEST_SUITE("total_solver") {

TEST_CASE("d_tilde structure") {
  const NetworkInstance lone(cplx(0.3, 0.4), {}, {}, 1.0);
  const auto scalar = build_d_tilde(derive_model(lone, 2.0, 0.5), 4.0);
  REQUIRE(scalar.rows() == 1);
  CHECK(scalar(0, 0).real() == doctest::Approx(0.5 * 2.0 / 4.0));

  Engine engine = make_stream(50, {});
  const auto inst = test::random_instance(engine, 3);
  auto model = derive_model(inst, 2.0, 0.5);
  model.g.setZero();
  const CMatrix diag = build_d_tilde(model, 4.0);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      if (i == j) continue;
      CHECK(std::abs(diag(i, j)) == 0.0);
    }
  }
  for (Eigen::Index i = 0; i < 3; ++i) {
    const double expected = (std::norm(inst.h_sr()[static_cast<std::size_t>(i)]) * 2.0 + 1.0) / 4.0 +
                            std::norm(inst.h_rd()[static_cast<std::size_t>(i)]);
    CHECK(diag(i + 1, i + 1).real() == doctest::Approx(expected));
  }

  // Entrywise against the scalar formulas.
  const auto full = derive_model(inst, 2.0, 0.5);
  const CMatrix dt = build_d_tilde(full, 4.0);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const cplx gi = inst.h_sr()[i] * inst.h_rd()[i] / inst.h_sd();
      const cplx gj = inst.h_sr()[j] * inst.h_rd()[j] / inst.h_sd();
      cplx expected = 0.5 * 2.0 * std::conj(gi) * gj / 4.0;
      if (i == j) expected += (std::norm(inst.h_sr()[i]) * 2.0 + 1.0) / 4.0 + std::norm(inst.h_rd()[i]);
      CHECK(std::abs(dt(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(j + 1)) - expected) <=
            1e-14 * std::abs(expected));
    }
  }
  CHECK(dt.isApprox(dt.adjoint()));

  try {
    build_d_tilde(derive_model(inst, 2.0, 0.0), 4.0);
    FAIL("expected DegenerateAlpha");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateAlpha);
  }
}

TEST_CASE("single-node problem") {
  const cplx h_sd = std::polar(0.7, 1.1);
  const NetworkInstance lone(h_sd, {}, {}, 1.0);
  const auto sol = solve_total(lone, 2.0, 0.4, 3.0);
  const cplx expected = std::polar(std::sqrt(3.0 / (0.4 * 2.0)), -std::arg(h_sd));
  CHECK(std::abs(sol.w(0) - expected) <= 1e-12);
  CHECK(beam_sinr(lone, 2.0, 0.4, sol.w) == doctest::Approx(0.49 * 3.0 / 1.0));
}

TEST_CASE("optimality properties on random instances") {
  Engine engine = make_stream(51, {});
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = test::uniform_m(engine, 1, 8);
    const auto inst = test::random_instance(engine, m);
    const double p1 = test::uniform(engine, 0.5, 10.0);
    const double alpha = test::uniform(engine, 0.05, 1.0);
    const double p_tot = test::uniform(engine, 0.5, 10.0);
    const auto sol = solve_total(inst, p1, alpha, p_tot);
    const auto model = derive_model(inst, p1, alpha);
    const CMatrix dt = build_d_tilde(model, p_tot);

    CHECK(std::abs(sol.second_phase_power - p_tot) / p_tot <= 1e-10);
    const CVector& v = sol.diagnostics.direction;
    CHECK((dt * v - model.h.conjugate()).norm() <= 1e-10 * model.h.norm());
    CHECK(sol.diagnostics.mu > 0.0);
    CHECK(sol.diagnostics.rayleigh_value > 0.0);

    const cplx gain = model.h.transpose() * sol.w;
    CHECK(gain.real() > 0.0);
    CHECK(std::abs(gain.imag()) <= 1e-12 * gain.real());

    const double objective = rayleigh_objective(model, dt, sol.w);
    CHECK(rel_err(objective, sol.diagnostics.rayleigh_value) <= 1e-10);
    for (double t : {1e-3, 0.7, 13.0}) {
      CHECK(rel_err(rayleigh_objective(model, dt, t * v), objective) <= 1e-12);
    }
    // Destination SNR term equals the Rayleigh value once the budget is tight.
    CHECK(rel_err(beam_sinr(inst, p1, alpha, sol.w),
                  sol.diagnostics.rayleigh_value * alpha * p1 / inst.sigma2()) <= 1e-10);

    const double eig = eigen_rayleigh_value(inst, p1, alpha, p_tot, 1, 3);
    CHECK(rel_err(sol.diagnostics.rayleigh_value, eig) <= 1e-10);
  }
}

TEST_CASE("perturbations re-projected to the budget never improve C_d") {
  Engine engine = make_stream(52, {});
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t m = test::uniform_m(engine, 1, 6);
    const auto inst = test::random_instance(engine, m);
    const double p1 = test::uniform(engine, 0.5, 10.0);
    const double alpha = test::uniform(engine, 0.1, 0.95);
    const double p_tot = 5.0 + 0.1 * static_cast<double>(m);
    const auto sol = solve_total(inst, p1, alpha, p_tot);
    for (int k = 0; k < 1000; ++k) {
      const double scale = std::pow(10.0, test::uniform(engine, -6.0, 0.0)) * sol.w.norm();
      CVector w = sol.w + scale * test::random_w(engine, m);
      w *= std::sqrt(p_tot / second_phase_power(inst, p1, alpha, w));
      CHECK(capacity_dest(inst, p1, alpha, w) <= sol.c_d + 1e-9);
    }
  }
}

TEST_CASE("random sampling oracle never beats the closed form") {
  Engine engine = make_stream(53, {});
  const auto inst = test::random_instance(engine, 2);
  TotalOracleOptions options;
  options.samples = 200'000;
  options.workers = 2;
  const auto report = oracle_total(inst, 3.0, 0.5, 5.2, options);
  CHECK(report.gap >= -1e-9);
  CHECK(report.gap <= 1e-6);  // ascent gets close enough to confirm the maximizer
  CHECK(report.argmax_distance <= 1e-3 * std::sqrt(5.2));
}

TEST_CASE("params entry point derives alpha from gamma") {
  Engine engine = make_stream(54, {});
  const auto inst = test::random_instance(engine, 4);
  const double bound = std::norm(inst.h_sr()[strongest_relay(inst)]) * 2.0;
  SystemParams params{2.0, 0.5 * bound, TotalBudget{5.4}};
  const auto sol = solve_total(inst, params);
  CHECK(sol.alpha == alpha_for_threshold(inst, 2.0, 0.5 * bound));
  params.gamma = 2.0 * bound;
  CHECK_THROWS_AS(solve_total(inst, params), Error);
  params.budget = IndividualBudget{5.0, std::vector<double>(4, 0.1)};
  CHECK_THROWS_AS(solve_total(inst, params), Error);
}

}
