#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "afsec/errors.hpp"
#include "afsec/individual_solver.hpp"
#include "afsec/oracle.hpp"
#include "afsec/total_solver.hpp"
#include "test_support.hpp"

using namespace afsec;

TEST_SUITE("oracle") {

TEST_CASE("golden section basics") {
  const auto res = golden_section([](double r) { return -(r - 1.0) * (r - 1.0); }, 0.0, 2.0, 1e-10);
  CHECK(std::abs(res.x - 1.0) <= 1e-10);

  // Bracket shrinks by 1/phi per iteration.
  const double phi = std::numbers::phi;
  const double expected = std::log(2.0 / 1e-10) / std::log(phi);
  CHECK(std::abs(static_cast<double>(res.iterations) - expected) <= 2.0);

  const auto flat = golden_section([](double) { return 3.0; }, -1.0, 4.0, 1e-6);
  CHECK(flat.value == 3.0);
  CHECK(flat.x >= -1.0);
  CHECK(flat.x <= 4.0);

  // Monotone functions land on the endpoint.
  const auto edge = golden_section([](double r) { return r; }, 0.0, 1.0, 1e-9);
  CHECK(edge.x == 1.0);

  try {
    golden_section([](double r) { return r > 0.5 ? std::numeric_limits<double>::quiet_NaN() : r; }, 0.0, 1.0, 1e-6);
    FAIL("expected OracleEvalError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OracleEvalError);
  }
  CHECK_THROWS_AS(golden_section([](double r) { return r; }, 1.0, 1.0, 1e-6), Error);
}

TEST_CASE("golden section on the source-only objective") {
  auto f = [](double r) {
    const double num = std::sqrt(1.0 - r * r) + r;
    return num * num / (1.0 + r * r);
  };
  const auto res = golden_section(f, 0.0, 1.0, 1e-12);
  CHECK(res.x == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-6));
  CHECK(res.value == doctest::Approx(1.5).epsilon(1e-14));
  // Coarse grid + golden finds the global max of a bimodal function.
  const auto bimodal = maximize_scalar([](double x) { return std::exp(-(x - 0.1) * (x - 0.1) * 400) + 2 * std::exp(-(x - 0.8) * (x - 0.8) * 400); }, 0.0, 1.0, 1e-10);
  CHECK(bimodal.x == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("total oracle") {
  Engine engine = make_stream(70, {});
  const auto inst = test::random_instance(engine, 1);
  TotalOracleOptions options;
  options.samples = 100'000;
  const auto report = oracle_total(inst, 2.0, 0.5, 5.1, options);
  CHECK(report.gap >= -1e-6);
  CHECK(report.samples_or_evals >= options.samples);

  const NetworkInstance lone(cplx(0.4, -0.3), {}, {}, 1.0);
  const auto single = oracle_total(lone, 2.0, 0.5, 5.0, {});
  CHECK(std::abs(single.gap) <= 1e-14);

  // Rank-one operator: a single power-iteration step is exact.
  const auto sol = solve_total(inst, 2.0, 0.5, 5.1);
  CHECK(test::rel_err(eigen_rayleigh_value(inst, 2.0, 0.5, 5.1, 1), sol.diagnostics.rayleigh_value) <= 1e-12);
}

TEST_CASE("total oracle does not depend on the worker count") {
  Engine engine = make_stream(71, {});
  const auto inst = test::random_instance(engine, 3);
  TotalOracleOptions one;
  one.samples = 5000;
  TotalOracleOptions four = one;
  four.workers = 4;
  const auto a = oracle_total(inst, 2.0, 0.5, 5.3, one);
  const auto b = oracle_total(inst, 2.0, 0.5, 5.3, four);
  CHECK(a.oracle_value == b.oracle_value);
}

TEST_CASE("individual grid oracle") {
  Engine engine = make_stream(72, {});
  // One relay with a binding bound.
  int found = 0;
  for (int trial = 0; trial < 50 && found < 3; ++trial) {
    const auto inst = test::random_instance(engine, 1);
    const IndividualBudget budget{5.0, {0.1}};
    const auto sol = solve_individual(inst, 2.0, 0.5, budget);
    if (sol.diagnostics.clamped.empty()) continue;
    ++found;
    const auto report = oracle_individual_grid(inst, 2.0, 0.5, budget, 1e-3);
    CHECK(std::abs(report.gap) <= 1e-6);
    CHECK(report.argmax_distance <= 1e-3);
  }
  CHECK(found == 3);

  // Loose bounds: the grid optimum is the source-only point.
  const auto inst = test::random_instance(engine, 2);
  const IndividualBudget loose{0.5, {2.0, 2.0}};
  const auto sol = solve_individual(inst, 2.0, 0.5, loose);
  REQUIRE(sol.diagnostics.clamped.empty());
  const auto report = oracle_individual_grid(inst, 2.0, 0.5, loose, 2e-3);
  CHECK(std::abs(report.gap) <= 1e-7);
  CHECK(report.argmax_distance <= 1e-4);

  const IndividualBudget none{5.0, {0.0, 0.0}};
  const auto clamped = oracle_individual_grid(inst, 2.0, 0.5, none, 1e-3);
  CHECK(std::abs(clamped.gap) <= 1e-14);
  CHECK(clamped.argmax_distance == 0.0);

  const auto big = test::random_instance(engine, 4);
  try {
    oracle_individual_grid(big, 2.0, 0.5, {5.0, {0.1, 0.1, 0.1, 0.1}}, 1e-3);
    FAIL("expected OracleTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OracleTooLarge);
  }
}

TEST_CASE("empirical snr") {
  Engine engine = make_stream(73, {});
  const auto inst = test::random_instance(engine, 3);
  const double p1 = 3.0;
  const std::size_t e = strongest_relay(inst);
  const double gamma = 0.4 * std::norm(inst.h_sr()[e]) * p1;
  const double alpha = alpha_for_threshold(inst, p1, gamma);
  const auto sol = solve_total(inst, p1, alpha, 5.3);
  const auto emp = empirical_snr(inst, p1, alpha, sol.w, 200'000, 4);
  CHECK(std::abs(emp.relay_snr[e] - gamma) <= 3.0 * emp.relay_snr_stderr[e]);
  CHECK(emp.artificial_noise_power <= 1e-20);
  CHECK(test::rel_err(emp.snr_direct, direct_sinr(inst, p1, alpha)) <= 0.02);

  // Chunked streams make the estimate independent of the worker count.
  const auto parallel = empirical_snr(inst, p1, alpha, sol.w, 200'000, 4, 3);
  CHECK(parallel.relay_snr == emp.relay_snr);
  CHECK(parallel.snr_beam == emp.snr_beam);
}

}
