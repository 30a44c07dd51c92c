#include <doctest.h>

#include <cmath>
#include <sstream>

#include "afsec/errors.hpp"
#include "afsec/harness.hpp"
#include "afsec/rng.hpp"

using namespace afsec;

TEST_SUITE("harness") {

TEST_CASE("instances are deterministic and nested in M") {
  const ChannelVariances v;
  const auto a = sample_instance(5, v, 1.0, 9, 3);
  const auto b = sample_instance(5, v, 1.0, 9, 3);
  CHECK(a == b);
  CHECK(sample_instance(3, v, 1.0, 9, 3) == a.truncated(3));
  CHECK_FALSE(sample_instance(5, v, 1.0, 9, 4) == a);
  CHECK_FALSE(sample_instance(5, v, 1.0, 10, 3) == a);
}

TEST_CASE("channel moments") {
  const ChannelVariances v;
  double power = 0.0;
  double re2 = 0.0;
  double im2 = 0.0;
  double relay_power = 0.0;
  const int n = 100'000;
  for (int k = 0; k < n; ++k) {
    const auto inst = sample_instance(1, v, 1.0, 1, static_cast<std::uint64_t>(k));
    power += std::norm(inst.h_sd());
    re2 += inst.h_sd().real() * inst.h_sd().real();
    im2 += inst.h_sd().imag() * inst.h_sd().imag();
    relay_power += std::norm(inst.h_sr()[0]);
  }
  CHECK(std::abs(power / n - 0.25) <= 0.02 * 0.25);
  CHECK(std::abs(re2 / n - 0.125) <= 0.02 * 0.125);
  CHECK(std::abs(im2 / n - 0.125) <= 0.02 * 0.125);
  CHECK(std::abs(relay_power / n - 1.0) <= 0.02);
}

TEST_CASE("pairwise sum") {
  CHECK(pairwise_sum({}) == 0.0);
  std::vector<double> values(1000, 0.1);
  CHECK(pairwise_sum(values) == doctest::Approx(100.0));
}

TEST_CASE("csv output") {
  std::ostringstream empty;
  emit_csv({}, empty);
  CHECK(empty.str() == "m,p1,alpha,budget_mode,mean_c_d,std_c_d,n_instances,seed\n");

  const ExperimentRow row{3, 2.5, 0.6, "individual", 1.234567890123456, 0.25, 100, 77};
  std::ostringstream out;
  emit_csv({row}, out);
  CHECK(out.str() ==
        "m,p1,alpha,budget_mode,mean_c_d,std_c_d,n_instances,seed\n"
        "3,2.5,0.6,individual,1.23456789012,0.25,100,77\n");
  std::istringstream in(out.str());
  const auto back = read_csv(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0].m == 3);
  CHECK(back[0].budget_mode == "individual");
  CHECK(back[0].mean_c_d == doctest::Approx(row.mean_c_d).epsilon(1e-11));
  CHECK(back[0].seed == 77);

  try {
    emit_csv({row}, std::filesystem::path("/nonexistent-dir/out.csv"));
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}

TEST_CASE("spec parsing") {
  const auto spec = spec_from_json(nlohmann::json::parse(R"({
    "m_values": [2, 3], "p1_values": [1, 2], "alpha_values": [0.5],
    "budget_mode": "total", "n_instances": 7, "seed": 5
  })"));
  CHECK(spec.m_values == std::vector<std::size_t>{2, 3});
  CHECK(spec.budget_mode == BudgetMode::Total);
  CHECK(spec.n_instances == 7);
  CHECK(spec.p_s == 5.0);
  CHECK(spec.variances.source_destination == 0.25);
  CHECK(spec_from_json(to_json(spec)).n_instances == 7);

  CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"n_instances": 0})")), Error);
  CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"budget_mode": "sometimes"})")), Error);
  CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"alpha_values": [1.5]})")), Error);
}

TEST_CASE("sweeps are reproducible and share instances across budgets") {
  ExperimentSpec spec;
  spec.m_values = {2, 3};
  spec.p1_values = {1.0, 4.0};
  spec.alpha_values = {0.5};
  spec.n_instances = 1;
  spec.seed = 123;
  const auto a = run_sweep(spec, 1);
  const auto b = run_sweep(spec, 1);
  std::ostringstream sa, sb;
  emit_csv(a, sa);
  emit_csv(b, sb);
  CHECK(sa.str() == sb.str());
  CHECK(a.size() == 8);

  spec.n_instances = 15;
  std::ostringstream s1, s3;
  emit_csv(run_sweep(spec, 1), s1);
  emit_csv(run_sweep(spec, 3), s3);
  CHECK(s1.str() == s3.str());

  const auto samples = evaluate_grid_point(spec, 3, 2.0, 0.5, 2);
  REQUIRE(samples.c_d_total.size() == 15);
  REQUIRE(samples.c_d_individual.size() == 15);
  for (std::size_t k = 0; k < 15; ++k) {
    CHECK(samples.c_d_total[k] >= samples.c_d_individual[k] - 1e-9);
  }
}

TEST_CASE("gamma mode resamples infeasible instances") {
  ExperimentSpec spec;
  spec.m_values = {1};
  spec.p1_values = {1.0};
  spec.gamma = 1.5;  // above the bound for many single-relay draws
  spec.budget_mode = BudgetMode::Total;
  spec.n_instances = 20;
  const auto samples = evaluate_grid_point(spec, 1, 1.0, 1.5, 1);
  CHECK(samples.c_d_total.size() == 20);
  CHECK(samples.resampled > 0);
  CHECK(samples.instance_indices.size() == 20);
  const auto rows = run_sweep(spec, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].alpha == 1.5);
  CHECK(rows[0].n_instances == 20);
}

}
