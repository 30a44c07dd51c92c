#include <doctest.h>

#include <filesystem>

#include "afsec/errors.hpp"
#include "afsec/io.hpp"
#include "test_support.hpp"

using namespace afsec;

TEST_SUITE("io") {

TEST_CASE("problem documents round-trip bit for bit") {
  Engine engine = make_stream(30, {});
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = test::uniform_m(engine, 0, 6);
    const auto inst = test::random_instance(engine, m, 0.25, test::uniform(engine, 0.1, 3.0));
    SystemParams params;
    params.p1 = test::uniform(engine, 0.1, 10.0);
    params.gamma = test::uniform(engine, 0.01, 3.0);
    if (trial % 2 == 0) {
      params.budget = TotalBudget{test::uniform(engine, 0.1, 10.0)};
    } else {
      IndividualBudget ind{test::uniform(engine, 0.1, 10.0), {}};
      for (std::size_t i = 0; i < m; ++i) ind.p_i.push_back(test::uniform(engine, 0.0, 1.0));
      params.budget = ind;
    }
    const Problem problem{inst, params};
    const std::string text = to_json(problem).dump();
    const Problem back = problem_from_json(nlohmann::json::parse(text));
    CHECK(back.instance == inst);
    CHECK(back.params == params);
  }
}

TEST_CASE("schema errors are reported") {
  auto doc = nlohmann::json::parse(R"({
    "instance": {"h_sd": [1, 0], "h_sr": [[1, 0]], "h_rd": [[1, 0]], "sigma2": 1},
    "params": {"p1": 1, "gamma": 0.5, "budget": {"kind": "individual", "p_s": 5, "p_i": [0.1]}}
  })");
  CHECK_NOTHROW(problem_from_json(doc));

  auto bad_kind = doc;
  bad_kind["params"]["budget"]["kind"] = "weekly";
  CHECK_THROWS_AS(problem_from_json(bad_kind), Error);

  auto short_pi = doc;
  short_pi["params"]["budget"]["p_i"] = nlohmann::json::array();
  CHECK_THROWS_AS(problem_from_json(short_pi), Error);

  auto bad_complex = doc;
  bad_complex["instance"]["h_sd"] = nlohmann::json::array({1.0});
  CHECK_THROWS_AS(problem_from_json(bad_complex), Error);

  auto missing = doc;
  missing["instance"].erase("sigma2");
  CHECK_THROWS_AS(problem_from_json(missing), Error);
}

TEST_CASE("missing files raise IoError") {
  try {
    read_json_file("/nonexistent/afsec/problem.json");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}

}
