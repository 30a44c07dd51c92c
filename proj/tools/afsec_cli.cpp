// afsec: solve, sweep and validate from the command line.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "afsec/errors.hpp"
#include "afsec/harness.hpp"
#include "afsec/individual_solver.hpp"
#include "afsec/io.hpp"
#include "afsec/parallel.hpp"
#include "afsec/total_solver.hpp"
#include "afsec/validate.hpp"

namespace {

void print_solution(const afsec::Problem& problem, const afsec::BeamSolution& sol) {
  std::printf("relays              %zu\n", problem.instance.relay_count());
  std::printf("alpha               %.12g\n", sol.alpha);
  std::printf("C_d (bits/use)      %.12g\n", sol.c_d);
  std::printf("second-phase power  %.12g\n", sol.second_phase_power);
  std::printf("source power        %.12g\n", sol.source_power);
  for (Eigen::Index k = 0; k < sol.w.size(); ++k) {
    std::printf("w[%ld]                %+.12g %+.12gj\n", static_cast<long>(k), sol.w(k).real(),
                sol.w(k).imag());
  }
  if (!sol.diagnostics.clamped.empty()) {
    std::printf("clamped relays     ");
    for (auto i : sol.diagnostics.clamped) std::printf(" %zu", i);
    std::printf("\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-phase AF relay beamforming with artificial noise"};
  app.require_subcommand(1);

  std::string input;
  bool as_json = false;
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  solve->add_option("--input", input, "Problem JSON file")->required()->check(CLI::ExistingFile);
  solve->add_flag("--json", as_json, "Print the solution as JSON");

  std::string spec_path;
  std::string out_path;
  std::size_t workers = 0;
  auto* sweep = app.add_subcommand("sweep", "Run a Monte Carlo sweep and write CSV");
  sweep->add_option("--spec", spec_path, "Sweep spec JSON file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out_path, "Output CSV path")->required();
  sweep->add_option("--workers", workers, "Worker threads (default: AFSEC_WORKERS or all cores)");

  std::string suite;
  std::uint64_t seed = 1;
  std::size_t instances = 0;
  auto* validate = app.add_subcommand("validate", "Cross-check solvers against oracles");
  validate->add_option("--suite", suite, "Suite to run")
      ->required()
      ->check(CLI::IsMember({"total", "individual", "signals"}));
  validate->add_option("--seed", seed, "Seed");
  validate->add_option("--instances", instances, "Instances (default depends on suite)");
  validate->add_option("--workers", workers, "Worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const afsec::Problem problem = afsec::problem_from_json(afsec::read_json_file(input));
      const afsec::BeamSolution sol =
          std::holds_alternative<afsec::TotalBudget>(problem.params.budget)
              ? afsec::solve_total(problem.instance, problem.params)
              : afsec::solve_individual(problem.instance, problem.params);
      if (as_json) {
        std::cout << afsec::to_json(sol).dump(2) << '\n';
      } else {
        print_solution(problem, sol);
      }
      return 0;
    }
    if (workers == 0) workers = afsec::default_workers();
    if (*sweep) {
      const auto spec = afsec::spec_from_json(afsec::read_json_file(spec_path));
      afsec::emit_csv(afsec::run_sweep(spec, workers), std::filesystem::path(out_path));
      return 0;
    }
    if (*validate) {
      afsec::ValidationOptions options;
      options.suite = suite;
      options.seed = seed;
      options.instances = instances;
      options.workers = workers;
      options.tol = afsec::tolerances_from_env();
      const auto result = afsec::run_validation(options);
      std::cout << nlohmann::json{{"suite", suite},
                                  {"seed", seed},
                                  {"checks", result.checks},
                                  {"failures", result.failures},
                                  {"passed", result.passed},
                                  {"results", result.report}}
                       .dump(2)
                << '\n';
      return result.passed ? 0 : 1;
    }
  } catch (const afsec::Error& e) {
    std::cerr << "afsec: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
