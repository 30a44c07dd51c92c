#include "afsec/validate.hpp"

#include <cmath>
#include <random>

#include "afsec/errors.hpp"
#include "afsec/individual_solver.hpp"
#include "afsec/oracle.hpp"
#include "afsec/rng.hpp"
#include "afsec/total_solver.hpp"

namespace afsec {

using nlohmann::json;

namespace {

struct Draw {
  NetworkInstance instance;
  double p1;
  double alpha;
};

/// Rayleigh instance with 1 <= M <= max_m and alpha set from a feasible gamma.
Draw random_draw(std::uint64_t seed, std::uint64_t index, std::size_t max_m) {
  Engine engine = make_stream(seed, {kOracleStreams, 10, index});
  std::uniform_int_distribution<std::size_t> pick_m(1, max_m);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t m = pick_m(engine);
  const cplx h_sd = complex_gaussian(engine, 0.25);
  std::vector<cplx> h_sr(m);
  std::vector<cplx> h_rd(m);
  for (std::size_t i = 0; i < m; ++i) {
    h_sr[i] = complex_gaussian(engine, 1.0);
    h_rd[i] = complex_gaussian(engine, 1.0);
  }
  NetworkInstance instance(h_sd, h_sr, h_rd, 1.0);
  const double p1 = 0.5 + 9.5 * unit(engine);
  const double bound = std::norm(h_sr[strongest_relay(instance)]) * p1 / instance.sigma2();
  const double gamma = (0.05 + 0.9 * unit(engine)) * bound;
  const double alpha = alpha_for_threshold(instance, p1, gamma);
  return {std::move(instance), p1, alpha};
}

json report_json(const OracleReport& r) {
  return {{"analytic_value", r.analytic_value},
          {"oracle_value", r.oracle_value},
          {"gap", r.gap},
          {"argmax_distance", r.argmax_distance},
          {"samples_or_evals", r.samples_or_evals}};
}

void record(ValidationResult& result, json entry, bool ok) {
  ++result.checks;
  if (!ok) {
    ++result.failures;
    result.passed = false;
  }
  entry["pass"] = ok;
  result.report.push_back(std::move(entry));
}

void total_suite(const ValidationOptions& opt, ValidationResult& result) {
  const std::size_t n = opt.instances ? opt.instances : 50;
  for (std::size_t k = 0; k < n; ++k) {
    const Draw d = random_draw(opt.seed, k, 8);
    const std::size_t m = d.instance.relay_count();
    const double p_tot = 5.0 + 0.1 * static_cast<double>(m);
    TotalOracleOptions oo;
    oo.samples = 2000;
    oo.seed = opt.seed + k;
    oo.workers = opt.workers;
    const OracleReport rep = oracle_total(d.instance, d.p1, d.alpha, p_tot, oo);
    const BeamSolution sol = solve_total(d.instance, d.p1, d.alpha, p_tot);
    const double eig = eigen_rayleigh_value(d.instance, d.p1, d.alpha, p_tot, 5, opt.seed + k);
    const double eig_err = std::abs(sol.diagnostics.rayleigh_value - eig) / eig;
    const bool ok = rep.gap >= -opt.tol.total_oracle_gap && eig_err <= opt.tol.eigen_relative;
    json entry = report_json(rep);
    entry["instance"] = k;
    entry["m"] = m;
    entry["eigen_relative_error"] = eig_err;
    record(result, std::move(entry), ok);
  }
}

void individual_suite(const ValidationOptions& opt, ValidationResult& result) {
  const std::size_t n = opt.instances ? opt.instances : 20;
  for (std::size_t k = 0; k < n; ++k) {
    const Draw d = random_draw(opt.seed, k, 3);
    const std::size_t m = d.instance.relay_count();
    const IndividualBudget budget{5.0, std::vector<double>(m, 0.1)};
    const OracleReport rep = oracle_individual_grid(d.instance, d.p1, d.alpha, budget, 1e-3);
    const bool ok = std::abs(rep.gap) <= opt.tol.individual_oracle_gap;
    json entry = report_json(rep);
    entry["instance"] = k;
    entry["m"] = m;
    record(result, std::move(entry), ok);
  }
}

void signals_suite(const ValidationOptions& opt, ValidationResult& result) {
  const std::size_t n = opt.instances ? opt.instances : 5;
  constexpr std::size_t kSymbols = 1'000'000;
  for (std::size_t k = 0; k < n; ++k) {
    const Draw d = random_draw(opt.seed, k, 4);
    const std::size_t m = d.instance.relay_count();
    const BeamSolution sol = solve_total(d.instance, d.p1, d.alpha, 5.0 + 0.1 * static_cast<double>(m));
    const EmpiricalSnr emp = empirical_snr(d.instance, d.p1, d.alpha, sol.w, kSymbols,
                                           opt.seed + k, opt.workers);
    bool ok = true;
    json relays = json::array();
    for (std::size_t i = 0; i < m; ++i) {
      const double expected = relay_snr(d.instance, d.p1, d.alpha, i);
      const bool within = std::abs(emp.relay_snr[i] - expected) <= 3.0 * emp.relay_snr_stderr[i];
      ok = ok && within;
      relays.push_back({{"expected", expected}, {"measured", emp.relay_snr[i]},
                        {"stderr", emp.relay_snr_stderr[i]}, {"pass", within}});
    }
    const double cd_emp = 0.5 * std::log2(1.0 + emp.snr_direct + emp.snr_beam);
    const double cd_rel = std::abs(cd_emp - sol.c_d) / sol.c_d;
    const double power_rel = std::abs(emp.second_phase_power - sol.second_phase_power) /
                             sol.second_phase_power;
    SignalRealization realization{1.0, 1.0, std::vector<cplx>(m + 1, 0.0)};
    const DestinationResponse resp =
        propagate_second_phase(d.instance, d.p1, d.alpha, sol.w, realization);
    const bool cancelled = std::abs(resp.artificial_noise) <= opt.tol.residual * resp.noise_scale;
    ok = ok && cd_rel <= 0.01 && power_rel <= 0.01 && cancelled;
    record(result,
           {{"instance", k},
            {"m", m},
            {"relays", relays},
            {"c_d", sol.c_d},
            {"c_d_empirical", cd_emp},
            {"second_phase_power", sol.second_phase_power},
            {"second_phase_power_empirical", emp.second_phase_power},
            {"noise_residual", std::abs(resp.artificial_noise)},
            {"noise_scale", resp.noise_scale}},
           ok);
  }
}

}  // namespace

ValidationResult run_validation(const ValidationOptions& options) {
  ValidationResult result;
  result.report = json::array();
  if (options.suite == "total") {
    total_suite(options, result);
  } else if (options.suite == "individual") {
    individual_suite(options, result);
  } else if (options.suite == "signals") {
    signals_suite(options, result);
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown suite '" + options.suite + "'");
  }
  return result;
}

}  // namespace afsec
