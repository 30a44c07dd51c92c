#pragma once

// Monte Carlo experiment harness: draws Rayleigh-fading network instances,
// solves every grid point under total and/or individual budgets and reports
// the mean destination capacity.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "afsec/model.hpp"

namespace afsec {

struct ChannelVariances {
  double source_relay = 1.0;
  double relay_destination = 1.0;
  double source_destination = 0.25;
};

/// Instance `instance_index` of a seeded experiment. Every link has its own
/// stream, so truncating an M-relay draw gives the (M-1)-relay draw.
NetworkInstance sample_instance(std::size_t m, const ChannelVariances& variances, double sigma2,
                                std::uint64_t seed, std::uint64_t instance_index);

enum class BudgetMode { Total, Individual, Both };

std::string to_string(BudgetMode mode);

struct ExperimentSpec {
  std::vector<std::size_t> m_values{2};
  std::vector<double> p1_values{0.5, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> alpha_values{0.3, 0.6, 0.9};  // fixed-alpha mode
  std::optional<double> gamma;                      // set: alpha derived per instance
  BudgetMode budget_mode = BudgetMode::Both;
  double p_s = 5.0;
  double p_i = 0.1;
  double sigma2 = 1.0;
  std::size_t n_instances = 100;
  std::uint64_t seed = 1;
  ChannelVariances variances;
  std::size_t max_attempts_factor = 100;  // give up after n_instances * factor draws

  void validate() const;
};

ExperimentSpec spec_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentSpec& spec);

struct ExperimentRow {
  std::size_t m = 0;
  double p1 = 0.0;
  double alpha = 0.0;  // gamma when the spec runs in gamma mode
  std::string budget_mode;
  double mean_c_d = 0.0;
  double std_c_d = 0.0;
  std::size_t n_instances = 0;
  std::uint64_t seed = 0;
};

/// Per-instance results for one (m, p1, alpha-or-gamma) grid point. Both
/// budget vectors, when requested, refer to the same accepted instances.
struct GridPointSamples {
  std::vector<std::uint64_t> instance_indices;
  std::vector<double> c_d_total;
  std::vector<double> c_d_individual;
  std::size_t resampled = 0;
  std::string first_error;  // reason the first rejected draw failed
};

GridPointSamples evaluate_grid_point(const ExperimentSpec& spec, std::size_t m, double p1,
                                     double alpha_or_gamma, std::size_t workers);

std::vector<ExperimentRow> run_sweep(const ExperimentSpec& spec, std::size_t workers);

/// Pairwise summation in index order, so the result is independent of threading.
double pairwise_sum(const std::vector<double>& values);

void emit_csv(const std::vector<ExperimentRow>& rows, std::ostream& out);
/// Throws IoError when the file cannot be written.
void emit_csv(const std::vector<ExperimentRow>& rows, const std::filesystem::path& path);

std::vector<ExperimentRow> read_csv(std::istream& in);

}  // namespace afsec
