#include "afsec/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "afsec/errors.hpp"
#include "afsec/individual_solver.hpp"
#include "afsec/parallel.hpp"
#include "afsec/rng.hpp"
#include "afsec/total_solver.hpp"

namespace afsec {

using nlohmann::json;

NetworkInstance sample_instance(std::size_t m, const ChannelVariances& variances, double sigma2,
                                std::uint64_t seed, std::uint64_t instance_index) {
  Engine direct = make_stream(seed, {kHarnessStreams, instance_index, 0});
  const cplx h_sd = complex_gaussian(direct, variances.source_destination);
  std::vector<cplx> h_sr(m);
  std::vector<cplx> h_rd(m);
  for (std::size_t i = 0; i < m; ++i) {
    Engine link = make_stream(seed, {kHarnessStreams, instance_index, i + 1});
    h_sr[i] = complex_gaussian(link, variances.source_relay);
    h_rd[i] = complex_gaussian(link, variances.relay_destination);
  }
  return NetworkInstance(h_sd, std::move(h_sr), std::move(h_rd), sigma2);
}

std::string to_string(BudgetMode mode) {
  switch (mode) {
    case BudgetMode::Total: return "total";
    case BudgetMode::Individual: return "individual";
    case BudgetMode::Both: return "both";
  }
  return "unknown";
}

void ExperimentSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidInput, what); };
  if (m_values.empty() || p1_values.empty()) fail("m_values and p1_values must be non-empty");
  for (auto m : m_values) {
    if (m < 1) fail("every m must be >= 1");
  }
  for (double p : p1_values) {
    if (!(p > 0.0)) fail("every p1 must be > 0");
  }
  if (gamma) {
    if (!(*gamma > 0.0)) fail("gamma must be > 0");
  } else {
    if (alpha_values.empty()) fail("alpha_values must be non-empty without gamma");
    for (double a : alpha_values) {
      if (!(a > 0.0 && a <= 1.0)) fail("alpha values must lie in (0, 1]");
    }
  }
  if (!(p_s > 0.0) || !(p_i >= 0.0)) fail("p_s must be > 0 and p_i >= 0");
  if (!(sigma2 > 0.0)) fail("sigma2 must be > 0");
  if (n_instances < 1) fail("n_instances must be >= 1");
  if (!(variances.source_relay > 0.0 && variances.relay_destination > 0.0 &&
        variances.source_destination > 0.0)) {
    fail("channel variances must be > 0");
  }
}

ExperimentSpec spec_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::InvalidInput, "sweep spec must be an object");
  ExperimentSpec spec;
  try {
    if (doc.contains("m_values")) spec.m_values = doc.at("m_values").get<std::vector<std::size_t>>();
    if (doc.contains("p1_values")) spec.p1_values = doc.at("p1_values").get<std::vector<double>>();
    if (doc.contains("alpha_values")) {
      spec.alpha_values = doc.at("alpha_values").get<std::vector<double>>();
    }
    if (doc.contains("gamma") && !doc.at("gamma").is_null()) spec.gamma = doc.at("gamma").get<double>();
    if (doc.contains("budget_mode")) {
      const auto mode = doc.at("budget_mode").get<std::string>();
      if (mode == "total") spec.budget_mode = BudgetMode::Total;
      else if (mode == "individual") spec.budget_mode = BudgetMode::Individual;
      else if (mode == "both") spec.budget_mode = BudgetMode::Both;
      else throw Error(ErrorCode::InvalidInput, "budget_mode must be total, individual or both");
    }
    if (doc.contains("p_s")) spec.p_s = doc.at("p_s").get<double>();
    if (doc.contains("p_i")) spec.p_i = doc.at("p_i").get<double>();
    if (doc.contains("sigma2")) spec.sigma2 = doc.at("sigma2").get<double>();
    if (doc.contains("n_instances")) spec.n_instances = doc.at("n_instances").get<std::size_t>();
    if (doc.contains("seed")) spec.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("variances")) {
      const json& v = doc.at("variances");
      spec.variances.source_relay = v.value("source_relay", spec.variances.source_relay);
      spec.variances.relay_destination = v.value("relay_destination", spec.variances.relay_destination);
      spec.variances.source_destination =
          v.value("source_destination", spec.variances.source_destination);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("sweep spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

json to_json(const ExperimentSpec& spec) {
  json doc = {{"m_values", spec.m_values},
              {"p1_values", spec.p1_values},
              {"alpha_values", spec.alpha_values},
              {"budget_mode", to_string(spec.budget_mode)},
              {"p_s", spec.p_s},
              {"p_i", spec.p_i},
              {"sigma2", spec.sigma2},
              {"n_instances", spec.n_instances},
              {"seed", spec.seed},
              {"variances",
               {{"source_relay", spec.variances.source_relay},
                {"relay_destination", spec.variances.relay_destination},
                {"source_destination", spec.variances.source_destination}}}};
  doc["gamma"] = spec.gamma ? json(*spec.gamma) : json(nullptr);
  return doc;
}

namespace {

struct InstanceOutcome {
  bool ok = false;
  double c_d_total = 0.0;
  double c_d_individual = 0.0;
  std::string error;
};

bool wants_total(BudgetMode mode) { return mode != BudgetMode::Individual; }
bool wants_individual(BudgetMode mode) { return mode != BudgetMode::Total; }

InstanceOutcome solve_one(const ExperimentSpec& spec, std::size_t m, double p1,
                          double alpha_or_gamma, std::uint64_t index) {
  InstanceOutcome out;
  try {
    const NetworkInstance instance = sample_instance(m, spec.variances, spec.sigma2, spec.seed, index);
    const double alpha =
        spec.gamma ? alpha_for_threshold(instance, p1, alpha_or_gamma) : alpha_or_gamma;
    if (wants_total(spec.budget_mode)) {
      const double p_tot = spec.p_s + static_cast<double>(m) * spec.p_i;
      out.c_d_total = solve_total(instance, p1, alpha, p_tot).c_d;
    }
    if (wants_individual(spec.budget_mode)) {
      const IndividualBudget budget{spec.p_s, std::vector<double>(m, spec.p_i)};
      out.c_d_individual = solve_individual(instance, p1, alpha, budget).c_d;
    }
    out.ok = true;
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

double sample_std(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  std::vector<double> sq(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) sq[k] = (values[k] - mean) * (values[k] - mean);
  return std::sqrt(pairwise_sum(sq) / static_cast<double>(values.size() - 1));
}

}  // namespace

double pairwise_sum(const std::vector<double>& values) {
  auto rec = [&](auto&& self, std::size_t lo, std::size_t hi) -> double {
    if (hi - lo <= 8) {
      double s = 0.0;
      for (std::size_t k = lo; k < hi; ++k) s += values[k];
      return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return self(self, lo, mid) + self(self, mid, hi);
  };
  return rec(rec, 0, values.size());
}

GridPointSamples evaluate_grid_point(const ExperimentSpec& spec, std::size_t m, double p1,
                                     double alpha_or_gamma, std::size_t workers) {
  GridPointSamples samples;
  std::uint64_t next = 0;
  const std::uint64_t max_attempts = spec.n_instances * std::max<std::size_t>(spec.max_attempts_factor, 1);
  while (samples.instance_indices.size() < spec.n_instances) {
    if (next >= max_attempts) {
      throw Error(ErrorCode::InvalidInput,
                  "too many failed instances at m=" + std::to_string(m) + ", p1=" + std::to_string(p1));
    }
    const std::size_t batch = std::min<std::uint64_t>(
        spec.n_instances - samples.instance_indices.size(), max_attempts - next);
    std::vector<InstanceOutcome> outcomes(batch);
    parallel_for(batch, workers, [&](std::size_t k) {
      outcomes[k] = solve_one(spec, m, p1, alpha_or_gamma, next + k);
    });
    for (std::size_t k = 0; k < batch; ++k) {
      if (!outcomes[k].ok) {
        if (samples.resampled++ == 0) samples.first_error = outcomes[k].error;
        continue;
      }
      samples.instance_indices.push_back(next + k);
      if (wants_total(spec.budget_mode)) samples.c_d_total.push_back(outcomes[k].c_d_total);
      if (wants_individual(spec.budget_mode)) {
        samples.c_d_individual.push_back(outcomes[k].c_d_individual);
      }
    }
    next += batch;
  }
  return samples;
}

std::vector<ExperimentRow> run_sweep(const ExperimentSpec& spec, std::size_t workers) {
  spec.validate();
  const std::vector<double> settings =
      spec.gamma ? std::vector<double>{*spec.gamma} : spec.alpha_values;
  std::vector<ExperimentRow> rows;
  for (std::size_t m : spec.m_values) {
    for (double p1 : spec.p1_values) {
      for (double setting : settings) {
        const GridPointSamples samples = evaluate_grid_point(spec, m, p1, setting, workers);
        if (samples.resampled > 0) {
          std::clog << "afsec: m=" << m << " p1=" << p1 << " setting=" << setting << ": "
                    << samples.resampled << " instance(s) resampled, first: "
                    << samples.first_error << '\n';
        }
        auto push = [&](const std::vector<double>& values, const char* mode) {
          const double mean = pairwise_sum(values) / static_cast<double>(values.size());
          rows.push_back({m, p1, setting, mode, mean, sample_std(values, mean), values.size(),
                          spec.seed});
        };
        if (wants_total(spec.budget_mode)) push(samples.c_d_total, "total");
        if (wants_individual(spec.budget_mode)) push(samples.c_d_individual, "individual");
      }
    }
  }
  return rows;
}

namespace {

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void emit_csv(const std::vector<ExperimentRow>& rows, std::ostream& out) {
  out << "m,p1,alpha,budget_mode,mean_c_d,std_c_d,n_instances,seed\n";
  for (const auto& row : rows) {
    out << row.m << ',' << fmt12(row.p1) << ',' << fmt12(row.alpha) << ',' << row.budget_mode << ','
        << fmt12(row.mean_c_d) << ',' << fmt12(row.std_c_d) << ',' << row.n_instances << ','
        << row.seed << '\n';
  }
}

void emit_csv(const std::vector<ExperimentRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  emit_csv(rows, out);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to " + path.string() + " failed");
}

std::vector<ExperimentRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::InvalidInput, "empty CSV");
  std::vector<ExperimentRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 8) throw Error(ErrorCode::InvalidInput, "bad CSV row: " + line);
    ExperimentRow row;
    row.m = std::stoul(cells[0]);
    row.p1 = std::stod(cells[1]);
    row.alpha = std::stod(cells[2]);
    row.budget_mode = cells[3];
    row.mean_c_d = std::stod(cells[4]);
    row.std_c_d = std::stod(cells[5]);
    row.n_instances = std::stoul(cells[6]);
    row.seed = std::stoull(cells[7]);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace afsec
