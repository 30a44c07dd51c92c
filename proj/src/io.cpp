#include "afsec/io.hpp"

#include <fstream>
#include <sstream>

#include "afsec/errors.hpp"

namespace afsec {

using nlohmann::json;

namespace {

json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

cplx complex_from_json(const json& doc, const char* what) {
  if (!doc.is_array() || doc.size() != 2 || !doc[0].is_number() || !doc[1].is_number()) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + " must be [re, im]");
  }
  return {doc[0].get<double>(), doc[1].get<double>()};
}

std::vector<cplx> complex_list(const json& doc, const char* what) {
  if (!doc.is_array()) throw Error(ErrorCode::InvalidInput, std::string(what) + " must be a list");
  std::vector<cplx> out;
  out.reserve(doc.size());
  for (const auto& v : doc) out.push_back(complex_from_json(v, what));
  return out;
}

const json& field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw Error(ErrorCode::InvalidInput, std::string("missing field '") + key + "'");
  }
  return doc.at(key);
}

double number(const json& doc, const char* key) {
  const json& v = field(doc, key);
  if (!v.is_number()) throw Error(ErrorCode::InvalidInput, std::string(key) + " must be a number");
  return v.get<double>();
}

}  // namespace

json to_json(const NetworkInstance& instance) {
  json h_sr = json::array();
  json h_rd = json::array();
  for (std::size_t i = 0; i < instance.relay_count(); ++i) {
    h_sr.push_back(complex_to_json(instance.h_sr()[i]));
    h_rd.push_back(complex_to_json(instance.h_rd()[i]));
  }
  return {{"h_sd", complex_to_json(instance.h_sd())},
          {"h_sr", h_sr},
          {"h_rd", h_rd},
          {"sigma2", instance.sigma2()}};
}

json to_json(const SystemParams& params) {
  json budget;
  if (const auto* total = std::get_if<TotalBudget>(&params.budget)) {
    budget = {{"kind", "total"}, {"p_tot", total->p_tot}};
  } else {
    const auto& ind = std::get<IndividualBudget>(params.budget);
    budget = {{"kind", "individual"}, {"p_s", ind.p_s}, {"p_i", ind.p_i}};
  }
  return {{"p1", params.p1}, {"gamma", params.gamma}, {"budget", budget}};
}

json to_json(const Problem& problem) {
  return {{"instance", to_json(problem.instance)}, {"params", to_json(problem.params)}};
}

json to_json(const BeamSolution& solution) {
  json w = json::array();
  for (Eigen::Index k = 0; k < solution.w.size(); ++k) w.push_back(complex_to_json(solution.w(k)));
  const auto& diag = solution.diagnostics;
  json roots = json::array();
  for (const auto& c : diag.root_candidates) {
    roots.push_back({{"r", c.r}, {"objective", c.objective}, {"boundary", c.boundary}});
  }
  json diagnostics = {{"clamped", diag.clamped},
                      {"root_candidates", roots},
                      {"iterations", diag.iterations},
                      {"root_fallback", diag.root_fallback}};
  if (diag.direction.size() > 0) {
    json v = json::array();
    for (Eigen::Index k = 0; k < diag.direction.size(); ++k) {
      v.push_back(complex_to_json(diag.direction(k)));
    }
    diagnostics["direction"] = v;
    diagnostics["mu"] = diag.mu;
    diagnostics["rayleigh_value"] = diag.rayleigh_value;
  }
  return {{"w", w},
          {"alpha", solution.alpha},
          {"c_d", solution.c_d},
          {"second_phase_power", solution.second_phase_power},
          {"source_power", solution.source_power},
          {"relay_powers", solution.relay_powers},
          {"diagnostics", diagnostics}};
}

NetworkInstance instance_from_json(const json& doc) {
  return NetworkInstance(complex_from_json(field(doc, "h_sd"), "h_sd"),
                         complex_list(field(doc, "h_sr"), "h_sr"),
                         complex_list(field(doc, "h_rd"), "h_rd"), number(doc, "sigma2"));
}

SystemParams params_from_json(const json& doc) {
  SystemParams params;
  params.p1 = number(doc, "p1");
  params.gamma = number(doc, "gamma");
  const json& budget = field(doc, "budget");
  const json& kind = field(budget, "kind");
  if (kind == "total") {
    params.budget = TotalBudget{number(budget, "p_tot")};
  } else if (kind == "individual") {
    IndividualBudget ind;
    ind.p_s = number(budget, "p_s");
    const json& p_i = field(budget, "p_i");
    if (!p_i.is_array()) throw Error(ErrorCode::InvalidInput, "p_i must be a list");
    for (const auto& v : p_i) {
      if (!v.is_number()) throw Error(ErrorCode::InvalidInput, "p_i entries must be numbers");
      ind.p_i.push_back(v.get<double>());
    }
    params.budget = std::move(ind);
  } else {
    throw Error(ErrorCode::InvalidInput, "budget kind must be 'total' or 'individual'");
  }
  return params;
}

Problem problem_from_json(const json& doc) {
  Problem problem{instance_from_json(field(doc, "instance")),
                  params_from_json(field(doc, "params"))};
  validate_params(problem.params, problem.instance.relay_count());
  return problem;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to " + path.string() + " failed");
}

}  // namespace afsec
