#pragma once

// JSON documents for problem inputs and solutions.
//
// Problem document:
//   {
//     "instance": { "h_sd": [re, im], "h_sr": [[re, im], ...],
//                   "h_rd": [[re, im], ...], "sigma2": s },
//     "params":   { "p1": p, "gamma": g,
//                   "budget": { "kind": "total", "p_tot": P }
//                          or { "kind": "individual", "p_s": Ps, "p_i": [P1, ...] } }
//   }
//
// Numbers are written in shortest round-trip form, so reading back a written
// document reproduces every double exactly.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "afsec/model.hpp"

namespace afsec {

struct Problem {
  NetworkInstance instance;
  SystemParams params;
};

nlohmann::json to_json(const NetworkInstance& instance);
nlohmann::json to_json(const SystemParams& params);
nlohmann::json to_json(const Problem& problem);
nlohmann::json to_json(const BeamSolution& solution);

NetworkInstance instance_from_json(const nlohmann::json& doc);
SystemParams params_from_json(const nlohmann::json& doc);
Problem problem_from_json(const nlohmann::json& doc);

/// Throws IoError if the file cannot be read, InvalidInput on schema errors.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace afsec
