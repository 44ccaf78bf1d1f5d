#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace amcsp {

// Everything a command needs; echoed into every report. Command-specific
// settings live in `params`.
struct ExperimentConfig {
  std::string command;
  std::uint64_t seed = 1;
  std::size_t trials = 10000;
  std::size_t limit_exhaustive = 20;
  std::string epsilon = "1/2";
  std::string backend = "enumerative";
  std::string code = "rs";
  std::string input;
  std::string out;
  nlohmann::json params = nlohmann::json::object();

  nlohmann::json to_json() const;
  // Fields present in j override the current values.
  void merge_json(const nlohmann::json& j);
};

struct CommandResult {
  std::string output;   // CSV report, or the CSP file for reduce
  std::string summary;  // key=value lines
};

CommandResult cmd_reduce(const ExperimentConfig& cfg);
CommandResult cmd_gamevalue(const ExperimentConfig& cfg);
CommandResult cmd_walk(const ExperimentConfig& cfg);
CommandResult cmd_concentrate(const ExperimentConfig& cfg);
CommandResult cmd_amplify(const ExperimentConfig& cfg);
CommandResult cmd_pipeline(const ExperimentConfig& cfg);

CommandResult run_command(const ExperimentConfig& cfg);

}  // namespace amcsp
