#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ndsp_cli/config.hpp"

namespace ndsp::cli {

enum ExitCode : int { kOk = 0, kCheckFailure = 1, kSchemaError = 2, kInfeasible = 3, kInternal = 4 };

/// Fixed column order of estimates.csv.
inline constexpr const char* kCsvHeader = "system,potential,kind,n,epsilon,s,value,certified";

/// Everything `run` writes, rendered in memory.
struct RunOutputs {
  std::string estimates_csv;
  std::string summary_json;
  std::string checks_json;
  std::map<std::string, std::string> plotdata;  // file name -> TSV
  bool checks_ok = true;
};

RunOutputs compute(const RunConfig& cfg);
void write_outputs(const RunOutputs& out, const std::string& dir);

struct Outcome {
  int exit_code = kOk;
  std::string message;
};

/// Loads, validates, computes and writes; maps failures to exit codes.
Outcome run(const std::string& config_path, const Overrides& overrides);
Outcome run_document(const nlohmann::json& doc, const Overrides& overrides);

/// Reruns with one field replaced per value. `parameter` is a JSON pointer
/// into the config (e.g. /schedule/tail_window) or one of the aliases
/// epsilon, n_max, seed, mode, power, tail_window. Values are JSON literals.
/// Each run goes to <out>/<name>=<value>/; sweep.csv concatenates them.
Outcome sweep(const std::string& config_path, const std::string& parameter, const std::vector<std::string>& values,
              const Overrides& overrides);

Outcome validate(const std::string& config_path, const Overrides& overrides);

/// (id, one-line description) for every harness check.
std::vector<std::pair<std::string, std::string>> list_checks();

}  // namespace ndsp::cli
