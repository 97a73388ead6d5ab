#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ndsp/harness.hpp"

namespace ndsp::cli {

/// The config does not match the schema (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SystemSpec {
  std::string label;
  std::string family;  // symbolic | circle_expanding | tent_sequence | custom_table | random
  nlohmann::json parameters;
  std::optional<std::size_t> horizon;
  std::vector<std::string> potentials;  // empty: every configured potential
  PointSet subset;                      // empty: all of X_0
  std::optional<nlohmann::json> schedule;
  int power = 1;
  bool bounded_metric = false;
  std::uint64_t relabel_seed = 0;
  std::optional<bool> equicontinuous;
  std::optional<bool> homogeneous;
};

struct PotentialSpec {
  std::string label;
  std::string kind;  // zero | constant | first_coordinate | cosine | level_constants | table
  nlohmann::json parameters;
};

struct RunConfig {
  std::vector<SystemSpec> systems;
  std::vector<PotentialSpec> potentials;
  nlohmann::json schedule;
  std::vector<std::string> checks;
  std::vector<std::pair<std::string, std::string>> products;
  std::vector<int> powers{2, 3};
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  double symbolic_slack = 1e-6;
  double grid_slack = 5e-2;
};

/// Command line overrides applied on top of the file.
struct Overrides {
  std::optional<std::string> out_dir;
  std::optional<std::string> mode;
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;
};

/// Schema check and conversion. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
void apply(RunConfig& cfg, const Overrides& o);

/// Schedule from its JSON block. Throws ConfigError for shape problems and
/// ScheduleError for infeasible values.
Schedule parse_schedule(const nlohmann::json& block);

/// Builds systems, potentials and per-system schedules. Throws ConfigError
/// for bad family parameters or unresolved labels and ScheduleError (or
/// HorizonError) when a schedule does not fit a system.
HarnessConfig build(const RunConfig& cfg);

}  // namespace ndsp::cli
