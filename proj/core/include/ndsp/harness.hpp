#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ndsp/measure_pressures.hpp"
#include "ndsp/nds.hpp"
#include "ndsp/potential.hpp"
#include "ndsp/pressure_estimators.hpp"

namespace ndsp {

/// symbolic: absolute slack; grid: relative slack (floored at 1).
enum class SlackClass { symbolic, grid };

struct HarnessSystem {
  std::string label;
  Nds system;
  std::vector<Potential> potentials;
  PointSet Z;  // empty means all of X_0
  SlackClass slack_class = SlackClass::symbolic;
  /// Limit-level comparisons are asserted only for equicontinuous zoo systems.
  bool equicontinuous = false;
  /// Hypothesis of the homogeneous collapse check (full shift spaces).
  bool homogeneous = false;
  std::optional<Schedule> schedule;  // overrides the shared schedule
};

struct HarnessConfig {
  std::vector<HarnessSystem> systems;
  /// Pairs of system labels for the product checks.
  std::vector<std::pair<std::string, std::string>> products;
  std::vector<int> powers{2, 3};
  Schedule schedule;
  std::uint64_t seed = 1;
  double symbolic_slack = 1e-6;
  double grid_slack = 5e-2;
  std::size_t max_witnesses = 8;
  std::size_t threads = 1;  // checks run concurrently
};

enum class CheckStatus { pass, fail, not_applicable, diagnostic };
std::string to_string(CheckStatus status);

/// Both sides of one violated (or, for diagnostics, reported) relation.
/// n = 0 marks a proxy-level comparison.
struct Witness {
  std::string system;
  std::string potential;
  std::string relation;
  int n = 0;
  double eps = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct Diagnostic {
  std::string system;
  std::string potential;
  std::string name;
  double value = 0.0;
};

struct TheoremCheck {
  std::string theorem_id;
  CheckStatus status = CheckStatus::not_applicable;
  std::vector<std::string> systems;
  std::vector<std::string> potentials;
  double slack = 0.0;  // largest slack applied
  std::size_t assertions = 0;
  std::size_t violations = 0;
  std::vector<Witness> witnesses;  // first violations, capped
  std::vector<Diagnostic> diagnostics;
  std::string note;

  /// True for a check that asserted and found a violation.
  bool failed() const { return status == CheckStatus::fail; }
};

/// Ids in report order.
const std::vector<std::string>& check_ids();

TheoremCheck check_inequality_chain(const HarnessConfig& cfg);
TheoremCheck check_subset_properties(const HarnessConfig& cfg);
TheoremCheck check_potential_properties(const HarnessConfig& cfg);
TheoremCheck check_power_rule(const HarnessConfig& cfg);
TheoremCheck check_product_rules(const HarnessConfig& cfg);
TheoremCheck check_invariance(const HarnessConfig& cfg);
TheoremCheck check_homogeneous_collapse(const HarnessConfig& cfg);

/// Throws std::invalid_argument for an unknown id.
TheoremCheck run_check(const std::string& id, const HarnessConfig& cfg);
/// Runs the listed checks (all when empty) and returns them sorted by id.
std::vector<TheoremCheck> run_checks(const std::vector<std::string>& ids, const HarnessConfig& cfg);

/// The six proxies of one system and potential under one schedule.
struct PressureReport {
  CapacitySet capacity;
  PressureEstimate bowen;
  PressureEstimate packing;
};
PressureReport all_pressures(const Nds& nds, const Potential& f, PointView Z, const Schedule& schedule);

/// Radius delta for the m-th power system such that power-Bowen distance
/// <= delta forces source-Bowen distance <= eps over whole blocks. It sits
/// strictly between distance values (midpoint below the smallest offending
/// distance); eps itself when no pair offends.
double power_radius(const Nds& nds, int m, double eps);

}  // namespace ndsp
