#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ndsp/types.hpp"

namespace ndsp {

/// Absolute tolerance used when checking metric axioms.
inline constexpr double kMetricTolerance = 1e-9;

/// Spaces up to this size may be stored as a dense distance table.
inline constexpr std::size_t kDenseTableLimit = 4096;

/// A finite metric space standing in for one compact stage space.
///
/// Distances come either from a dense row-major table or from a closed-form
/// function of the two indices. Values are immutable after construction, so a
/// space can be shared between systems and threads freely.
class MetricSpace {
 public:
  using DistanceFn = std::function<double(Index, Index)>;

  /// Dense table of size n*n; the table is the source of truth.
  static MetricSpace from_table(std::size_t n, std::vector<double> table);

  /// Closed-form distance. `diameter` is computed by a full scan when omitted.
  static MetricSpace from_function(std::size_t n, DistanceFn fn,
                                   std::optional<double> diameter = std::nullopt);

  /// Attaches a per-point scalar feature (grid position, first symbol, ...).
  /// Potential families evaluate against it.
  MetricSpace with_coordinates(std::vector<double> coords) const;

  std::size_t size() const noexcept { return size_; }
  double diameter() const noexcept { return diameter_; }
  bool has_table() const noexcept { return !table_.empty(); }
  bool has_coordinates() const noexcept { return !coords_.empty(); }
  const std::vector<double>& coordinates() const noexcept { return coords_; }

  double dist(Index i, Index j) const {
    return table_.empty() ? fn_(i, j) : table_[static_cast<std::size_t>(i) * size_ + j];
  }

  /// Smallest strictly positive distance (infinity for a one-point space).
  double min_positive_distance() const;

  /// Materializes a dense table (for small spaces or relabeling).
  std::vector<double> dense_table() const;

 private:
  MetricSpace() = default;

  std::size_t size_ = 0;
  std::vector<double> table_;
  DistanceFn fn_;
  double diameter_ = 0.0;
  std::vector<double> coords_;
};

using SpacePtr = std::shared_ptr<const MetricSpace>;

enum class Axiom { identity, positivity, symmetry, triangle };

struct AxiomViolation {
  Axiom axiom;
  Index i = 0;
  Index j = 0;
  Index k = 0;  // only meaningful for triangle violations
  double excess = 0.0;
};

/// Violations are data: an empty report means all axioms hold within
/// kMetricTolerance. At most `max_witnesses` entries are recorded.
struct ValidationReport {
  std::vector<AxiomViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_metric(const MetricSpace& space, std::size_t max_witnesses = 16);

/// Points at distance < radius (open) or <= radius (closed), ascending.
PointSet ball_members(const MetricSpace& space, Index center, double radius, bool closed);

struct Ball {
  Index center = 0;
  double radius = 0.0;
  bool closed = true;
};

using BallFamily = std::vector<Ball>;

/// Greedy Vitali selection: balls taken by descending radius (ties by
/// ascending center), skipping any that meet an already selected ball. The
/// selected balls are pairwise disjoint and their 5x inflations cover the
/// union of the family. Returns indices into `balls`, in selection order.
std::vector<std::size_t> five_r_disjoint_subfamily(const MetricSpace& space,
                                                   const BallFamily& balls);

/// Greedy net of `subset`: scans the subset in index order and keeps a point
/// whenever it is farther than epsilon from every kept point. The result both
/// epsilon-spans (<=) and epsilon-separates (>) the subset.
PointSet greedy_epsilon_net(const MetricSpace& space, PointView subset, double epsilon);

/// Same scan with a strict cover predicate (< epsilon), so open balls of
/// radius epsilon around the net cover the subset.
PointSet greedy_open_net(const MetricSpace& space, PointView subset, double epsilon);

}  // namespace ndsp
