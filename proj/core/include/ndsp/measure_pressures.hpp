#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "ndsp/nds.hpp"
#include "ndsp/potential.hpp"
#include "ndsp/pressure_estimators.hpp"
#include "ndsp/solvers.hpp"

namespace ndsp {

struct MeasureValueRequest {
  double s = 0.0;
  int N = 1;          // minimum depth
  double epsilon = 0.5;
  PointSet Z;
  SolveMode mode;
  int max_depth = 1;  // N <= max_depth <= H + 1

  void validate(const Nds& nds) const;
};

struct MeasureValue {
  double value = 0.0;
  bool certified = false;
};

/// Atoms (x, n) with weight exp(-n s + S_n f(x)); the s-independent part is
/// built once so jump-point searches only rescale weights.
struct AtomPool {
  std::vector<Index> centers;
  std::vector<int> depths;
  std::vector<double> sums;      // S_n f(center)
  std::vector<PointSet> covers;  // cover pools: positions in Z; packing pools: empty
  std::vector<PointSet> conflicts;  // packing pools: intersecting atoms
  std::size_t elements = 0;      // |Z|

  std::vector<double> weights(double s) const;
};

/// Open Bowen balls at every x in X_0, depths N..max_depth, restricted to Z.
AtomPool cover_atoms(const Nds& nds, const Potential& f, PointView Z, int N, int max_depth, double eps);
/// Closed Bowen balls centered in Z, depths N..max_depth; atoms conflict
/// when their balls meet anywhere in X_0.
AtomPool packing_atoms(const Nds& nds, const Potential& f, PointView Z, int N, int max_depth, double eps);

MeasureValue cover_pool_value(const AtomPool& pool, double s, const SolveMode& mode);
MeasureValue packing_pool_value(const AtomPool& pool, double s, const SolveMode& mode);
MeasureValue weighted_pool_value(const AtomPool& pool, double s, const SolveMode& mode, int q = 4);

/// Infimum over (N, eps)-covers of Z by open Bowen balls of the weighted sum.
MeasureValue bowen_measure_value(const Nds& nds, const Potential& f, const MeasureValueRequest& req);
/// Supremum over (N, eps)-packings by disjoint closed Bowen balls centered in Z.
MeasureValue packing_content_value(const Nds& nds, const Potential& f, const MeasureValueRequest& req);
/// Weighted covers with c_i in {1/q, ..., q/q}; never above the Bowen value.
MeasureValue weighted_cover_value(const Nds& nds, const Potential& f, const MeasureValueRequest& req, int q = 4);

/// Covers of Z by ball-cover cylinders of lengths N..max_depth, weighted by
/// exp(-len s + sup of S_len f over the cylinder).
MeasureValue bpp_cover_value(const Nds& nds, const Potential& f, double s, int N, int max_depth, double cover_radius,
                             PointView Z, const SolveMode& mode);

using Partition = std::vector<PointSet>;

/// {Z}, metric cells of Z at each scale (single-linkage components of
/// d_0 <= scale, so relabeling permutes the pool), and singletons. Deduplicated.
std::vector<Partition> default_partition_pool(const Nds& nds, PointView Z, const std::vector<double>& scales);

struct ModifiedPackingValue {
  double value = 0.0;
  std::size_t best_partition = 0;
  bool certified = false;
  bool upper_bound = true;  // the pooled minimum only bounds the infimum from above
};

/// min over pooled partitions of sum_i of the packing content of Z_i at depth max_depth.
ModifiedPackingValue modified_packing_value(const Nds& nds, const Potential& f, double s, double eps, PointView Z,
                                            const std::vector<Partition>& pool, int max_depth,
                                            const SolveMode& mode);

struct JumpPointResult {
  double s_star = std::numeric_limits<double>::quiet_NaN();
  double s_lo = 0.0, s_hi = 0.0;
  double value_lo = 0.0, value_hi = 0.0;
  int iterations = 0;
  /// Sampled non-increase in s over the final bracket and the hint.
  bool monotone_ok = true;
};

/// Bisection to the crossing of 1 with value(s_lo) > 1 >= value(s_hi). The
/// bracket starts at the hint and widens geometrically. A function that never
/// exceeds 1 gives s* = -inf; one that never drops to 1 gives +inf.
JumpPointResult jump_point(const std::function<double(double)>& value, double hint_lo, double hint_hi,
                           double tolerance = 1e-3);

/// s* of the Bowen functional per eps, N = schedule.tail_start(), depths up to
/// max(n_list). Cells hold (N, eps, s*).
PressureEstimate bowen_pressure(const Nds& nds, const Potential& f, PointView Z, const Schedule& schedule);

/// s* of the pooled modified packing functional per eps; `alternative` is the
/// pooled min over partitions of the largest sep_upper estimate of a part
/// (the all-singletons partition is left out of that minimum).
PressureEstimate packing_pressure(const Nds& nds, const Potential& f, PointView Z, const Schedule& schedule);

/// s* of the packing content at depth max(n_list) alone (no decomposition).
PressureEstimate packing_content_pressure(const Nds& nds, const Potential& f, PointView Z, const Schedule& schedule);

}  // namespace ndsp
