#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ndsp/metric.hpp"
#include "ndsp/types.hpp"

namespace ndsp {

/// One Bowen ball B_{k,n}(x, eps) (open) or its closed variant.
struct BowenAtom {
  std::size_t level = 0;
  int depth = 1;
  Index center = 0;
  double radius = 0.0;
  bool closed = false;
};

/// Rows j = 0..H-k of the forward orbit table: rows[j][x] = T_k^j x.
struct Trajectories {
  std::vector<std::vector<Index>> rows;
};

class BowenNeighborhoods;

/// A staged nonautonomous system over levels 0..H.
///
/// Level k carries a finite metric space X_k; for k < H the stage map T_k is
/// an index array from X_k into X_{k+1}. Maps need not be injective or
/// surjective. A system is immutable once built; orbit tables and Bowen
/// neighborhoods are memoized behind a mutex and shared between copies
/// (first computation wins, every reader sees the same table).
class Nds {
 public:
  Nds(std::string label, std::vector<SpacePtr> spaces, std::vector<std::vector<Index>> maps);

  const std::string& label() const noexcept { return label_; }
  Nds with_label(std::string label) const;

  /// Largest level index H.
  std::size_t horizon() const noexcept { return spaces_.size() - 1; }
  /// Largest depth n usable from level k (k + n <= H + 1).
  int max_depth(std::size_t k = 0) const noexcept {
    return static_cast<int>(spaces_.size() - k);
  }

  const MetricSpace& space(std::size_t k) const { return *spaces_.at(k); }
  const SpacePtr& space_ptr(std::size_t k) const { return spaces_.at(k); }
  const std::vector<Index>& map(std::size_t k) const { return maps_.at(k); }
  const std::vector<SpacePtr>& spaces() const noexcept { return spaces_; }
  const std::vector<std::vector<Index>>& maps() const noexcept { return maps_; }

  /// Throws HorizonError unless n >= 1 and k + n <= H + 1.
  void check_depth(std::size_t k, int n) const;

  /// Memoized orbit table from level k through the horizon.
  const Trajectories& trajectories(std::size_t k) const;

  /// T_k^j as an index array X_k -> X_{k+j}; j = 0 is the identity.
  std::vector<Index> compose(std::size_t k, std::size_t j) const;

  /// max_{0<=j<n} d_{k+j}(T_k^j x, T_k^j y).
  double bowen_distance(std::size_t k, int n, Index x, Index y) const;

  /// Members of a Bowen ball, computed from the Bowen distance.
  PointSet bowen_ball_members(const BowenAtom& atom) const;

  /// Same ball computed as the intersection of preimages of stage balls.
  PointSet bowen_ball_by_preimages(const BowenAtom& atom) const;

  /// Level-0 Bowen neighborhoods for one radius, memoized per (radius, closed).
  const BowenNeighborhoods& neighborhoods(double radius, bool closed) const;

 private:
  struct Memo;

  std::string label_;
  std::vector<SpacePtr> spaces_;
  std::vector<std::vector<Index>> maps_;
  std::shared_ptr<Memo> memo_;
};

/// Level-0 Bowen neighbor lists for every depth 1..H+1 at a fixed radius.
///
/// neighbors(n)[x] lists (ascending, including x) every y in X_0 with
/// d_n(x, y) <= radius (closed) or < radius (open). Depth n+1 is obtained by
/// filtering depth n, so the quadratic pass happens once per radius.
class BowenNeighborhoods {
 public:
  BowenNeighborhoods(const Nds& nds, double radius, bool closed);

  double radius() const noexcept { return radius_; }
  bool closed() const noexcept { return closed_; }
  int max_depth() const noexcept { return static_cast<int>(by_depth_.size()); }
  const std::vector<PointSet>& neighbors(int n) const;

 private:
  double radius_;
  bool closed_;
  std::vector<std::vector<PointSet>> by_depth_;
};

// System transformations ----------------------------------------------------

/// m-th power system: level k is X_{km} with map T_{km}^m; horizon floor(H/m).
Nds power_system(const Nds& nds, int m);

/// Product system with the max metric; pair (i, j) has index i*|Y_k| + j.
/// Horizons are truncated to the shorter factor.
Nds product_system(const Nds& a, const Nds& b);

/// Index of the pair (i, j) at level k of product_system(a, b).
inline Index product_index(const Nds& b, std::size_t k, Index i, Index j) {
  return static_cast<Index>(i * b.space(k).size() + j);
}

/// Embedded subsystem: level k is the forward image T^k K with the induced
/// metric and restricted maps. `members[k]` records the original indices.
struct Restriction {
  Nds system;
  std::vector<PointSet> members;
};

Restriction restrict_to_compact(const Nds& nds, PointView K);

/// Per-level bijections pi_k : X_k -> Y_k, optionally with the target maps and
/// metrics. Missing targets are induced (pushforward), which makes the
/// relabeling isometric by construction.
struct ConjugacyData {
  std::vector<std::vector<Index>> pi;
  std::optional<std::vector<std::vector<Index>>> target_maps;
  std::optional<std::vector<SpacePtr>> target_spaces;
};

/// Raised when a supplied conjugacy is not a bijection or does not commute.
class CommutationError : public std::runtime_error {
 public:
  CommutationError(const std::string& what, std::size_t level, Index point)
      : std::runtime_error(what), level_(level), point_(point) {}
  std::size_t level() const noexcept { return level_; }
  Index point() const noexcept { return point_; }

 private:
  std::size_t level_;
  Index point_;
};

/// Builds the conjugated system Y. Checks that every pi_k is a bijection and
/// that R_k o pi_k = pi_{k+1} o T_k for supplied target maps R.
Nds apply_conjugacy(const Nds& nds, const ConjugacyData& conj);

/// Replaces every stage metric d by d / (1 + d).
Nds bounded_metric_transform(const Nds& nds);

/// Radius in the bounded metric matching radius eps in the original one.
inline double bounded_radius(double eps) { return eps / (1.0 + eps); }

/// Shifted system (X_k, T_k), (X_{k+1}, T_{k+1}), ... starting at level k.
Nds shifted_system(const Nds& nds, std::size_t k);

}  // namespace ndsp
