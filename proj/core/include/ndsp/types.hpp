#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ndsp {

/// Index of a point inside one stage space.
using Index = std::uint32_t;

/// Ascending, duplicate-free list of point indices.
using PointSet = std::vector<Index>;
using PointView = std::span<const Index>;

/// A depth or level request reaches past the last stage the system provides.
class HorizonError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Exact mode was asked to solve a component larger than its budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::size_t size, std::size_t budget)
      : std::runtime_error("exact solver budget exceeded: component of size " +
                           std::to_string(size) + " > budget " + std::to_string(budget)),
        size_(size),
        budget_(budget) {}

  std::size_t size() const noexcept { return size_; }
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t size_;
  std::size_t budget_;
};

/// Sorts and deduplicates an index list in place, returning it.
PointSet normalized(PointSet points);

/// Returns 0..count-1.
PointSet all_points(std::size_t count);

}  // namespace ndsp
