#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ndsp/types.hpp"

namespace ndsp {

/// Default and hard ceiling for the per-component exact budget.
inline constexpr std::size_t kDefaultExactBudget = 20;
inline constexpr std::size_t kMaxExactBudget = 64;

enum class SolveKind { exact, greedy };

struct SolveMode {
  SolveKind kind = SolveKind::exact;
  std::size_t exact_budget = kDefaultExactBudget;
  /// Solve over-budget instances greedily (uncertified) instead of throwing.
  bool fallback = false;

  bool exact() const noexcept { return kind == SolveKind::exact; }
  static SolveMode greedy() { return {SolveKind::greedy, kDefaultExactBudget, false}; }
};

/// Ascending-order sum, so equal multisets give bit-identical totals.
double sorted_sum(std::vector<double> terms);

/// Cover elements 0..elements-1 by candidate sets with nonnegative weights.
struct CoverProblem {
  std::size_t elements = 0;
  std::vector<PointSet> sets;
  std::vector<double> weights;
};

struct Selection {
  std::vector<std::size_t> chosen;  // ascending candidate indices
  double objective = 0.0;
  bool certified = false;
};

/// Minimum-weight set cover. Exact mode first merges identical candidates,
/// drops dominated candidates and implied elements, splits into connected
/// components, and runs branch and bound on each component; a component with
/// more elements than the budget raises BudgetExceeded. Greedy mode picks the
/// candidate of least weight per newly covered element (ties: lowest index).
/// Throws std::domain_error when some element lies in no candidate.
Selection min_weight_cover(const CoverProblem& problem, const SolveMode& mode);

/// Fractional cover with weights k/q, k in 0..q: minimize sum (k_i/q) w_i
/// subject to sum over candidates containing u of k_i >= q for every u.
struct Multiselection {
  std::vector<std::pair<std::size_t, int>> units;  // (candidate, k) with k > 0
  int q = 4;
  double objective = 0.0;
  bool certified = false;
};

/// Exact: same reductions and budget as min_weight_cover, then branch and
/// bound fixing k_i candidate by candidate. Greedy: unit by unit by cost per
/// deficient element, and never worse than the greedy cover.
Multiselection min_weight_multicover(const CoverProblem& problem, int q, const SolveMode& mode);

/// Undirected conflict graph; adjacency lists need not be sorted.
struct ConflictGraph {
  std::vector<PointSet> adjacency;
  std::vector<double> weights;
};

/// Maximum-weight independent set. Exact mode drops vertices dominated by a
/// neighbor (N[u] inside N[v], w(u) >= w(v) removes v), splits components and
/// runs branch and bound with a clique-cover bound. Greedy mode inserts by
/// descending weight (ties: lowest index) while the set stays independent.
Selection max_weight_independent(const ConflictGraph& graph, const SolveMode& mode);

}  // namespace ndsp
