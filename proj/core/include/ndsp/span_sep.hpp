#pragma once

#include "ndsp/nds.hpp"
#include "ndsp/potential.hpp"
#include "ndsp/solvers.hpp"

namespace ndsp {

struct SpanSepResult {
  PointSet chosen;  // level-0 indices
  /// Cardinality, or sum of exp(S_n f) over `chosen` when weighted.
  double objective = 0.0;
  /// Exact solve, no greedy fallback anywhere.
  bool certified = false;
};

/// Smallest (weighted) F in X_0 such that every z in Z has d_n(z, y) <= eps
/// for some y in F. Weights are exp(S_n f(y)) when `weights` is given.
/// Empty Z gives the empty set with objective 0.
SpanSepResult minimal_spanning(const Nds& nds, PointView Z, int n, double eps, const SolveMode& mode,
                               const Potential* weights = nullptr);

/// Largest (weighted) E in Z with d_n(x, y) > eps for distinct x, y in E.
SpanSepResult maximal_separated(const Nds& nds, PointView Z, int n, double eps, const SolveMode& mode,
                                const Potential* weights = nullptr);

/// Infimum of sum exp(S_n f) over (n, eps)-spanning sets of Z (0 for empty Z).
double Q_n(const Nds& nds, const Potential& f, PointView Z, int n, double eps, const SolveMode& mode);

/// Supremum of sum exp(S_n f) over (n, eps)-separated subsets of Z.
double P_n(const Nds& nds, const Potential& f, PointView Z, int n, double eps, const SolveMode& mode);

/// Direct pairwise checks with bowen_distance, independent of the solvers.
bool spans(const Nds& nds, PointView Z, PointView F, int n, double eps);
bool is_separated(const Nds& nds, PointView E, int n, double eps);

}  // namespace ndsp
