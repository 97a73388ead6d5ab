#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ndsp/nds.hpp"

namespace ndsp {

struct OracleValues {
  /// Limit reference for the entropy (mean log growth over the horizon window).
  double entropy_reference = 0.0;
  /// Keyed by potential label.
  std::map<std::string, double> pressure_reference;
  /// "exact at scheduled eps" or "analytic limit reference".
  std::string validity;
};

struct ZooSystem {
  Nds system;
  OracleValues oracle;
};

/// Alphabet size at absolute position j; the list is cycled.
int alphabet_at(const std::vector<int>& sizes, std::size_t j);

/// Word spaces: level k holds all words over positions k..L-1 (length L-k),
/// metric 2^-(first disagreement index), map drops the first symbol. Horizon
/// is L-1 so depth n <= L from level 0. Coordinates are first symbols.
ZooSystem make_symbolic(const std::vector<int>& alphabet_sizes, int L);

/// prod_{j<n} |A_j|: the spanning and separated count at eps = 1/2.
double symbolic_count(const std::vector<int>& alphabet_sizes, int n);

/// prod_{j<n} sum_{a in A_j} exp(weight(j, a)): P_n and Q_n at eps = 1/2 for
/// potentials depending only on the first symbol.
double symbolic_partition(const std::vector<int>& alphabet_sizes, int n,
                          const std::function<double(std::size_t, int)>& weight);

/// Circle R/Z on `grid` points with the arc metric; T_k(i) = m_k * i mod grid.
/// Multipliers are cycled over `horizon` maps.
ZooSystem make_circle_expanding(const std::vector<int>& multipliers, std::size_t grid,
                                std::size_t horizon);

/// Tent maps x -> s_k * min(x, 1 - x) on the grid i/(grid-1), snapped to the
/// nearest grid point with ties to even. Slopes are cycled.
ZooSystem make_tent_sequence(const std::vector<double>& slopes, std::size_t grid,
                             std::size_t horizon);

/// Per-level random permutations; seed 0 gives the identity.
ConjugacyData make_relabel_conjugacy(const Nds& nds, std::uint64_t seed);

/// Random system with 1..max_points points per level (planar lattice points,
/// Euclidean metric scaled into [0, sqrt 2]) and random stage maps.
Nds make_random_system(std::uint64_t seed, std::size_t levels, std::size_t max_points);

/// One point at every level.
Nds make_one_point(std::size_t horizon);

/// Identity maps on a discrete space of `points` points.
Nds make_identity_system(std::size_t points, std::size_t horizon);

/// Disjoint union with cross distance 1; points of `b` follow those of `a`.
Nds disjoint_union(const Nds& a, const Nds& b);

/// Explicit per-level distance tables and maps.
Nds make_custom(std::string label, const std::vector<std::vector<double>>& tables,
                const std::vector<std::vector<Index>>& maps);

}  // namespace ndsp
