#include "ndsp/measure_pressures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "ndsp/metric.hpp"
#include "parallel.hpp"

namespace ndsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Bits = std::vector<std::uint64_t>;

Bits to_bits(const PointSet& s, std::size_t size) {
  Bits b((size + 63) / 64, 0);
  for (Index x : s) b[x / 64] |= std::uint64_t{1} << (x % 64);
  return b;
}

bool meet(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & b[i]) return true;
  return false;
}

std::vector<long> positions(std::size_t size, const PointSet& Z) {
  std::vector<long> pos(size, -1);
  for (std::size_t i = 0; i < Z.size(); ++i) pos.at(Z[i]) = static_cast<long>(i);
  return pos;
}

bool all_finite(const std::vector<double>& w) {
  return std::all_of(w.begin(), w.end(), [](double v) { return std::isfinite(v); });
}

void check_range(const Nds& nds, int N, int max_depth, double eps) {
  if (N < 1) throw std::invalid_argument("minimum depth must be at least 1");
  if (max_depth < N) throw std::invalid_argument("max_depth must be at least N");
  if (!(eps > 0.0) || std::isinf(eps)) throw std::invalid_argument("radius must be positive and finite");
  nds.check_depth(0, max_depth);
}

double hint_width(const Nds& nds, const Potential& f) {
  return std::log(static_cast<double>(std::max<std::size_t>(nds.space(0).size(), 2))) + sup_norm(f) + 1.0;
}

}  // namespace

void MeasureValueRequest::validate(const Nds& nds) const {
  check_range(nds, N, max_depth, epsilon);
  for (Index z : Z)
    if (z >= nds.space(0).size()) throw std::out_of_range("point " + std::to_string(z) + " not in X_0");
}

std::vector<double> AtomPool::weights(double s) const {
  std::vector<double> w(sums.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(-depths[i] * s + sums[i]);
  return w;
}

AtomPool cover_atoms(const Nds& nds, const Potential& f, PointView Zin, int N, int max_depth, double eps) {
  check_range(nds, N, max_depth, eps);
  f.check_compatible(nds);
  const PointSet Z = normalized(PointSet(Zin.begin(), Zin.end()));
  const auto pos = positions(nds.space(0).size(), Z);
  const auto table = birkhoff_table(nds, f, 0);
  const auto& nb = nds.neighborhoods(eps, false);
  AtomPool pool;
  pool.elements = Z.size();
  if (Z.empty()) return pool;
  for (int n = N; n <= max_depth; ++n)
    for (Index x = 0; x < nds.space(0).size(); ++x) {
      PointSet hit;
      for (Index y : nb.neighbors(n)[x])
        if (pos[y] >= 0) hit.push_back(static_cast<Index>(pos[y]));
      if (hit.empty()) continue;
      pool.centers.push_back(x);
      pool.depths.push_back(n);
      pool.sums.push_back(table[static_cast<std::size_t>(n)][x]);
      pool.covers.push_back(std::move(hit));
    }
  return pool;
}

AtomPool packing_atoms(const Nds& nds, const Potential& f, PointView Zin, int N, int max_depth, double eps) {
  check_range(nds, N, max_depth, eps);
  f.check_compatible(nds);
  const PointSet Z = normalized(PointSet(Zin.begin(), Zin.end()));
  const auto table = birkhoff_table(nds, f, 0);
  const auto& nb = nds.neighborhoods(eps, true);
  AtomPool pool;
  pool.elements = Z.size();
  std::vector<Bits> balls;
  for (int n = N; n <= max_depth; ++n)
    for (Index z : Z) {
      if (z >= nds.space(0).size()) throw std::out_of_range("point " + std::to_string(z) + " not in X_0");
      pool.centers.push_back(z);
      pool.depths.push_back(n);
      pool.sums.push_back(table[static_cast<std::size_t>(n)][z]);
      balls.push_back(to_bits(nb.neighbors(n)[z], nds.space(0).size()));
    }
  pool.conflicts.resize(balls.size());
  for (std::size_t i = 0; i < balls.size(); ++i)
    for (std::size_t j = i + 1; j < balls.size(); ++j)
      if (meet(balls[i], balls[j])) {
        pool.conflicts[i].push_back(static_cast<Index>(j));
        pool.conflicts[j].push_back(static_cast<Index>(i));
      }
  return pool;
}

MeasureValue cover_pool_value(const AtomPool& pool, double s, const SolveMode& mode) {
  MeasureValue out;
  out.certified = mode.exact();
  if (pool.elements == 0) return out;
  CoverProblem problem{pool.elements, pool.covers, pool.weights(s)};
  if (!all_finite(problem.weights)) return {kInf, out.certified};
  const auto sel = min_weight_cover(problem, mode);
  return {sel.objective, sel.certified};
}

MeasureValue packing_pool_value(const AtomPool& pool, double s, const SolveMode& mode) {
  MeasureValue out;
  out.certified = mode.exact();
  if (pool.centers.empty()) return out;
  ConflictGraph graph{pool.conflicts, pool.weights(s)};
  if (!all_finite(graph.weights)) return {kInf, out.certified};
  const auto sel = max_weight_independent(graph, mode);
  for (std::size_t i = 0; i < sel.chosen.size(); ++i)
    for (std::size_t j = i + 1; j < sel.chosen.size(); ++j) {
      const auto& adj = pool.conflicts[sel.chosen[i]];
      if (std::find(adj.begin(), adj.end(), static_cast<Index>(sel.chosen[j])) != adj.end())
        throw std::logic_error("packing solver returned intersecting balls");
    }
  return {sel.objective, sel.certified};
}

MeasureValue weighted_pool_value(const AtomPool& pool, double s, const SolveMode& mode, int q) {
  MeasureValue out;
  out.certified = mode.exact();
  if (pool.elements == 0) return out;
  CoverProblem problem{pool.elements, pool.covers, pool.weights(s)};
  if (!all_finite(problem.weights)) return {kInf, out.certified};
  const auto sel = min_weight_multicover(problem, q, mode);
  return {sel.objective, sel.certified};
}

MeasureValue bowen_measure_value(const Nds& nds, const Potential& f, const MeasureValueRequest& req) {
  req.validate(nds);
  return cover_pool_value(cover_atoms(nds, f, req.Z, req.N, req.max_depth, req.epsilon), req.s, req.mode);
}

MeasureValue packing_content_value(const Nds& nds, const Potential& f, const MeasureValueRequest& req) {
  req.validate(nds);
  const auto pool = packing_atoms(nds, f, req.Z, req.N, req.max_depth, req.epsilon);
  const auto v = packing_pool_value(pool, req.s, req.mode);
  return v;
}

MeasureValue weighted_cover_value(const Nds& nds, const Potential& f, const MeasureValueRequest& req, int q) {
  req.validate(nds);
  return weighted_pool_value(cover_atoms(nds, f, req.Z, req.N, req.max_depth, req.epsilon), req.s, req.mode, q);
}

MeasureValue bpp_cover_value(const Nds& nds, const Potential& f, double s, int N, int max_depth, double cover_radius,
                             PointView Zin, const SolveMode& mode) {
  check_range(nds, N, max_depth, cover_radius);
  f.check_compatible(nds);
  const PointSet Z = normalized(PointSet(Zin.begin(), Zin.end()));
  MeasureValue out;
  out.certified = mode.exact();
  if (Z.empty()) return out;
  const auto pos = positions(nds.space(0).size(), Z);
  const auto table = birkhoff_table(nds, f, 0);
  const auto cylinders = ball_cover_cylinders(nds, Z, cover_radius, max_depth);
  CoverProblem problem;
  problem.elements = Z.size();
  for (int len = N; len <= max_depth; ++len)
    for (const auto& cyl : cylinders[static_cast<std::size_t>(len - 1)]) {
      PointSet hit;
      double hi = -kInf;
      for (Index x : cyl) {
        if (pos[x] >= 0) hit.push_back(static_cast<Index>(pos[x]));
        hi = std::max(hi, table[static_cast<std::size_t>(len)][x]);
      }
      problem.sets.push_back(std::move(hit));
      problem.weights.push_back(std::exp(-len * s + hi));
    }
  if (!all_finite(problem.weights)) return {kInf, out.certified};
  const auto sel = min_weight_cover(problem, mode);
  return {sel.objective, sel.certified};
}

std::vector<Partition> default_partition_pool(const Nds& nds, PointView Zin, const std::vector<double>& scales) {
  const PointSet Z = normalized(PointSet(Zin.begin(), Zin.end()));
  std::set<Partition> seen;
  std::vector<Partition> pool;
  auto add = [&](Partition p) {
    for (auto& part : p) part = normalized(part);
    std::erase_if(p, [](const PointSet& s) { return s.empty(); });
    std::sort(p.begin(), p.end());
    if (seen.insert(p).second) pool.push_back(std::move(p));
  };
  add({Z});
  const auto& space = nds.space(0);
  for (double r : scales) {
    // single-linkage components of d <= r; no dependence on index order
    std::vector<std::size_t> root(Z.size());
    std::iota(root.begin(), root.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
      while (root[i] != i) i = root[i] = root[root[i]];
      return i;
    };
    for (std::size_t i = 0; i < Z.size(); ++i)
      for (std::size_t j = i + 1; j < Z.size(); ++j)
        if (space.dist(Z[i], Z[j]) <= r) {
          const auto a = find(i), b = find(j);
          if (a != b) root[std::max(a, b)] = std::min(a, b);
        }
    std::map<std::size_t, PointSet> cells;
    for (std::size_t i = 0; i < Z.size(); ++i) cells[find(i)].push_back(Z[i]);
    Partition p;
    for (auto& [r0, cell] : cells) p.push_back(std::move(cell));
    add(std::move(p));
  }
  Partition singles;
  for (Index z : Z) singles.push_back({z});
  add(std::move(singles));
  return pool;
}

namespace {

// Packing pools for every part of every pooled partition at one radius.
struct PartitionPools {
  std::vector<std::vector<AtomPool>> parts;

  PartitionPools(const Nds& nds, const Potential& f, double eps, const std::vector<Partition>& pool, int depth) {
    for (const auto& partition : pool) {
      std::vector<AtomPool> pools;
      for (const auto& part : partition) pools.push_back(packing_atoms(nds, f, part, depth, depth, eps));
      parts.push_back(std::move(pools));
    }
  }

  ModifiedPackingValue value(double s, const SolveMode& mode) const {
    ModifiedPackingValue out;
    out.value = kInf;
    out.certified = true;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      std::vector<double> terms;
      for (const auto& pool : parts[p]) {
        const auto v = packing_pool_value(pool, s, mode);
        out.certified = out.certified && v.certified;
        terms.push_back(v.value);
      }
      const double total = sorted_sum(std::move(terms));
      if (total < out.value) {
        out.value = total;
        out.best_partition = p;
      }
    }
    if (parts.empty()) out.value = 0.0;
    return out;
  }
};

}  // namespace

ModifiedPackingValue modified_packing_value(const Nds& nds, const Potential& f, double s, double eps, PointView Z,
                                            const std::vector<Partition>& pool, int max_depth,
                                            const SolveMode& mode) {
  check_range(nds, max_depth, max_depth, eps);
  if (pool.empty()) throw std::invalid_argument("partition pool is empty");
  const PointSet zs = normalized(PointSet(Z.begin(), Z.end()));
  for (const auto& partition : pool) {
    PointSet joined;
    for (const auto& part : partition) joined.insert(joined.end(), part.begin(), part.end());
    std::sort(joined.begin(), joined.end());
    if (joined != zs) throw std::invalid_argument("pooled family is not a partition of Z");
  }
  return PartitionPools(nds, f, eps, pool, max_depth).value(s, mode);
}

JumpPointResult jump_point(const std::function<double(double)>& value, double hint_lo, double hint_hi,
                           double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(hint_lo < hint_hi)) throw std::invalid_argument("bracket hint must satisfy lo < hi");
  constexpr int kMaxExpansions = 64;
  JumpPointResult r;

  // sampled monotonicity over the hint
  double prev = kInf;
  for (int i = 0; i < 5; ++i) {
    const double v = value(hint_lo + (hint_hi - hint_lo) * i / 4.0);
    if (v > prev * (1 + 1e-12) && !(std::isinf(v) && std::isinf(prev))) r.monotone_ok = false;
    prev = v;
  }

  double lo = hint_lo, hi = hint_hi;
  double width = hi - lo;
  double vlo = value(lo);
  for (int k = 0; !(vlo > 1.0); ++k) {
    if (k == kMaxExpansions) {
      r.s_star = -kInf;
      r.s_lo = lo;
      r.s_hi = hint_hi;
      r.value_lo = vlo;
      return r;
    }
    hi = lo;
    lo -= width;
    width *= 2;
    vlo = value(lo);
  }
  double vhi = value(hi);
  width = hi - lo;
  for (int k = 0; !(vhi <= 1.0); ++k) {
    if (k == kMaxExpansions) {
      r.s_star = kInf;
      r.s_lo = hi;
      r.s_hi = hi;
      r.value_lo = r.value_hi = vhi;
      return r;
    }
    lo = hi;
    vlo = vhi;
    hi += width;
    width *= 2;
    vhi = value(hi);
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = value(mid);
    ++r.iterations;
    if (v > 1.0) {
      lo = mid;
      if (v > vlo * (1 + 1e-12)) r.monotone_ok = false;
      vlo = v;
    } else {
      hi = mid;
      if (v * (1 + 1e-12) < vhi) r.monotone_ok = false;
      vhi = v;
    }
  }
  r.s_lo = lo;
  r.s_hi = hi;
  r.value_lo = vlo;
  r.value_hi = vhi;
  r.s_star = 0.5 * (lo + hi);
  return r;
}

namespace {

PressureEstimate measure_estimate(std::string kind, const Schedule& schedule, int N,
                                  const std::function<std::pair<JumpPointResult, bool>(double)>& solve) {
  PressureEstimate est;
  est.kind = std::move(kind);
  for (double eps : schedule.eps_list) est.cells.push_back({N, eps, 0.0, 0.0, false});
  detail::parallel_for(est.cells.size(), schedule.threads, [&](std::size_t i) {
    auto& c = est.cells[i];
    const auto [jump, certified] = solve(c.eps);
    c.log_value = jump.s_star;
    c.value = jump.value_hi;
    c.certified = certified && jump.monotone_ok;
  });
  detail::summarize(est, schedule, true, schedule.jump_tolerance);
  est.upper = est.lower;
  est.value = est.lower;
  return est;
}

}  // namespace

PressureEstimate bowen_pressure(const Nds& nds, const Potential& f, PointView Zin, const Schedule& schedule) {
  schedule.validate(nds);
  const PointSet Z = normalized(PointSet(Zin.begin(), Zin.end()));
  const int N = schedule.tail_start();
  const double h = hint_width(nds, f);
  for (double eps : schedule.eps_list) nds.neighborhoods(eps, false);
  return measure_estimate("bowen", schedule, N, [&](double eps) {
    if (Z.empty()) return std::pair{JumpPointResult{-kInf}, schedule.mode.exact()};
    const auto pool = cover_atoms(nds, f, Z, N, schedule.max_n(), eps);
    bool certified = true;
    const auto jump = jump_point(
        [&](double s) {
          const auto v = cover_pool_value(pool, s, schedule.mode);
          certified = certified && v.certified;
          return v.value;
        },
        -h, h, schedule.jump_tolerance);
    return std::pair{jump, certified};
  });
}

PressureEstimate packing_content_pressure(const Nds& nds, const Potential& f, PointView Zin,
                                          const Schedule& schedule) {
  schedule.validate(nds);
  const PointSet Z = normalized(PointSet(Zin.begin(), Zin.end()));
  const int depth = schedule.max_n();
  const double h = hint_width(nds, f);
  for (double eps : schedule.eps_list) nds.neighborhoods(eps, true);
  return measure_estimate("packing_content", schedule, depth, [&](double eps) {
    if (Z.empty()) return std::pair{JumpPointResult{-kInf}, schedule.mode.exact()};
    const auto pool = packing_atoms(nds, f, Z, depth, depth, eps);
    bool certified = true;
    const auto jump = jump_point(
        [&](double s) {
          const auto v = packing_pool_value(pool, s, schedule.mode);
          certified = certified && v.certified;
          return v.value;
        },
        -h, h, schedule.jump_tolerance);
    return std::pair{jump, certified};
  });
}

PressureEstimate packing_pressure(const Nds& nds, const Potential& f, PointView Zin, const Schedule& schedule) {
  schedule.validate(nds);
  const PointSet Z = normalized(PointSet(Zin.begin(), Zin.end()));
  const int depth = schedule.max_n();
  const double h = hint_width(nds, f);
  const auto pool = default_partition_pool(nds, Z, schedule.eps_list);
  for (double eps : schedule.eps_list) nds.neighborhoods(eps, true);
  auto est = measure_estimate("packing", schedule, depth, [&](double eps) {
    if (Z.empty()) return std::pair{JumpPointResult{-kInf}, schedule.mode.exact()};
    const PartitionPools pools(nds, f, eps, pool, depth);
    bool certified = true;
    const auto jump = jump_point(
        [&](double s) {
          const auto v = pools.value(s, schedule.mode);
          certified = certified && v.certified;
          return v.value;
        },
        -h, h, schedule.jump_tolerance);
    return std::pair{jump, certified};
  });
  est.upper_bound_only = true;

  // inf over pooled decompositions of the largest part-wise upper separated estimate
  if (Z.empty()) {
    est.alternative = -kInf;
  } else {
    Schedule serial = schedule;
    serial.threads = 1;
    est.alternative = kInf;
    for (const auto& partition : pool) {
      // singletons have zero upper capacity at any resolution, which would
      // collapse the inf-sup to a per-point quantity
      if (partition.size() == Z.size() && Z.size() > 1) continue;
      double worst = -kInf;
      for (const auto& part : partition)
        worst = std::max(worst, capacity_pressure(nds, f, part, CapacityKind::sep_upper, serial).value);
      est.alternative = std::min(est.alternative, worst);
    }
  }
  return est;
}

}  // namespace ndsp
