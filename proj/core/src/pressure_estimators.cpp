#include "ndsp/pressure_estimators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ndsp/metric.hpp"
#include "ndsp/span_sep.hpp"
#include "parallel.hpp"

namespace ndsp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_per_step(double value, int n) { return value > 0.0 ? std::log(value) / n : kNegInf; }

}  // namespace

void Schedule::validate() const {
  if (n_list.empty()) throw ScheduleError("n_list is empty");
  if (eps_list.empty()) throw ScheduleError("eps_list is empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw ScheduleError("depths must be at least 1");
    if (i && n_list[i] <= n_list[i - 1]) throw ScheduleError("n_list must be strictly ascending");
  }
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0) || std::isinf(eps_list[i])) throw ScheduleError("radii must be positive and finite");
    if (i && eps_list[i] >= eps_list[i - 1]) throw ScheduleError("eps_list must be strictly descending");
  }
  if (!(tail_window > 0.0 && tail_window <= 1.0)) throw ScheduleError("tail_window must lie in (0, 1]");
  if (!(jump_tolerance > 0.0)) throw ScheduleError("jump_tolerance must be positive");
  if (mode.exact() && (mode.exact_budget == 0 || mode.exact_budget > kMaxExactBudget))
    throw ScheduleError("exact_budget must lie in 1.." + std::to_string(kMaxExactBudget));
}

void Schedule::validate(const Nds& nds) const {
  validate();
  if (max_n() > nds.max_depth(0))
    throw ScheduleError("depth " + std::to_string(max_n()) + " exceeds the horizon of " + nds.label() +
                        " (max depth " + std::to_string(nds.max_depth(0)) + ")");
}

std::vector<int> Schedule::tail() const {
  validate();
  const auto count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(tail_window * static_cast<double>(n_list.size()) - 1e-9)));
  return {n_list.end() - static_cast<std::ptrdiff_t>(std::min(count, n_list.size())), n_list.end()};
}

std::string to_string(CapacityKind kind) {
  switch (kind) {
    case CapacityKind::span_lower: return "span_lower";
    case CapacityKind::span_upper: return "span_upper";
    case CapacityKind::sep_lower: return "sep_lower";
    case CapacityKind::sep_upper: return "sep_upper";
  }
  return "?";
}

std::optional<CapacityKind> capacity_kind_from(const std::string& name) {
  for (auto k : {CapacityKind::span_lower, CapacityKind::span_upper, CapacityKind::sep_lower,
                 CapacityKind::sep_upper})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

const Cell* PressureEstimate::find(int n, double eps) const {
  for (const auto& c : cells)
    if (c.n == n && c.eps == eps) return &c;
  return nullptr;
}

namespace detail {

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

void summarize(PressureEstimate& est, const Schedule& schedule, bool lower_kind, double monotone_slack) {
  const auto tail = schedule.tail();
  const double eps = schedule.smallest_eps();
  est.certified_cells = 0;
  for (const auto& c : est.cells) est.certified_cells += c.certified ? 1 : 0;

  std::vector<double> window;
  std::vector<double> xs, ys;
  for (const auto& c : est.cells) {
    if (c.eps != eps || std::find(tail.begin(), tail.end(), c.n) == tail.end()) continue;
    window.push_back(c.log_value);
    if (std::isfinite(c.log_value)) {
      xs.push_back(c.n);
      ys.push_back(c.n * c.log_value);
    }
  }
  if (!window.empty()) {
    est.lower = *std::min_element(window.begin(), window.end());
    est.upper = *std::max_element(window.begin(), window.end());
  }
  est.value = lower_kind ? est.lower : est.upper;
  est.growth_rate = ls_slope(xs, ys);

  // at fixed n the values may only grow as eps shrinks
  est.epsilon_monotone_ok = true;
  for (std::size_t i = 0; i < est.cells.size(); ++i)
    for (std::size_t j = 0; j < est.cells.size(); ++j) {
      const auto& a = est.cells[i];
      const auto& b = est.cells[j];
      if (a.n != b.n || !(b.eps < a.eps)) continue;
      if (std::isinf(a.log_value) && a.log_value < 0) continue;
      if (b.log_value < a.log_value - monotone_slack * std::max(1.0, std::abs(a.log_value))) est.epsilon_monotone_ok = false;
    }
}

}  // namespace detail

std::vector<Cell> partition_cells(const Nds& nds, const Potential& f, PointView Z, bool separated,
                                  const Schedule& schedule) {
  schedule.validate(nds);
  f.check_compatible(nds);
  std::vector<Cell> cells;
  for (double eps : schedule.eps_list)
    for (int n : schedule.n_list) cells.push_back({n, eps, 0.0, 0.0, false});
  // warm the neighbor tables serially so workers only read them
  for (double eps : schedule.eps_list) nds.neighborhoods(eps, true);
  detail::parallel_for(cells.size(), schedule.threads, [&](std::size_t i) {
    auto& c = cells[i];
    const auto r = separated ? maximal_separated(nds, Z, c.n, c.eps, schedule.mode, &f)
                             : minimal_spanning(nds, Z, c.n, c.eps, schedule.mode, &f);
    c.value = r.objective;
    c.log_value = log_per_step(r.objective, c.n);
    c.certified = r.certified;
  });
  return cells;
}

namespace {

PressureEstimate make_estimate(std::string kind, std::vector<Cell> cells, const Schedule& schedule, bool lower) {
  PressureEstimate est;
  est.kind = std::move(kind);
  est.cells = std::move(cells);
  detail::summarize(est, schedule, lower, 1e-12);
  return est;
}

bool is_lower(CapacityKind k) { return k == CapacityKind::span_lower || k == CapacityKind::sep_lower; }
bool is_sep(CapacityKind k) { return k == CapacityKind::sep_lower || k == CapacityKind::sep_upper; }

}  // namespace

PressureEstimate capacity_pressure(const Nds& nds, const Potential& f, PointView Z, CapacityKind kind,
                                   const Schedule& schedule) {
  return make_estimate("capacity:" + to_string(kind), partition_cells(nds, f, Z, is_sep(kind), schedule), schedule,
                       is_lower(kind));
}

CapacitySet capacity_pressures(const Nds& nds, const Potential& f, PointView Z, const Schedule& schedule) {
  const auto span = partition_cells(nds, f, Z, false, schedule);
  const auto sep = partition_cells(nds, f, Z, true, schedule);
  return {make_estimate("capacity:span_lower", span, schedule, true),
          make_estimate("capacity:span_upper", span, schedule, false),
          make_estimate("capacity:sep_lower", sep, schedule, true),
          make_estimate("capacity:sep_upper", sep, schedule, false)};
}

PressureEstimate entropy(const Nds& nds, PointView Z, const Schedule& schedule, CapacityKind kind) {
  return capacity_pressure(nds, Potential::zero(nds), Z, kind, schedule);
}

CaratheodoryCheck caratheodory_cross_check(const Nds& nds, const Potential& f, PointView Z, double s, int n,
                                           double eps, const SolveMode& mode) {
  const auto shifted = f.plus_constant(-s);
  const auto ls = minimal_spanning(nds, Z, n, eps, mode, &shifted);
  const auto lp = maximal_separated(nds, Z, n, eps, mode, &shifted);
  const auto q = minimal_spanning(nds, Z, n, eps, mode, &f);
  const auto p = maximal_separated(nds, Z, n, eps, mode, &f);
  CaratheodoryCheck out;
  out.lambda_span = ls.objective;
  out.lambda_sep = lp.objective;
  out.residual_span = std::abs(ls.objective - std::exp(-n * s) * q.objective);
  out.residual_sep = std::abs(lp.objective - std::exp(-n * s) * p.objective);
  out.certified = ls.certified && lp.certified && q.certified && p.certified;
  return out;
}

std::vector<std::vector<PointSet>> ball_cover_cylinders(const Nds& nds, PointView Zin, double eps, int max_length) {
  if (!(eps > 0.0)) throw std::invalid_argument("cover radius must be positive");
  nds.check_depth(0, max_length);
  const PointSet Z = normalized(PointSet(Zin.begin(), Zin.end()));
  std::vector<char> in_z(nds.space(0).size(), 0);
  for (Index z : Z) in_z.at(z) = 1;
  const auto& rows = nds.trajectories(0).rows;

  std::vector<std::vector<PointSet>> out;
  std::vector<PointSet> current{all_points(nds.space(0).size())};
  for (int j = 0; j < max_length; ++j) {
    const auto& stage = nds.space(static_cast<std::size_t>(j));
    const auto centers = greedy_open_net(stage, all_points(stage.size()), eps);
    // balls containing each stage point
    std::vector<std::vector<std::size_t>> ball_of(stage.size());
    for (std::size_t b = 0; b < centers.size(); ++b)
      for (Index y : ball_members(stage, centers[b], eps, false)) ball_of[y].push_back(b);
    const auto& row = rows[static_cast<std::size_t>(j)];
    std::set<PointSet> next;
    for (const auto& cyl : current) {
      std::vector<PointSet> children(centers.size());
      for (Index x : cyl)
        for (std::size_t b : ball_of[row[x]]) children[b].push_back(x);
      for (auto& c : children) {
        if (std::none_of(c.begin(), c.end(), [&](Index x) { return in_z[x] != 0; })) continue;
        next.insert(std::move(c));
      }
    }
    current.assign(next.begin(), next.end());
    out.push_back(current);
  }
  return out;
}

CoverValue cover_value(const Nds& nds, const Potential& f, PointView Zin, double eps, int n, CoverVariant variant,
                       const SolveMode& mode) {
  const PointSet Z = normalized(PointSet(Zin.begin(), Zin.end()));
  CoverValue out;
  out.certified = mode.exact();
  if (Z.empty()) return out;
  f.check_compatible(nds);
  const auto cyl = ball_cover_cylinders(nds, Z, eps, n).back();
  const auto sums = birkhoff_sums(nds, f, 0, n);
  std::vector<long> pos(nds.space(0).size(), -1);
  for (std::size_t i = 0; i < Z.size(); ++i) pos[Z[i]] = static_cast<long>(i);
  CoverProblem problem;
  problem.elements = Z.size();
  for (const auto& c : cyl) {
    PointSet hit;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Index x : c) {
      if (pos[x] >= 0) hit.push_back(static_cast<Index>(pos[x]));
      lo = std::min(lo, sums[x]);
      hi = std::max(hi, sums[x]);
    }
    problem.sets.push_back(std::move(hit));
    problem.weights.push_back(std::exp(variant == CoverVariant::inf_S ? lo : hi));
  }
  const auto sel = min_weight_cover(problem, mode);
  out.value = sel.objective;
  out.certified = sel.certified;
  return out;
}

PressureEstimate cover_pressure(const Nds& nds, const Potential& f, PointView Z, const Schedule& schedule,
                                CoverVariant variant) {
  schedule.validate(nds);
  std::vector<Cell> cells;
  for (double eps : schedule.eps_list)
    for (int n : schedule.n_list) cells.push_back({n, eps, 0.0, 0.0, false});
  detail::parallel_for(cells.size(), schedule.threads, [&](std::size_t i) {
    auto& c = cells[i];
    const auto v = cover_value(nds, f, Z, c.eps, c.n, variant, schedule.mode);
    c.value = v.value;
    c.log_value = log_per_step(v.value, c.n);
    c.certified = v.certified;
  });
  return make_estimate(variant == CoverVariant::inf_S ? "cover:inf_S" : "cover:sup_S", std::move(cells), schedule,
                       variant == CoverVariant::inf_S);
}

}  // namespace ndsp
