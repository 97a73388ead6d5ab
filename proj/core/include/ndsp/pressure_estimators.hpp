#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndsp/nds.hpp"
#include "ndsp/potential.hpp"
#include "ndsp/solvers.hpp"

namespace ndsp {

/// The schedule does not fit the system (depth past the horizon, bad radii).
class ScheduleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Schedule {
  std::vector<int> n_list;       // ascending depths
  std::vector<double> eps_list;  // strictly descending radii
  double tail_window = 0.5;      // fraction of n_list used for the lim proxies
  SolveMode mode;
  std::size_t threads = 1;
  double jump_tolerance = 1e-3;

  /// Throws ScheduleError. With a system, also checks max(n_list) <= H + 1.
  void validate() const;
  void validate(const Nds& nds) const;
  /// Last ceil(tail_window * |n_list|) depths (at least one).
  std::vector<int> tail() const;
  int tail_start() const { return tail().front(); }
  int max_n() const { return n_list.back(); }
  double smallest_eps() const { return eps_list.back(); }
};

enum class CapacityKind { span_lower, span_upper, sep_lower, sep_upper };

std::string to_string(CapacityKind kind);
std::optional<CapacityKind> capacity_kind_from(const std::string& name);

/// One (n, eps) entry. For capacity kinds log_value = (1/n) log of the
/// partition function; measure-type estimates store s* with n = N.
struct Cell {
  int n = 0;
  double eps = 0.0;
  double log_value = 0.0;
  double value = 0.0;  // raw partition function or functional value at s*
  bool certified = false;
};

struct PressureEstimate {
  std::string kind;
  double lower = std::numeric_limits<double>::quiet_NaN();  // liminf proxy
  double upper = std::numeric_limits<double>::quiet_NaN();  // limsup proxy
  /// The proxy this kind stands for (lower for *_lower kinds, else upper).
  double value = std::numeric_limits<double>::quiet_NaN();
  std::vector<Cell> cells;  // eps-major in schedule order
  bool epsilon_monotone_ok = true;
  std::size_t certified_cells = 0;
  /// Least-squares slope of log Z_n over the tail window at the smallest eps.
  /// Diagnostic only; NaN when fewer than two finite points.
  double growth_rate = std::numeric_limits<double>::quiet_NaN();
  /// Pooled-partition values are upper bounds on the true infimum.
  bool upper_bound_only = false;
  /// Alternative characterization where one exists (packing inf-sup).
  double alternative = std::numeric_limits<double>::quiet_NaN();

  const Cell* find(int n, double eps) const;
  bool certified() const { return certified_cells == cells.size(); }
};

/// Q_n or P_n for every (n, eps) of the schedule, with certification flags.
std::vector<Cell> partition_cells(const Nds& nds, const Potential& f, PointView Z, bool separated,
                                  const Schedule& schedule);

PressureEstimate capacity_pressure(const Nds& nds, const Potential& f, PointView Z, CapacityKind kind,
                                   const Schedule& schedule);

/// All four capacity kinds from one pass over spanning and separated cells.
struct CapacitySet {
  PressureEstimate span_lower, span_upper, sep_lower, sep_upper;
};
CapacitySet capacity_pressures(const Nds& nds, const Potential& f, PointView Z, const Schedule& schedule);

/// capacity_pressure with f = 0.
PressureEstimate entropy(const Nds& nds, PointView Z, const Schedule& schedule, CapacityKind kind);

struct CaratheodoryCheck {
  double lambda_span = 0.0;  // inf over spanning F of sum exp(-ns + S_n f)
  double lambda_sep = 0.0;   // sup over separated E of the same sum
  double residual_span = 0.0;  // |lambda_span - exp(-ns) Q_n|
  double residual_sep = 0.0;   // |lambda_sep - exp(-ns) P_n|
  bool certified = false;
};

/// Solves the s-shifted problems directly and compares with exp(-ns) Q_n, P_n.
CaratheodoryCheck caratheodory_cross_check(const Nds& nds, const Potential& f, PointView Z, double s, int n,
                                           double eps, const SolveMode& mode);

/// Cylinders X_0[U] for strings U of the ball covers B(eps) (open balls of
/// radius eps at greedy open-net centers of each stage). result[l-1] holds the
/// distinct member sets for length l = 1..max_length that meet Z.
std::vector<std::vector<PointSet>> ball_cover_cylinders(const Nds& nds, PointView Z, double eps, int max_length);

enum class CoverVariant { inf_S, sup_S };

/// Minimum over subfamilies of length-n cylinders covering Z of
/// sum exp(inf or sup of S_n f over the cylinder).
struct CoverValue {
  double value = 0.0;
  bool certified = false;
};
CoverValue cover_value(const Nds& nds, const Potential& f, PointView Z, double eps, int n, CoverVariant variant,
                       const SolveMode& mode);

/// Per-cell (1/n) log cover_value with eps as the cover radius.
PressureEstimate cover_pressure(const Nds& nds, const Potential& f, PointView Z, const Schedule& schedule,
                                CoverVariant variant);

namespace detail {
/// Fills proxies, monotonicity, certification and the slope diagnostic.
void summarize(PressureEstimate& est, const Schedule& schedule, bool lower_kind, double monotone_slack);
double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys);
}  // namespace detail

}  // namespace ndsp
