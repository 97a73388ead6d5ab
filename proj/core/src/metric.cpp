#include "ndsp/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/dynamic_bitset.hpp>

namespace ndsp {

PointSet normalized(PointSet points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

PointSet all_points(std::size_t count) {
  PointSet out(count);
  std::iota(out.begin(), out.end(), Index{0});
  return out;
}

MetricSpace MetricSpace::from_table(std::size_t n, std::vector<double> table) {
  if (n == 0) throw std::invalid_argument("metric space must have at least one point");
  if (table.size() != n * n) throw std::invalid_argument("distance table must be n*n");
  MetricSpace s;
  s.size_ = n;
  s.table_ = std::move(table);
  s.diameter_ = *std::max_element(s.table_.begin(), s.table_.end());
  return s;
}

MetricSpace MetricSpace::from_function(std::size_t n, DistanceFn fn,
                                       std::optional<double> diameter) {
  if (n == 0) throw std::invalid_argument("metric space must have at least one point");
  if (!fn) throw std::invalid_argument("distance function is empty");
  MetricSpace s;
  s.size_ = n;
  s.fn_ = std::move(fn);
  if (diameter) {
    s.diameter_ = *diameter;
  } else {
    double d = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) d = std::max(d, s.fn_(i, j));
    s.diameter_ = d;
  }
  return s;
}

MetricSpace MetricSpace::with_coordinates(std::vector<double> coords) const {
  if (coords.size() != size_) throw std::invalid_argument("coordinate count mismatch");
  MetricSpace s = *this;
  s.coords_ = std::move(coords);
  return s;
}

double MetricSpace::min_positive_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < size_; ++i)
    for (Index j = i + 1; j < size_; ++j) {
      const double d = dist(i, j);
      if (d > 0.0) best = std::min(best, d);
    }
  return best;
}

std::vector<double> MetricSpace::dense_table() const {
  if (!table_.empty()) return table_;
  std::vector<double> t(size_ * size_);
  for (Index i = 0; i < size_; ++i)
    for (Index j = 0; j < size_; ++j) t[static_cast<std::size_t>(i) * size_ + j] = fn_(i, j);
  return t;
}

ValidationReport validate_metric(const MetricSpace& space, std::size_t max_witnesses) {
  ValidationReport report;
  const auto n = static_cast<Index>(space.size());
  auto record = [&](AxiomViolation v) {
    if (report.violations.size() < max_witnesses) report.violations.push_back(v);
  };
  for (Index i = 0; i < n; ++i) {
    const double self = space.dist(i, i);
    if (std::abs(self) > kMetricTolerance) record({Axiom::identity, i, i, 0, std::abs(self)});
    for (Index j = i + 1; j < n; ++j) {
      const double dij = space.dist(i, j);
      const double dji = space.dist(j, i);
      if (std::abs(dij - dji) > kMetricTolerance)
        record({Axiom::symmetry, i, j, 0, std::abs(dij - dji)});
      if (!(dij > 0.0)) record({Axiom::positivity, i, j, 0, -dij});
    }
  }
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) {
      const double dik = space.dist(i, k);
      for (Index j = 0; j < n; ++j) {
        const double excess = space.dist(i, j) - (dik + space.dist(k, j));
        if (excess > kMetricTolerance) record({Axiom::triangle, i, k, j, excess});
      }
    }
  return report;
}

PointSet ball_members(const MetricSpace& space, Index center, double radius, bool closed) {
  if (center >= space.size()) throw std::out_of_range("ball center out of range");
  if (radius < 0.0) throw std::invalid_argument("negative radius");
  PointSet out;
  for (Index j = 0; j < space.size(); ++j) {
    const double d = space.dist(center, j);
    if (closed ? d <= radius : d < radius) out.push_back(j);
  }
  return out;
}

std::vector<std::size_t> five_r_disjoint_subfamily(const MetricSpace& space,
                                                   const BallFamily& balls) {
  std::vector<std::size_t> order(balls.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (balls[a].radius != balls[b].radius) return balls[a].radius > balls[b].radius;
    if (balls[a].center != balls[b].center) return balls[a].center < balls[b].center;
    return balls[a].closed && !balls[b].closed;
  });

  boost::dynamic_bitset<> taken(space.size());
  std::vector<std::size_t> chosen;
  for (std::size_t idx : order) {
    const Ball& b = balls[idx];
    const PointSet members = ball_members(space, b.center, b.radius, b.closed);
    const bool meets = std::any_of(members.begin(), members.end(),
                                   [&](Index p) { return taken.test(p); });
    if (meets) continue;
    for (Index p : members) taken.set(p);
    chosen.push_back(idx);
  }
  return chosen;
}

namespace {

PointSet greedy_net(const MetricSpace& space, PointView subset, double epsilon, bool strict) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  PointSet net;
  for (Index p : subset) {
    const bool covered = std::any_of(net.begin(), net.end(), [&](Index q) {
      const double d = space.dist(p, q);
      return strict ? d < epsilon : d <= epsilon;
    });
    if (!covered) net.push_back(p);
  }
  return net;
}

}  // namespace

PointSet greedy_epsilon_net(const MetricSpace& space, PointView subset, double epsilon) {
  return greedy_net(space, subset, epsilon, false);
}

PointSet greedy_open_net(const MetricSpace& space, PointView subset, double epsilon) {
  return greedy_net(space, subset, epsilon, true);
}

}  // namespace ndsp
