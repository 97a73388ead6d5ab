#include "ndsp/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ndsp {

Potential::Potential(std::string label, std::vector<std::vector<double>> values)
    : label_(std::move(label)), values_(std::move(values)) {
  for (const auto& level : values_)
    for (double v : level)
      if (!std::isfinite(v)) throw std::invalid_argument("potential values must be finite");
}

Potential Potential::constant(const Nds& nds, double a) {
  std::vector<std::vector<double>> v;
  for (std::size_t k = 0; k <= nds.horizon(); ++k) v.emplace_back(nds.space(k).size(), a);
  return Potential("const(" + std::to_string(a) + ")", std::move(v));
}

Potential Potential::level_constants(const Nds& nds, const std::vector<double>& per_level) {
  if (per_level.size() < nds.horizon() + 1)
    throw std::invalid_argument("one constant per level is required");
  std::vector<std::vector<double>> v;
  for (std::size_t k = 0; k <= nds.horizon(); ++k)
    v.emplace_back(nds.space(k).size(), per_level[k]);
  return Potential("levels", std::move(v));
}

Potential Potential::with_label(std::string label) const {
  Potential p = *this;
  p.label_ = std::move(label);
  return p;
}

void Potential::check_compatible(const Nds& nds) const {
  if (values_.size() < nds.horizon() + 1)
    throw std::invalid_argument("potential '" + label_ + "' does not cover every level");
  for (std::size_t k = 0; k <= nds.horizon(); ++k)
    if (values_[k].size() != nds.space(k).size())
      throw std::invalid_argument("potential '" + label_ + "' has wrong length at level " +
                                  std::to_string(k));
}

namespace {

template <class Op>
Potential combine(const Potential& a, const Potential& b, const std::string& label, Op op) {
  const std::size_t levels = std::min(a.levels(), b.levels());
  std::vector<std::vector<double>> v(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    const auto& x = a.values(k);
    const auto& y = b.values(k);
    if (x.size() != y.size()) throw std::invalid_argument("potential shapes differ");
    v[k].resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v[k][i] = op(x[i], y[i]);
  }
  return Potential(label, std::move(v));
}

template <class Op>
Potential map_values(const Potential& a, const std::string& label, Op op) {
  std::vector<std::vector<double>> v(a.levels());
  for (std::size_t k = 0; k < a.levels(); ++k) {
    v[k] = a.values(k);
    for (auto& x : v[k]) x = op(x);
  }
  return Potential(label, std::move(v));
}

}  // namespace

Potential Potential::operator+(const Potential& other) const {
  return combine(*this, other, label_ + "+" + other.label_, std::plus<>{});
}

Potential Potential::operator-(const Potential& other) const {
  return combine(*this, other, label_ + "-" + other.label_, std::minus<>{});
}

Potential Potential::plus_constant(double a) const {
  return map_values(*this, label_ + "+" + std::to_string(a), [a](double x) { return x + a; });
}

Potential Potential::scaled(double c) const {
  return map_values(*this, std::to_string(c) + "*" + label_, [c](double x) { return c * x; });
}

Potential Potential::abs() const {
  return map_values(*this, "|" + label_ + "|", [](double x) { return std::abs(x); });
}

bool Potential::dominated_by(const Potential& other) const {
  const std::size_t levels = std::min(values_.size(), other.levels());
  for (std::size_t k = 0; k < levels; ++k) {
    const auto& y = other.values(k);
    for (std::size_t i = 0; i < values_[k].size() && i < y.size(); ++i)
      if (values_[k][i] > y[i]) return false;
  }
  return true;
}

double birkhoff_sum(const Nds& nds, const Potential& f, std::size_t k, int n, Index x) {
  if (n == 0) return 0.0;
  nds.check_depth(k, n);
  const auto& rows = nds.trajectories(k).rows;
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += f.at(k + static_cast<std::size_t>(j), rows[static_cast<std::size_t>(j)][x]);
  return s;
}

std::vector<double> birkhoff_sums(const Nds& nds, const Potential& f, std::size_t k, int n) {
  std::vector<double> out(nds.space(k).size(), 0.0);
  if (n == 0) return out;
  nds.check_depth(k, n);
  const auto& rows = nds.trajectories(k).rows;
  for (int j = 0; j < n; ++j) {
    const auto& row = rows[static_cast<std::size_t>(j)];
    const auto& fv = f.values(k + static_cast<std::size_t>(j));
    for (std::size_t x = 0; x < out.size(); ++x) out[x] += fv[row[x]];
  }
  return out;
}

std::vector<std::vector<double>> birkhoff_table(const Nds& nds, const Potential& f,
                                                std::size_t k) {
  const auto& rows = nds.trajectories(k).rows;
  std::vector<std::vector<double>> table;
  table.emplace_back(nds.space(k).size(), 0.0);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    std::vector<double> next = table.back();
    const auto& fv = f.values(k + j);
    for (std::size_t x = 0; x < next.size(); ++x) next[x] += fv[rows[j][x]];
    table.push_back(std::move(next));
  }
  return table;
}

double sup_norm_levels(const Potential& f, std::size_t first, std::size_t last) {
  double m = 0.0;
  for (std::size_t k = first; k < last && k < f.levels(); ++k)
    for (double v : f.values(k)) m = std::max(m, std::abs(v));
  return m;
}

double sup_norm(const Potential& f) { return sup_norm_levels(f, 0, f.levels()); }

Potential power_potential(const Nds& nds, const Potential& f, int m) {
  if (m < 1) throw std::invalid_argument("power must be at least 1");
  const std::size_t levels = nds.horizon() / static_cast<std::size_t>(m) + 1;
  std::vector<std::vector<double>> v;
  for (std::size_t k = 0; k < levels; ++k) {
    const std::size_t src = k * static_cast<std::size_t>(m);
    // the last level can have fewer than m source levels left
    const int depth = std::min<int>(m, nds.max_depth(src));
    v.push_back(birkhoff_sums(nds, f, src, depth));
  }
  return Potential(f.label() + "^[" + std::to_string(m) + "]", std::move(v));
}

Potential product_potential(const Potential& f, const Potential& g) {
  const std::size_t levels = std::min(f.levels(), g.levels());
  std::vector<std::vector<double>> v(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    const auto& a = f.values(k);
    const auto& b = g.values(k);
    v[k].resize(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) v[k][i * b.size() + j] = a[i] + b[j];
  }
  return Potential(f.label() + "(+)" + g.label(), std::move(v));
}

Potential pullback(const std::vector<std::vector<Index>>& pi, const Potential& g) {
  if (pi.size() < g.levels()) throw std::invalid_argument("conjugacy does not reach every level");
  std::vector<std::vector<double>> v(g.levels());
  for (std::size_t k = 0; k < g.levels(); ++k) {
    const auto& gv = g.values(k);
    if (pi[k].size() != gv.size()) throw std::invalid_argument("conjugacy level size mismatch");
    v[k].resize(gv.size());
    for (std::size_t x = 0; x < gv.size(); ++x) v[k][x] = gv[pi[k][x]];
  }
  return Potential(g.label(), std::move(v));
}

namespace {

template <class Fn>
Potential from_coordinates(const Nds& nds, const std::string& label, Fn fn) {
  std::vector<std::vector<double>> v;
  for (std::size_t k = 0; k <= nds.horizon(); ++k) {
    const auto& space = nds.space(k);
    if (!space.has_coordinates())
      throw std::invalid_argument("level " + std::to_string(k) + " carries no coordinates");
    std::vector<double> level(space.size());
    for (std::size_t x = 0; x < level.size(); ++x) level[x] = fn(space.coordinates()[x]);
    v.push_back(std::move(level));
  }
  return Potential(label, std::move(v));
}

}  // namespace

Potential first_coordinate_weight(const Nds& nds, double c) {
  return from_coordinates(nds, "first(" + std::to_string(c) + ")",
                          [c](double coord) { return c * coord; });
}

Potential cosine_of_position(const Nds& nds, double amplitude, double offset) {
  return from_coordinates(nds, "cos(" + std::to_string(amplitude) + ")", [=](double coord) {
    return amplitude * std::cos(2.0 * std::numbers::pi * coord) + offset;
  });
}

EquicontinuityTable equicontinuity_modulus(const Nds& nds, const Potential& f,
                                           const std::vector<double>& delta_grid) {
  for (std::size_t i = 0; i < delta_grid.size(); ++i) {
    if (!(delta_grid[i] > 0.0)) throw std::invalid_argument("delta grid must be positive");
    if (i > 0 && !(delta_grid[i] > delta_grid[i - 1]))
      throw std::invalid_argument("delta grid must be ascending");
  }
  f.check_compatible(nds);
  // best[i]: largest variation among pairs whose distance lies in
  // [grid[i-1], grid[i]); a prefix max then gives omega at every grid point.
  std::vector<double> best(delta_grid.size(), 0.0);
  double zero_plus = 0.0;
  for (std::size_t k = 0; k <= nds.horizon(); ++k) {
    const auto& space = nds.space(k);
    const auto& fv = f.values(k);
    for (Index x = 0; x < space.size(); ++x)
      for (Index y = x + 1; y < space.size(); ++y) {
        const double d = space.dist(x, y);
        const double var = std::abs(fv[x] - fv[y]);
        if (d <= 0.0) zero_plus = std::max(zero_plus, var);
        auto it = std::upper_bound(delta_grid.begin(), delta_grid.end(), d);
        if (it != delta_grid.end()) {
          auto& slot = best[static_cast<std::size_t>(it - delta_grid.begin())];
          slot = std::max(slot, var);
        }
      }
  }
  EquicontinuityTable table;
  double running = 0.0;
  for (std::size_t i = 0; i < delta_grid.size(); ++i) {
    running = std::max(running, best[i]);
    table.rows.emplace_back(delta_grid[i], running);
  }
  table.omega_zero_plus = zero_plus;
  return table;
}

double modulus_at(const Nds& nds, const Potential& f, double delta) {
  return equicontinuity_modulus(nds, f, {delta}).rows.front().second;
}

}  // namespace ndsp
