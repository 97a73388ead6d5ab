#include "ndsp/model_zoo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ndsp {

int alphabet_at(const std::vector<int>& sizes, std::size_t j) {
  if (sizes.empty()) throw std::invalid_argument("alphabet size list is empty");
  return sizes[j % sizes.size()];
}

ZooSystem make_symbolic(const std::vector<int>& alphabet_sizes, int L) {
  if (L < 1) throw std::invalid_argument("word length must be at least 1");
  for (int a : alphabet_sizes)
    if (a < 1) throw std::invalid_argument("alphabet sizes must be positive");

  std::vector<SpacePtr> spaces;
  std::vector<std::vector<Index>> maps;
  for (int k = 0; k < L; ++k) {
    const int len = L - k;
    // strides[j] = product of radices after position j; prefix of length j+1 is x / strides[j]
    std::vector<std::uint64_t> strides(static_cast<std::size_t>(len), 1);
    for (int j = len - 2; j >= 0; --j)
      strides[static_cast<std::size_t>(j)] =
          strides[static_cast<std::size_t>(j + 1)] *
          static_cast<std::uint64_t>(alphabet_at(alphabet_sizes, static_cast<std::size_t>(k + j + 1)));
    const std::uint64_t count =
        strides[0] * static_cast<std::uint64_t>(alphabet_at(alphabet_sizes, static_cast<std::size_t>(k)));
    if (count > std::numeric_limits<Index>::max()) throw std::invalid_argument("word space too large");

    auto fn = [strides](Index a, Index b) {
      if (a == b) return 0.0;
      int j = 0;
      while (a / strides[static_cast<std::size_t>(j)] == b / strides[static_cast<std::size_t>(j)]) ++j;
      return std::ldexp(1.0, -j);
    };
    std::vector<double> first(count);
    for (std::uint64_t x = 0; x < count; ++x) first[x] = static_cast<double>(x / strides[0]);
    spaces.push_back(std::make_shared<MetricSpace>(
        MetricSpace::from_function(count, fn, count > 1 ? 1.0 : 0.0).with_coordinates(std::move(first))));
    if (k + 1 < L) {
      std::vector<Index> m(count);
      for (std::uint64_t x = 0; x < count; ++x) m[x] = static_cast<Index>(x % strides[0]);
      maps.push_back(std::move(m));
    }
  }

  std::string label = "symbolic[";
  for (std::size_t i = 0; i < alphabet_sizes.size(); ++i)
    label += (i ? "," : "") + std::to_string(alphabet_sizes[i]);
  label += "]L" + std::to_string(L);

  OracleValues oracle;
  oracle.validity = "exact at scheduled eps";
  double h = 0.0;
  double p = 0.0;
  for (int j = 0; j < L; ++j) {
    const int a = alphabet_at(alphabet_sizes, static_cast<std::size_t>(j));
    h += std::log(static_cast<double>(a));
    double z = 0.0;
    for (int s = 0; s < a; ++s) z += std::exp(static_cast<double>(s));
    p += std::log(z);
  }
  oracle.entropy_reference = h / L;
  oracle.pressure_reference["first_symbol"] = p / L;
  return {Nds(label, std::move(spaces), std::move(maps)), oracle};
}

double symbolic_count(const std::vector<int>& alphabet_sizes, int n) {
  double c = 1.0;
  for (int j = 0; j < n; ++j) c *= alphabet_at(alphabet_sizes, static_cast<std::size_t>(j));
  return c;
}

double symbolic_partition(const std::vector<int>& alphabet_sizes, int n,
                          const std::function<double(std::size_t, int)>& weight) {
  double z = 1.0;
  for (int j = 0; j < n; ++j) {
    double level = 0.0;
    for (int a = 0; a < alphabet_at(alphabet_sizes, static_cast<std::size_t>(j)); ++a)
      level += std::exp(weight(static_cast<std::size_t>(j), a));
    z *= level;
  }
  return z;
}

namespace {

SpacePtr circle_space(std::size_t grid) {
  const double g = static_cast<double>(grid);
  auto fn = [grid, g](Index a, Index b) {
    const std::size_t d = a > b ? a - b : b - a;
    return static_cast<double>(std::min(d, grid - d)) / g;
  };
  std::vector<double> coords(grid);
  for (std::size_t i = 0; i < grid; ++i) coords[i] = static_cast<double>(i) / g;
  return std::make_shared<MetricSpace>(
      MetricSpace::from_function(grid, fn, static_cast<double>(grid / 2) / g).with_coordinates(coords));
}

SpacePtr interval_space(std::size_t grid) {
  const double g = static_cast<double>(grid - 1);
  auto fn = [g](Index a, Index b) { return std::abs(static_cast<double>(a) - static_cast<double>(b)) / g; };
  std::vector<double> coords(grid);
  for (std::size_t i = 0; i < grid; ++i) coords[i] = static_cast<double>(i) / g;
  return std::make_shared<MetricSpace>(MetricSpace::from_function(grid, fn, 1.0).with_coordinates(coords));
}

}  // namespace

ZooSystem make_circle_expanding(const std::vector<int>& multipliers, std::size_t grid,
                                std::size_t horizon) {
  if (multipliers.empty()) throw std::invalid_argument("multiplier list is empty");
  for (int m : multipliers)
    if (m < 1) throw std::invalid_argument("multipliers must be positive integers");
  if (grid < 2) throw std::invalid_argument("grid needs at least two points");
  const auto space = circle_space(grid);
  std::vector<SpacePtr> spaces(horizon + 1, space);
  std::vector<std::vector<Index>> maps;
  double ref = 0.0;
  for (std::size_t k = 0; k < horizon; ++k) {
    const auto m = static_cast<std::uint64_t>(multipliers[k % multipliers.size()]);
    std::vector<Index> map(grid);
    for (std::uint64_t i = 0; i < grid; ++i) map[i] = static_cast<Index>(m * i % grid);
    maps.push_back(std::move(map));
    ref += std::log(static_cast<double>(m));
  }
  std::string label = "circle[";
  for (std::size_t i = 0; i < multipliers.size(); ++i)
    label += (i ? "," : "") + std::to_string(multipliers[i]);
  label += "]G" + std::to_string(grid);
  OracleValues oracle;
  oracle.validity = "analytic limit reference";
  oracle.entropy_reference = horizon ? ref / static_cast<double>(horizon) : 0.0;
  return {Nds(label, std::move(spaces), std::move(maps)), oracle};
}

ZooSystem make_tent_sequence(const std::vector<double>& slopes, std::size_t grid,
                             std::size_t horizon) {
  if (slopes.empty()) throw std::invalid_argument("slope list is empty");
  for (double s : slopes)
    if (!(s >= 1.0 && s <= 2.0)) throw std::invalid_argument("tent slopes must lie in [1, 2]");
  if (grid < 2) throw std::invalid_argument("grid needs at least two points");
  const auto space = interval_space(grid);
  const double g = static_cast<double>(grid - 1);
  std::vector<SpacePtr> spaces(horizon + 1, space);
  std::vector<std::vector<Index>> maps;
  double ref = 0.0;
  for (std::size_t k = 0; k < horizon; ++k) {
    const double s = slopes[k % slopes.size()];
    std::vector<Index> map(grid);
    for (std::size_t i = 0; i < grid; ++i) {
      const double x = static_cast<double>(i) / g;
      const double y = s * std::min(x, 1.0 - x);
      // nearbyint honours the default rounding mode: ties go to even
      map[i] = static_cast<Index>(std::clamp(std::nearbyint(y * g), 0.0, g));
    }
    maps.push_back(std::move(map));
    ref += std::log(s);
  }
  std::string label = "tent[";
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    std::ostringstream os;
    os << slopes[i];
    label += (i ? "," : "") + os.str();
  }
  label += "]G" + std::to_string(grid);
  OracleValues oracle;
  oracle.validity = "analytic limit reference";
  oracle.entropy_reference = horizon ? ref / static_cast<double>(horizon) : 0.0;
  return {Nds(label, std::move(spaces), std::move(maps)), oracle};
}

ConjugacyData make_relabel_conjugacy(const Nds& nds, std::uint64_t seed) {
  ConjugacyData c;
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k <= nds.horizon(); ++k) {
    auto p = all_points(nds.space(k).size());
    if (seed != 0) std::shuffle(p.begin(), p.end(), rng);
    c.pi.push_back(std::move(p));
  }
  return c;
}

Nds make_random_system(std::uint64_t seed, std::size_t levels, std::size_t max_points) {
  if (levels == 0 || max_points == 0) throw std::invalid_argument("random system needs points");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> count(1, max_points);
  std::uniform_int_distribution<int> coord(0, 16);
  std::vector<SpacePtr> spaces;
  for (std::size_t k = 0; k < levels; ++k) {
    const std::size_t n = count(rng);
    std::vector<std::pair<int, int>> pts;
    while (pts.size() < n) {
      std::pair<int, int> p{coord(rng), coord(rng)};
      if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
    std::vector<double> t(n * n);
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = pts[i].first / 16.0;
      for (std::size_t j = 0; j < n; ++j)
        t[i * n + j] = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second) / 16.0;
    }
    spaces.push_back(std::make_shared<MetricSpace>(MetricSpace::from_table(n, t).with_coordinates(xs)));
  }
  std::vector<std::vector<Index>> maps;
  for (std::size_t k = 0; k + 1 < levels; ++k) {
    std::uniform_int_distribution<Index> target(0, static_cast<Index>(spaces[k + 1]->size() - 1));
    std::vector<Index> m(spaces[k]->size());
    for (auto& v : m) v = target(rng);
    maps.push_back(std::move(m));
  }
  return Nds("random#" + std::to_string(seed), std::move(spaces), std::move(maps));
}

Nds make_one_point(std::size_t horizon) {
  auto s = std::make_shared<MetricSpace>(MetricSpace::from_table(1, {0.0}).with_coordinates({0.0}));
  return Nds("point", std::vector<SpacePtr>(horizon + 1, s),
             std::vector<std::vector<Index>>(horizon, std::vector<Index>{0}));
}

Nds make_identity_system(std::size_t points, std::size_t horizon) {
  std::vector<double> t(points * points, 1.0);
  std::vector<double> coords(points);
  for (std::size_t i = 0; i < points; ++i) {
    t[i * points + i] = 0.0;
    coords[i] = static_cast<double>(i);
  }
  auto s = std::make_shared<MetricSpace>(MetricSpace::from_table(points, t).with_coordinates(coords));
  return Nds("identity" + std::to_string(points), std::vector<SpacePtr>(horizon + 1, s),
             std::vector<std::vector<Index>>(horizon, all_points(points)));
}

Nds disjoint_union(const Nds& a, const Nds& b) {
  const std::size_t levels = std::min(a.horizon(), b.horizon()) + 1;
  std::vector<SpacePtr> spaces;
  std::vector<std::vector<Index>> maps;
  for (std::size_t k = 0; k < levels; ++k) {
    SpacePtr sa = a.space_ptr(k);
    SpacePtr sb = b.space_ptr(k);
    const auto na = static_cast<Index>(sa->size());
    auto fn = [sa, sb, na](Index p, Index q) {
      const bool pa = p < na;
      const bool qa = q < na;
      if (pa && qa) return sa->dist(p, q);
      if (!pa && !qa) return sb->dist(p - na, q - na);
      return 1.0;
    };
    MetricSpace joined = MetricSpace::from_function(
        sa->size() + sb->size(), fn, std::max({1.0, sa->diameter(), sb->diameter()}));
    if (sa->has_coordinates() && sb->has_coordinates()) {
      std::vector<double> c = sa->coordinates();
      c.insert(c.end(), sb->coordinates().begin(), sb->coordinates().end());
      joined = joined.with_coordinates(std::move(c));
    }
    spaces.push_back(std::make_shared<MetricSpace>(std::move(joined)));
    if (k + 1 < levels) {
      const auto na_next = static_cast<Index>(a.space(k + 1).size());
      std::vector<Index> m = a.map(k);
      for (Index y : b.map(k)) m.push_back(y + na_next);
      maps.push_back(std::move(m));
    }
  }
  return Nds(a.label() + "|" + b.label(), std::move(spaces), std::move(maps));
}

Nds make_custom(std::string label, const std::vector<std::vector<double>>& tables,
                const std::vector<std::vector<Index>>& maps) {
  std::vector<SpacePtr> spaces;
  for (const auto& t : tables) {
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(t.size()))));
    if (n * n != t.size()) throw std::invalid_argument("distance table is not square");
    spaces.push_back(std::make_shared<MetricSpace>(MetricSpace::from_table(n, t)));
  }
  return Nds(std::move(label), std::move(spaces), maps);
}

}  // namespace ndsp
