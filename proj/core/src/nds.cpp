#include "ndsp/nds.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ndsp {

struct Nds::Memo {
  std::mutex mutex;
  std::vector<std::shared_ptr<const Trajectories>> trajectories;
  std::map<std::pair<std::uint64_t, bool>, std::unique_ptr<BowenNeighborhoods>> neighborhoods;
};

Nds::Nds(std::string label, std::vector<SpacePtr> spaces, std::vector<std::vector<Index>> maps)
    : label_(std::move(label)), spaces_(std::move(spaces)), maps_(std::move(maps)) {
  if (spaces_.empty()) throw std::invalid_argument("system needs at least one level");
  if (maps_.size() + 1 != spaces_.size())
    throw std::invalid_argument("system needs exactly one map per level below the horizon");
  for (const auto& s : spaces_)
    if (!s) throw std::invalid_argument("null stage space");
  for (std::size_t k = 0; k < maps_.size(); ++k) {
    if (maps_[k].size() != spaces_[k]->size())
      throw std::invalid_argument("map " + std::to_string(k) + " has wrong domain size");
    const auto target = spaces_[k + 1]->size();
    for (Index v : maps_[k])
      if (v >= target)
        throw std::invalid_argument("map " + std::to_string(k) + " leaves the next stage");
  }
  memo_ = std::make_shared<Memo>();
  memo_->trajectories.resize(spaces_.size());
}

Nds Nds::with_label(std::string label) const {
  Nds copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

void Nds::check_depth(std::size_t k, int n) const {
  if (n < 1) throw HorizonError("depth must be at least 1");
  if (k + static_cast<std::size_t>(n) > spaces_.size())
    throw HorizonError("depth " + std::to_string(n) + " from level " + std::to_string(k) +
                       " exceeds horizon " + std::to_string(horizon()));
}

const Trajectories& Nds::trajectories(std::size_t k) const {
  if (k >= spaces_.size()) throw HorizonError("level beyond horizon");
  std::lock_guard lock(memo_->mutex);
  auto& slot = memo_->trajectories[k];
  if (!slot) {
    auto t = std::make_shared<Trajectories>();
    const std::size_t rows = spaces_.size() - k;
    t->rows.reserve(rows);
    std::vector<Index> current(spaces_[k]->size());
    for (Index x = 0; x < current.size(); ++x) current[x] = x;
    t->rows.push_back(current);
    for (std::size_t j = 1; j < rows; ++j) {
      const auto& m = maps_[k + j - 1];
      for (auto& v : current) v = m[v];
      t->rows.push_back(current);
    }
    slot = std::move(t);
  }
  return *slot;
}

std::vector<Index> Nds::compose(std::size_t k, std::size_t j) const {
  if (k + j > horizon()) throw HorizonError("composition exceeds horizon");
  return trajectories(k).rows[j];
}

double Nds::bowen_distance(std::size_t k, int n, Index x, Index y) const {
  check_depth(k, n);
  const auto& rows = trajectories(k).rows;
  double d = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto& r = rows[static_cast<std::size_t>(j)];
    d = std::max(d, spaces_[k + static_cast<std::size_t>(j)]->dist(r[x], r[y]));
  }
  return d;
}

PointSet Nds::bowen_ball_members(const BowenAtom& atom) const {
  check_depth(atom.level, atom.depth);
  const auto& space = *spaces_[atom.level];
  if (atom.center >= space.size()) throw std::out_of_range("atom center out of range");
  PointSet out;
  for (Index y = 0; y < space.size(); ++y) {
    const double d = bowen_distance(atom.level, atom.depth, atom.center, y);
    if (atom.closed ? d <= atom.radius : d < atom.radius) out.push_back(y);
  }
  return out;
}

PointSet Nds::bowen_ball_by_preimages(const BowenAtom& atom) const {
  check_depth(atom.level, atom.depth);
  const auto& rows = trajectories(atom.level).rows;
  const std::size_t n0 = spaces_[atom.level]->size();
  std::vector<char> inside(n0, 1);
  for (int j = 0; j < atom.depth; ++j) {
    const auto& row = rows[static_cast<std::size_t>(j)];
    const auto& stage = *spaces_[atom.level + static_cast<std::size_t>(j)];
    const PointSet ball = ball_members(stage, row[atom.center], atom.radius, atom.closed);
    std::vector<char> in_ball(stage.size(), 0);
    for (Index p : ball) in_ball[p] = 1;
    for (Index x = 0; x < n0; ++x)
      if (!in_ball[row[x]]) inside[x] = 0;
  }
  PointSet out;
  for (Index x = 0; x < n0; ++x)
    if (inside[x]) out.push_back(x);
  return out;
}

const BowenNeighborhoods& Nds::neighborhoods(double radius, bool closed) const {
  const auto key = std::make_pair(std::bit_cast<std::uint64_t>(radius), closed);
  {
    std::lock_guard lock(memo_->mutex);
    auto it = memo_->neighborhoods.find(key);
    if (it != memo_->neighborhoods.end()) return *it->second;
  }
  auto built = std::make_unique<BowenNeighborhoods>(*this, radius, closed);
  std::lock_guard lock(memo_->mutex);
  auto [it, inserted] = memo_->neighborhoods.emplace(key, std::move(built));
  return *it->second;
}

BowenNeighborhoods::BowenNeighborhoods(const Nds& nds, double radius, bool closed)
    : radius_(radius), closed_(closed) {
  const auto& rows = nds.trajectories(0).rows;
  const auto n0 = static_cast<Index>(nds.space(0).size());
  auto within = [&](double d) { return closed ? d <= radius : d < radius; };

  std::vector<PointSet> first(n0);
  const auto& x0 = nds.space(0);
  for (Index x = 0; x < n0; ++x) {
    if (within(0.0)) first[x].push_back(x);
    for (Index y = x + 1; y < n0; ++y)
      if (within(x0.dist(x, y))) {
        first[x].push_back(y);
        first[y].push_back(x);
      }
  }
  for (auto& list : first) std::sort(list.begin(), list.end());
  by_depth_.push_back(std::move(first));

  for (std::size_t j = 1; j < rows.size(); ++j) {
    const auto& row = rows[j];
    const auto& stage = nds.space(j);
    const auto& prev = by_depth_.back();
    std::vector<PointSet> next(n0);
    for (Index x = 0; x < n0; ++x) {
      next[x].reserve(prev[x].size());
      for (Index y : prev[x])
        if (within(stage.dist(row[x], row[y]))) next[x].push_back(y);
    }
    by_depth_.push_back(std::move(next));
  }
}

const std::vector<PointSet>& BowenNeighborhoods::neighbors(int n) const {
  if (n < 1 || n > max_depth()) throw HorizonError("neighborhood depth out of range");
  return by_depth_[static_cast<std::size_t>(n - 1)];
}

// Transformations -------------------------------------------------------------

Nds power_system(const Nds& nds, int m) {
  if (m < 1) throw std::invalid_argument("power must be at least 1");
  if (static_cast<std::size_t>(m) > nds.horizon() + 1)
    throw HorizonError("power longer than the horizon allows for one block");
  const std::size_t levels = nds.horizon() / static_cast<std::size_t>(m) + 1;
  std::vector<SpacePtr> spaces;
  std::vector<std::vector<Index>> maps;
  for (std::size_t k = 0; k < levels; ++k) {
    spaces.push_back(nds.space_ptr(k * static_cast<std::size_t>(m)));
    if (k + 1 < levels) maps.push_back(nds.compose(k * static_cast<std::size_t>(m), m));
  }
  return Nds(nds.label() + "^" + std::to_string(m), std::move(spaces), std::move(maps));
}

Nds product_system(const Nds& a, const Nds& b) {
  const std::size_t levels = std::min(a.horizon(), b.horizon()) + 1;
  std::vector<SpacePtr> spaces;
  std::vector<std::vector<Index>> maps;
  for (std::size_t k = 0; k < levels; ++k) {
    SpacePtr sa = a.space_ptr(k);
    SpacePtr sb = b.space_ptr(k);
    const std::size_t nb = sb->size();
    auto fn = [sa, sb, nb](Index p, Index q) {
      return std::max(sa->dist(static_cast<Index>(p / nb), static_cast<Index>(q / nb)),
                      sb->dist(static_cast<Index>(p % nb), static_cast<Index>(q % nb)));
    };
    spaces.push_back(std::make_shared<MetricSpace>(MetricSpace::from_function(
        sa->size() * nb, fn, std::max(sa->diameter(), sb->diameter()))));
    if (k + 1 < levels) {
      const auto& ma = a.map(k);
      const auto& mb = b.map(k);
      const std::size_t nb_next = b.space(k + 1).size();
      std::vector<Index> m(sa->size() * nb);
      for (Index i = 0; i < sa->size(); ++i)
        for (Index j = 0; j < nb; ++j)
          m[i * nb + j] = static_cast<Index>(ma[i] * nb_next + mb[j]);
      maps.push_back(std::move(m));
    }
  }
  return Nds(a.label() + "x" + b.label(), std::move(spaces), std::move(maps));
}

namespace {

SpacePtr induced_space(const SpacePtr& base, const PointSet& members) {
  const std::size_t n = members.size();
  MetricSpace sub = [&] {
    if (base->has_table() || n <= 256) {
      std::vector<double> t(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t[i * n + j] = base->dist(members[i], members[j]);
      return MetricSpace::from_table(n, std::move(t));
    }
    auto fn = [base, members](Index i, Index j) { return base->dist(members[i], members[j]); };
    return MetricSpace::from_function(n, fn);
  }();
  if (base->has_coordinates()) {
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = base->coordinates()[members[i]];
    sub = sub.with_coordinates(std::move(c));
  }
  return std::make_shared<MetricSpace>(std::move(sub));
}

Index position_of(const PointSet& sorted, Index v) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
  return static_cast<Index>(it - sorted.begin());
}

}  // namespace

Restriction restrict_to_compact(const Nds& nds, PointView K) {
  PointSet level0 = normalized(PointSet(K.begin(), K.end()));
  if (level0.empty()) throw std::invalid_argument("restriction to an empty set");
  if (level0.back() >= nds.space(0).size()) throw std::out_of_range("restriction point out of range");

  std::vector<PointSet> members{std::move(level0)};
  for (std::size_t k = 0; k < nds.horizon(); ++k) {
    PointSet image;
    image.reserve(members.back().size());
    for (Index x : members.back()) image.push_back(nds.map(k)[x]);
    members.push_back(normalized(std::move(image)));
  }

  std::vector<SpacePtr> spaces;
  std::vector<std::vector<Index>> maps;
  for (std::size_t k = 0; k <= nds.horizon(); ++k) {
    spaces.push_back(induced_space(nds.space_ptr(k), members[k]));
    if (k < nds.horizon()) {
      std::vector<Index> m;
      m.reserve(members[k].size());
      for (Index x : members[k]) m.push_back(position_of(members[k + 1], nds.map(k)[x]));
      maps.push_back(std::move(m));
    }
  }
  return {Nds(nds.label() + "|K", std::move(spaces), std::move(maps)), std::move(members)};
}

Nds apply_conjugacy(const Nds& nds, const ConjugacyData& conj) {
  const std::size_t levels = nds.horizon() + 1;
  if (conj.pi.size() != levels) throw std::invalid_argument("conjugacy must cover every level");

  std::vector<std::vector<Index>> inverse(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    const auto& p = conj.pi[k];
    const std::size_t n = nds.space(k).size();
    if (p.size() != n) throw CommutationError("conjugacy has wrong size", k, 0);
    inverse[k].assign(n, static_cast<Index>(n));
    for (Index x = 0; x < n; ++x) {
      if (p[x] >= n || inverse[k][p[x]] != n)
        throw CommutationError("conjugacy is not a bijection", k, x);
      inverse[k][p[x]] = x;
    }
  }

  std::vector<SpacePtr> spaces;
  if (conj.target_spaces) {
    spaces = *conj.target_spaces;
    if (spaces.size() != levels) throw std::invalid_argument("target spaces must cover every level");
    for (std::size_t k = 0; k < levels; ++k)
      if (!spaces[k] || spaces[k]->size() != nds.space(k).size())
        throw CommutationError("target space has wrong size", k, 0);
  } else {
    for (std::size_t k = 0; k < levels; ++k) {
      SpacePtr base = nds.space_ptr(k);
      const auto& inv = inverse[k];
      const std::size_t n = base->size();
      MetricSpace moved = [&] {
        if (base->has_table()) {
          std::vector<double> t(n * n);
          for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) t[p * n + q] = base->dist(inv[p], inv[q]);
          return MetricSpace::from_table(n, std::move(t));
        }
        auto fn = [base, inv](Index p, Index q) { return base->dist(inv[p], inv[q]); };
        return MetricSpace::from_function(n, fn, base->diameter());
      }();
      if (base->has_coordinates()) {
        std::vector<double> c(n);
        for (std::size_t p = 0; p < n; ++p) c[p] = base->coordinates()[inv[p]];
        moved = moved.with_coordinates(std::move(c));
      }
      spaces.push_back(std::make_shared<MetricSpace>(std::move(moved)));
    }
  }

  std::vector<std::vector<Index>> maps(levels - 1);
  for (std::size_t k = 0; k + 1 < levels; ++k) {
    const auto& t = nds.map(k);
    const auto& pk = conj.pi[k];
    const auto& pk1 = conj.pi[k + 1];
    if (conj.target_maps) {
      const auto& r = conj.target_maps->at(k);
      if (r.size() != t.size()) throw CommutationError("target map has wrong size", k, 0);
      for (Index x = 0; x < t.size(); ++x)
        if (r[pk[x]] != pk1[t[x]]) throw CommutationError("conjugacy does not commute", k, x);
      maps[k] = r;
    } else {
      maps[k].resize(t.size());
      for (Index x = 0; x < t.size(); ++x) maps[k][pk[x]] = pk1[t[x]];
    }
  }
  return Nds(nds.label(), std::move(spaces), std::move(maps));
}

Nds bounded_metric_transform(const Nds& nds) {
  std::vector<SpacePtr> spaces;
  for (std::size_t k = 0; k <= nds.horizon(); ++k) {
    SpacePtr base = nds.space_ptr(k);
    const std::size_t n = base->size();
    MetricSpace bounded = [&] {
      if (base->has_table()) {
        std::vector<double> t = base->dense_table();
        for (auto& d : t) d = d / (1.0 + d);
        return MetricSpace::from_table(n, std::move(t));
      }
      auto fn = [base](Index p, Index q) {
        const double d = base->dist(p, q);
        return d / (1.0 + d);
      };
      return MetricSpace::from_function(n, fn, base->diameter() / (1.0 + base->diameter()));
    }();
    if (base->has_coordinates()) bounded = bounded.with_coordinates(base->coordinates());
    spaces.push_back(std::make_shared<MetricSpace>(std::move(bounded)));
  }
  return Nds(nds.label(), std::move(spaces), nds.maps());
}

Nds shifted_system(const Nds& nds, std::size_t k) {
  if (k > nds.horizon()) throw HorizonError("shift beyond horizon");
  std::vector<SpacePtr> spaces(nds.spaces().begin() + static_cast<std::ptrdiff_t>(k),
                               nds.spaces().end());
  std::vector<std::vector<Index>> maps(nds.maps().begin() + static_cast<std::ptrdiff_t>(k),
                                       nds.maps().end());
  return Nds(nds.label() + ">>" + std::to_string(k), std::move(spaces), std::move(maps));
}

}  // namespace ndsp
