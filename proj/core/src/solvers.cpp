#include "ndsp/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

#include <boost/dynamic_bitset.hpp>

namespace ndsp {

double sorted_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

namespace {

using Mask = std::uint64_t;
using Bits = boost::dynamic_bitset<>;

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_budget(const SolveMode& mode) {
  if (mode.exact_budget == 0 || mode.exact_budget > kMaxExactBudget)
    throw std::invalid_argument("exact budget must lie in 1.." + std::to_string(kMaxExactBudget));
}

void validate_cover(const CoverProblem& p) {
  if (p.sets.size() != p.weights.size())
    throw std::invalid_argument("one weight per candidate set is required");
  std::vector<char> covered(p.elements, 0);
  for (std::size_t c = 0; c < p.sets.size(); ++c) {
    if (!(p.weights[c] >= 0.0) || std::isinf(p.weights[c]))
      throw std::invalid_argument("candidate weights must be finite and nonnegative");
    for (Index u : p.sets[c]) {
      if (u >= p.elements) throw std::out_of_range("candidate set element out of range");
      covered[u] = 1;
    }
  }
  for (std::size_t u = 0; u < p.elements; ++u)
    if (!covered[u])
      throw std::domain_error("element " + std::to_string(u) + " is not coverable");
}

// Greedy cover over local data; returns chosen candidate positions.
std::vector<std::size_t> greedy_cover(std::size_t elements, const std::vector<PointSet>& sets,
                                      const std::vector<double>& weights) {
  std::vector<char> covered(elements, 0);
  std::size_t remaining = elements;
  auto gain = [&](std::size_t c) {
    std::size_t g = 0;
    for (Index u : sets[c]) g += covered[u] ? 0 : 1;
    return g;
  };
  using Entry = std::pair<double, std::size_t>;  // (weight per new element, candidate)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::size_t c = 0; c < sets.size(); ++c)
    if (!sets[c].empty()) heap.emplace(weights[c] / static_cast<double>(sets[c].size()), c);

  std::vector<std::size_t> chosen;
  while (remaining > 0 && !heap.empty()) {
    auto [ratio, c] = heap.top();
    heap.pop();
    const std::size_t g = gain(c);
    if (g == 0) continue;
    const double fresh = weights[c] / static_cast<double>(g);
    if (fresh > ratio) {
      heap.emplace(fresh, c);
      continue;
    }
    chosen.push_back(c);
    for (Index u : sets[c])
      if (!covered[u]) {
        covered[u] = 1;
        --remaining;
      }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<int> greedy_multicover(std::size_t elements, const std::vector<PointSet>& sets,
                                   const std::vector<double>& weights, int q) {
  std::vector<int> deficit(elements, q);
  std::vector<int> units(sets.size(), 0);
  long remaining = static_cast<long>(elements) * q;
  auto gain = [&](std::size_t c) {
    std::size_t g = 0;
    for (Index u : sets[c]) g += deficit[u] > 0 ? 1 : 0;
    return g;
  };
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  const double unit = 1.0 / q;
  for (std::size_t c = 0; c < sets.size(); ++c)
    if (!sets[c].empty()) heap.emplace(unit * weights[c] / static_cast<double>(sets[c].size()), c);

  while (remaining > 0 && !heap.empty()) {
    auto [ratio, c] = heap.top();
    heap.pop();
    if (units[c] >= q) continue;
    const std::size_t g = gain(c);
    if (g == 0) continue;
    const double fresh = unit * weights[c] / static_cast<double>(g);
    if (fresh > ratio) {
      heap.emplace(fresh, c);
      continue;
    }
    ++units[c];
    for (Index u : sets[c])
      if (deficit[u] > 0) {
        --deficit[u];
        --remaining;
      }
    if (units[c] < q) heap.emplace(fresh, c);
  }
  return units;
}

// One connected piece of a reduced cover problem with at most 64 elements.
struct CoverComponent {
  std::vector<std::size_t> candidates;  // original indices
  std::vector<Mask> masks;
  std::vector<double> weights;
  std::size_t elements = 0;
};

std::vector<CoverComponent> reduce_cover(const CoverProblem& p, std::size_t budget) {
  // Identical coverage: keep the cheapest (lowest index on ties).
  std::map<PointSet, std::size_t> unique;
  for (std::size_t c = 0; c < p.sets.size(); ++c) {
    if (p.sets[c].empty()) continue;
    PointSet key = normalized(p.sets[c]);
    auto [it, inserted] = unique.emplace(std::move(key), c);
    if (!inserted && p.weights[c] < p.weights[it->second]) it->second = c;
  }
  std::vector<std::size_t> cands;
  for (const auto& kv : unique) cands.push_back(kv.second);
  std::sort(cands.begin(), cands.end());

  std::vector<std::size_t> parent(p.elements);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t c : cands) {
    const auto& s = p.sets[c];
    for (std::size_t i = 1; i < s.size(); ++i) {
      const auto a = find(s[0]);
      const auto b = find(s[i]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }

  std::map<std::size_t, std::vector<Index>> elems_by_root;
  for (Index u = 0; u < p.elements; ++u) elems_by_root[find(u)].push_back(u);
  std::map<std::size_t, std::vector<std::size_t>> cands_by_root;
  for (std::size_t c : cands) cands_by_root[find(p.sets[c][0])].push_back(c);

  std::vector<CoverComponent> out;
  for (auto& [base, elems] : elems_by_root) {
    const auto& cs = cands_by_root[base];
    const std::size_t E = elems.size();
    const std::size_t C = cs.size();
    std::vector<Bits> cov(C, Bits(E));
    for (std::size_t i = 0; i < C; ++i)
      for (Index u : p.sets[cs[i]]) {
        const auto pos = std::lower_bound(elems.begin(), elems.end(), u) - elems.begin();
        cov[i].set(static_cast<std::size_t>(pos));
      }

    Bits alive_e(E);
    alive_e.set();
    std::vector<char> alive_c(C, 1);
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<Bits> eff(C);
      for (std::size_t i = 0; i < C; ++i)
        if (alive_c[i]) eff[i] = cov[i] & alive_e;
      for (std::size_t i = 0; i < C; ++i) {
        if (!alive_c[i]) continue;
        for (std::size_t j = 0; j < C; ++j) {
          if (i == j || !alive_c[j]) continue;
          if (!eff[i].is_subset_of(eff[j])) continue;
          const double wi = p.weights[cs[i]];
          const double wj = p.weights[cs[j]];
          const bool same = eff[i] == eff[j];
          if ((!same && wj <= wi) || (same && (wj < wi || (wj == wi && j < i)))) {
            alive_c[i] = 0;
            changed = true;
            break;
          }
        }
      }
      // Element u whose candidates all cover v makes v redundant.
      std::vector<Bits> by_elem(E, Bits(C));
      for (std::size_t i = 0; i < C; ++i)
        if (alive_c[i])
          for (std::size_t u = cov[i].find_first(); u != Bits::npos; u = cov[i].find_next(u))
            by_elem[u].set(i);
      for (std::size_t v = 0; v < E; ++v) {
        if (!alive_e.test(v)) continue;
        for (std::size_t u = 0; u < E; ++u) {
          if (u == v || !alive_e.test(u)) continue;
          if (!by_elem[u].is_subset_of(by_elem[v])) continue;
          if (by_elem[u] == by_elem[v] && u > v) continue;
          alive_e.reset(v);
          changed = true;
          break;
        }
      }
    }

    // Reductions can disconnect the component; split again before budgeting.
    std::vector<std::size_t> group(E);
    std::iota(group.begin(), group.end(), std::size_t{0});
    auto root = [&](std::size_t x) {
      while (group[x] != x) x = group[x] = group[group[x]];
      return x;
    };
    std::vector<Bits> eff(C);
    for (std::size_t i = 0; i < C; ++i) {
      if (!alive_c[i]) continue;
      eff[i] = cov[i] & alive_e;
      const std::size_t first = eff[i].find_first();
      for (std::size_t u = eff[i].find_next(first); u != Bits::npos; u = eff[i].find_next(u)) {
        const auto a = root(first);
        const auto b = root(u);
        if (a != b) group[std::max(a, b)] = std::min(a, b);
      }
    }
    std::map<std::size_t, std::vector<std::size_t>> pieces;
    for (std::size_t u = 0; u < E; ++u)
      if (alive_e.test(u)) pieces[root(u)].push_back(u);

    for (const auto& [r, members] : pieces) {
      if (members.size() > budget) throw BudgetExceeded(members.size(), budget);
      std::vector<std::size_t> local(E, 0);
      for (std::size_t t = 0; t < members.size(); ++t) local[members[t]] = t;
      CoverComponent comp;
      comp.elements = members.size();
      for (std::size_t i = 0; i < C; ++i) {
        if (!alive_c[i] || eff[i].none() || root(eff[i].find_first()) != r) continue;
        Mask m = 0;
        for (std::size_t u = eff[i].find_first(); u != Bits::npos; u = eff[i].find_next(u))
          m |= Mask{1} << local[u];
        comp.candidates.push_back(cs[i]);
        comp.masks.push_back(m);
        comp.weights.push_back(p.weights[cs[i]]);
      }
      out.push_back(std::move(comp));
    }
  }
  return out;
}

std::vector<PointSet> masks_to_sets(const std::vector<Mask>& masks) {
  std::vector<PointSet> sets;
  for (Mask m : masks) {
    PointSet s;
    for (Mask r = m; r; r &= r - 1) s.push_back(static_cast<Index>(std::countr_zero(r)));
    sets.push_back(std::move(s));
  }
  return sets;
}

class CoverSearch {
 public:
  explicit CoverSearch(const CoverComponent& c) : c_(c) {
    by_elem_.resize(c.elements);
    for (std::size_t i = 0; i < c.masks.size(); ++i)
      for (Mask r = c.masks[i]; r; r &= r - 1)
        by_elem_[static_cast<std::size_t>(std::countr_zero(r))].push_back(i);
  }

  std::vector<std::size_t> solve() {
    const auto start = greedy_cover(c_.elements, masks_to_sets(c_.masks), c_.weights);
    best_ = start;
    best_cost_ = 0.0;
    for (std::size_t i : start) best_cost_ += c_.weights[i];
    const Mask all = c_.elements == 64 ? ~Mask{0} : (Mask{1} << c_.elements) - 1;
    std::vector<std::size_t> trail;
    dfs(all, 0.0, trail);
    std::sort(best_.begin(), best_.end());
    return best_;
  }

 private:
  double bound(Mask uncovered) const {
    double b = 0.0;
    for (Mask r = uncovered; r; r &= r - 1) {
      const auto u = static_cast<std::size_t>(std::countr_zero(r));
      double m = kInf;
      for (std::size_t i : by_elem_[u])
        m = std::min(m, c_.weights[i] / std::popcount(c_.masks[i] & uncovered));
      b += m;
    }
    return b;
  }

  void dfs(Mask uncovered, double cost, std::vector<std::size_t>& trail) {
    if (uncovered == 0) {
      if (cost < best_cost_) {
        best_cost_ = cost;
        best_ = trail;
      }
      return;
    }
    if (cost + bound(uncovered) >= best_cost_) return;
    std::size_t pick = 0;
    std::size_t fewest = std::numeric_limits<std::size_t>::max();
    for (Mask r = uncovered; r; r &= r - 1) {
      const auto u = static_cast<std::size_t>(std::countr_zero(r));
      if (by_elem_[u].size() < fewest) {
        fewest = by_elem_[u].size();
        pick = u;
      }
    }
    std::vector<std::size_t> order = by_elem_[pick];
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return c_.weights[a] / std::popcount(c_.masks[a] & uncovered) <
             c_.weights[b] / std::popcount(c_.masks[b] & uncovered);
    });
    for (std::size_t i : order) {
      trail.push_back(i);
      dfs(uncovered & ~c_.masks[i], cost + c_.weights[i], trail);
      trail.pop_back();
    }
  }

  const CoverComponent& c_;
  std::vector<std::vector<std::size_t>> by_elem_;
  std::vector<std::size_t> best_;
  double best_cost_ = kInf;
};

class MulticoverSearch {
 public:
  MulticoverSearch(const CoverComponent& c, int q) : c_(c), q_(q) {
    by_elem_.resize(c.elements);
    for (std::size_t i = 0; i < c.masks.size(); ++i)
      for (Mask r = c.masks[i]; r; r &= r - 1)
        by_elem_[static_cast<std::size_t>(std::countr_zero(r))].push_back(i);
  }

  std::vector<int> solve() {
    const auto sets = masks_to_sets(c_.masks);
    best_ = greedy_multicover(c_.elements, sets, c_.weights, q_);
    const auto cover = greedy_cover(c_.elements, sets, c_.weights);
    std::vector<int> as_units(c_.masks.size(), 0);
    for (std::size_t i : cover) as_units[i] = q_;
    if (cost_of(as_units) < cost_of(best_)) best_ = as_units;
    best_cost_ = cost_of(best_);

    units_.assign(c_.masks.size(), 0);
    deficit_.assign(c_.elements, q_);
    dfs(0, 0.0);
    return best_;
  }

 private:
  double cost_of(const std::vector<int>& units) const {
    double s = 0.0;
    for (std::size_t i = 0; i < units.size(); ++i) s += units[i] * c_.weights[i] / q_;
    return s;
  }

  std::size_t gain(std::size_t i) const {
    std::size_t g = 0;
    for (Mask r = c_.masks[i]; r; r &= r - 1)
      g += deficit_[static_cast<std::size_t>(std::countr_zero(r))] > 0 ? 1 : 0;
    return g;
  }

  // Fixes k_i for candidates in index order, largest useful k first.
  void dfs(std::size_t i, double cost) {
    bool done = true;
    double b = 0.0;
    for (std::size_t u = 0; u < c_.elements; ++u) {
      if (deficit_[u] <= 0) continue;
      done = false;
      double m = kInf;
      for (std::size_t c : by_elem_[u])
        if (c >= i) m = std::min(m, c_.weights[c] / q_ / static_cast<double>(gain(c)));
      if (m == kInf) return;
      b += deficit_[u] * m;
    }
    if (done) {
      if (cost < best_cost_) {
        best_cost_ = cost;
        best_ = units_;
      }
      return;
    }
    if (i == c_.masks.size() || cost + b >= best_cost_) return;
    int useful = 0;
    for (Mask r = c_.masks[i]; r; r &= r - 1)
      useful = std::max(useful, deficit_[static_cast<std::size_t>(std::countr_zero(r))]);
    for (int k = std::min(useful, q_); k >= 0; --k) {
      units_[i] = k;
      for (Mask r = c_.masks[i]; r; r &= r - 1) deficit_[static_cast<std::size_t>(std::countr_zero(r))] -= k;
      dfs(i + 1, cost + k * c_.weights[i] / q_);
      for (Mask r = c_.masks[i]; r; r &= r - 1) deficit_[static_cast<std::size_t>(std::countr_zero(r))] += k;
    }
    units_[i] = 0;
  }

  const CoverComponent& c_;
  int q_;
  std::vector<std::vector<std::size_t>> by_elem_;
  std::vector<int> units_;
  std::vector<int> deficit_;
  std::vector<int> best_;
  double best_cost_ = kInf;
};

}  // namespace

namespace {

Selection min_weight_cover_impl(const CoverProblem& problem, const SolveMode& mode) {
  validate_cover(problem);
  Selection out;
  if (mode.exact()) {
    check_budget(mode);
    for (const auto& comp : reduce_cover(problem, mode.exact_budget)) {
      CoverSearch search(comp);
      for (std::size_t i : search.solve()) out.chosen.push_back(comp.candidates[i]);
    }
    out.certified = true;
  } else {
    out.chosen = greedy_cover(problem.elements, problem.sets, problem.weights);
  }
  std::sort(out.chosen.begin(), out.chosen.end());
  std::vector<double> terms;
  for (std::size_t c : out.chosen) terms.push_back(problem.weights[c]);
  out.objective = sorted_sum(std::move(terms));
  return out;
}

}  // namespace

Selection min_weight_cover(const CoverProblem& problem, const SolveMode& mode) {
  try {
    return min_weight_cover_impl(problem, mode);
  } catch (const BudgetExceeded&) {
    if (!mode.exact() || !mode.fallback) throw;
  }
  return min_weight_cover_impl(problem, SolveMode::greedy());
}

namespace {

Multiselection min_weight_multicover_impl(const CoverProblem& problem, int q, const SolveMode& mode) {
  if (q < 1) throw std::invalid_argument("weight denominator must be positive");
  validate_cover(problem);
  Multiselection out;
  out.q = q;
  std::vector<int> units(problem.sets.size(), 0);
  if (mode.exact()) {
    check_budget(mode);
    for (const auto& comp : reduce_cover(problem, mode.exact_budget)) {
      MulticoverSearch search(comp, q);
      const auto local = search.solve();
      for (std::size_t i = 0; i < local.size(); ++i) units[comp.candidates[i]] += local[i];
    }
    out.certified = true;
  } else {
    units = greedy_multicover(problem.elements, problem.sets, problem.weights, q);
    std::vector<int> as_units(problem.sets.size(), 0);
    for (std::size_t c : greedy_cover(problem.elements, problem.sets, problem.weights))
      as_units[c] = q;
    auto cost = [&](const std::vector<int>& u) {
      std::vector<double> t;
      for (std::size_t c = 0; c < u.size(); ++c)
        if (u[c] > 0) t.push_back(u[c] * problem.weights[c] / q);
      return sorted_sum(std::move(t));
    };
    if (cost(as_units) < cost(units)) units = as_units;
  }
  std::vector<double> terms;
  for (std::size_t c = 0; c < units.size(); ++c)
    if (units[c] > 0) {
      out.units.emplace_back(c, units[c]);
      terms.push_back(units[c] * problem.weights[c] / q);
    }
  out.objective = sorted_sum(std::move(terms));
  return out;
}

}  // namespace

Multiselection min_weight_multicover(const CoverProblem& problem, int q, const SolveMode& mode) {
  try {
    return min_weight_multicover_impl(problem, q, mode);
  } catch (const BudgetExceeded&) {
    if (!mode.exact() || !mode.fallback) throw;
  }
  return min_weight_multicover_impl(problem, q, SolveMode::greedy());
}

namespace {

std::vector<std::size_t> greedy_independent(const std::vector<PointSet>& adj,
                                            const std::vector<double>& w) {
  std::vector<std::size_t> order(adj.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  std::vector<char> blocked(adj.size(), 0);
  std::vector<std::size_t> chosen;
  for (std::size_t v : order) {
    if (blocked[v]) continue;
    chosen.push_back(v);
    blocked[v] = 1;
    for (Index u : adj[v]) blocked[u] = 1;
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// Connected components of the subgraph induced by `alive`, ascending.
std::vector<std::vector<std::size_t>> components(const std::vector<PointSet>& adj,
                                                 const std::vector<char>& alive) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < adj.size(); ++s) {
    if (!alive[s] || seen[s]) continue;
    std::vector<std::size_t> comp{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head)
      for (Index u : adj[comp[head]])
        if (alive[u] && !seen[u]) {
          seen[u] = 1;
          comp.push_back(u);
        }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

class IndependentSearch {
 public:
  IndependentSearch(std::vector<Mask> closed, std::vector<double> w)
      : closed_(std::move(closed)), w_(std::move(w)) {
    order_.resize(w_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return w_[a] > w_[b]; });
  }

  Mask solve() {
    // greedy start
    Mask cand = w_.size() == 64 ? ~Mask{0} : (Mask{1} << w_.size()) - 1;
    Mask start = 0;
    for (std::size_t v : order_)
      if (cand & (Mask{1} << v)) {
        start |= Mask{1} << v;
        cand &= ~closed_[v];
      }
    best_ = start;
    best_w_ = weight_of(start);
    const Mask all = w_.size() == 64 ? ~Mask{0} : (Mask{1} << w_.size()) - 1;
    dfs(all, 0, 0.0);
    return best_;
  }

 private:
  double weight_of(Mask m) const {
    double s = 0.0;
    for (Mask r = m; r; r &= r - 1) s += w_[static_cast<std::size_t>(std::countr_zero(r))];
    return s;
  }

  // Greedy clique cover of the candidates; each clique contributes its heaviest vertex.
  double bound(Mask cand) const {
    double b = 0.0;
    std::vector<Mask> cliques;
    for (std::size_t v : order_) {
      if (!(cand & (Mask{1} << v))) continue;
      bool placed = false;
      for (auto& c : cliques)
        if ((c & closed_[v]) == c) {
          c |= Mask{1} << v;
          placed = true;
          break;
        }
      if (!placed) {
        cliques.push_back(Mask{1} << v);
        b += w_[v];
      }
    }
    return b;
  }

  void dfs(Mask cand, Mask chosen, double weight) {
    if (cand == 0) {
      if (weight > best_w_) {
        best_w_ = weight;
        best_ = chosen;
      }
      return;
    }
    if (weight + bound(cand) <= best_w_) return;
    std::size_t v = 0;
    for (std::size_t x : order_)
      if (cand & (Mask{1} << x)) {
        v = x;
        break;
      }
    dfs(cand & ~closed_[v], chosen | (Mask{1} << v), weight + w_[v]);
    dfs(cand & ~(Mask{1} << v), chosen, weight);
  }

  std::vector<Mask> closed_;
  std::vector<double> w_;
  std::vector<std::size_t> order_;
  Mask best_ = 0;
  double best_w_ = -kInf;
};

}  // namespace

namespace {

Selection max_weight_independent_impl(const ConflictGraph& graph, const SolveMode& mode) {
  const std::size_t V = graph.adjacency.size();
  if (graph.weights.size() != V) throw std::invalid_argument("one weight per vertex is required");
  for (double w : graph.weights)
    if (!(w >= 0.0) || std::isinf(w))
      throw std::invalid_argument("vertex weights must be finite and nonnegative");
  std::vector<PointSet> adj(V);
  for (std::size_t v = 0; v < V; ++v)
    for (Index u : graph.adjacency[v]) {
      if (u >= V) throw std::out_of_range("adjacency index out of range");
      if (u == v) continue;
      adj[v].push_back(u);
      adj[u].push_back(static_cast<Index>(v));
    }
  for (auto& a : adj) a = normalized(std::move(a));
  const auto& w = graph.weights;

  Selection out;
  if (!mode.exact()) {
    out.chosen = greedy_independent(adj, w);
  } else {
    check_budget(mode);
    std::vector<char> alive(V, 1);
    for (const auto& comp : components(adj, alive)) {
      const std::size_t n = comp.size();
      auto local = [&](Index v) {
        return static_cast<std::size_t>(std::lower_bound(comp.begin(), comp.end(), v) - comp.begin());
      };
      std::vector<Bits> closed(n, Bits(n));
      for (std::size_t i = 0; i < n; ++i) {
        closed[i].set(i);
        for (Index u : adj[comp[i]]) closed[i].set(local(u));
      }
      Bits live(n);
      live.set();
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t v = 0; v < n; ++v) {
          if (!live.test(v)) continue;
          const Bits nv = closed[v] & live;
          for (std::size_t u = nv.find_first(); u != Bits::npos; u = nv.find_next(u)) {
            if (u == v) continue;
            const Bits nu = closed[u] & live;
            if (!nu.is_subset_of(nv)) continue;
            const double wu = w[comp[u]];
            const double wv = w[comp[v]];
            if (wu > wv || (wu == wv && (nu != nv || u < v))) {
              live.reset(v);
              changed = true;
              break;
            }
          }
        }
      }
      for (std::size_t i = 0; i < n; ++i) alive[comp[i]] = live.test(i) ? 1 : 0;
    }

    for (const auto& comp : components(adj, alive)) {
      if (comp.size() > mode.exact_budget) throw BudgetExceeded(comp.size(), mode.exact_budget);
      std::vector<Mask> closed(comp.size(), 0);
      std::vector<double> cw(comp.size());
      for (std::size_t i = 0; i < comp.size(); ++i) {
        cw[i] = w[comp[i]];
        closed[i] |= Mask{1} << i;
        for (Index u : adj[comp[i]]) {
          auto it = std::lower_bound(comp.begin(), comp.end(), u);
          if (it != comp.end() && *it == u)
            closed[i] |= Mask{1} << static_cast<std::size_t>(it - comp.begin());
        }
      }
      IndependentSearch search(std::move(closed), std::move(cw));
      for (Mask r = search.solve(); r; r &= r - 1)
        out.chosen.push_back(comp[static_cast<std::size_t>(std::countr_zero(r))]);
    }
    out.certified = true;
  }
  std::sort(out.chosen.begin(), out.chosen.end());
  std::vector<double> terms;
  for (std::size_t v : out.chosen) terms.push_back(w[v]);
  out.objective = sorted_sum(std::move(terms));
  return out;
}

}  // namespace

Selection max_weight_independent(const ConflictGraph& graph, const SolveMode& mode) {
  try {
    return max_weight_independent_impl(graph, mode);
  } catch (const BudgetExceeded&) {
    if (!mode.exact() || !mode.fallback) throw;
  }
  return max_weight_independent_impl(graph, SolveMode::greedy());
}

}  // namespace ndsp
