#pragma once

// Brute-force reference implementations and seeded generators shared by the
// unit and acceptance tests. Everything here is deliberately naive.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ndsp/nds.hpp"
#include "ndsp/solvers.hpp"

namespace oracle {

using ndsp::Index;
using ndsp::PointSet;

inline double exhaustive_min_cover(const ndsp::CoverProblem& p) {
  const std::size_t C = p.sets.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << C); ++mask) {
    std::vector<char> hit(p.elements, 0);
    double w = 0.0;
    for (std::size_t c = 0; c < C; ++c)
      if (mask >> c & 1) {
        w += p.weights[c];
        for (Index u : p.sets[c]) hit[u] = 1;
      }
    if (std::all_of(hit.begin(), hit.end(), [](char h) { return h != 0; })) best = std::min(best, w);
  }
  return best;
}

inline double exhaustive_multicover(const ndsp::CoverProblem& p, int q) {
  const std::size_t C = p.sets.size();
  std::vector<int> k(C, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<int> level(p.elements, 0);
    double w = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
      w += k[c] * p.weights[c] / q;
      for (Index u : p.sets[c]) level[u] += k[c];
    }
    if (std::all_of(level.begin(), level.end(), [q](int l) { return l >= q; })) best = std::min(best, w);
    std::size_t i = 0;
    while (i < C && k[i] == q) k[i++] = 0;
    if (i == C) break;
    ++k[i];
  }
  return best;
}

inline double exhaustive_mwis(const ndsp::ConflictGraph& g) {
  const std::size_t V = g.adjacency.size();
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << V); ++mask) {
    bool ok = true;
    double w = 0.0;
    for (std::size_t v = 0; v < V && ok; ++v) {
      if (!(mask >> v & 1)) continue;
      w += g.weights[v];
      for (Index u : g.adjacency[v])
        if (mask >> u & 1) ok = false;
    }
    if (ok) best = std::max(best, w);
  }
  return best;
}

inline ndsp::CoverProblem random_cover(std::mt19937_64& rng, std::size_t elements,
                                       std::size_t candidates) {
  ndsp::CoverProblem p;
  p.elements = elements;
  std::uniform_real_distribution<double> wdist(0.1, 3.0);
  std::bernoulli_distribution member(0.3);
  for (std::size_t c = 0; c < candidates; ++c) {
    PointSet s;
    for (Index u = 0; u < elements; ++u)
      if (member(rng)) s.push_back(u);
    p.sets.push_back(s);
    p.weights.push_back(wdist(rng));
  }
  // every element needs at least one candidate
  std::uniform_int_distribution<std::size_t> pick(0, candidates - 1);
  for (Index u = 0; u < elements; ++u) {
    bool seen = false;
    for (const auto& s : p.sets) seen = seen || std::binary_search(s.begin(), s.end(), u);
    if (!seen) {
      auto& s = p.sets[pick(rng)];
      s.insert(std::upper_bound(s.begin(), s.end(), u), u);
    }
  }
  return p;
}

inline ndsp::ConflictGraph random_graph(std::mt19937_64& rng, std::size_t vertices, double density) {
  ndsp::ConflictGraph g;
  g.adjacency.resize(vertices);
  std::bernoulli_distribution edge(density);
  std::uniform_real_distribution<double> wdist(0.1, 3.0);
  for (Index v = 0; v < vertices; ++v) {
    g.weights.push_back(wdist(rng));
    for (Index u = v + 1; u < vertices; ++u)
      if (edge(rng)) {
        g.adjacency[v].push_back(u);
        g.adjacency[u].push_back(v);
      }
  }
  return g;
}

/// Word spaces built directly from explicit symbol vectors: level k holds
/// all words over alphabets sizes[k..k+len_k), len_k = L - k, metric
/// 2^-(first disagreement), map drops the first symbol.
inline ndsp::Nds words_system(const std::vector<int>& sizes, int L) {
  std::vector<std::vector<std::vector<int>>> words(static_cast<std::size_t>(L));
  for (int k = 0; k < L; ++k) {
    std::vector<std::vector<int>> level{{}};
    for (int j = 0; j < L - k; ++j) {
      std::vector<std::vector<int>> next;
      for (const auto& w : level)
        for (int a = 0; a < sizes[static_cast<std::size_t>(k + j)]; ++a) {
          auto v = w;
          v.push_back(a);
          next.push_back(v);
        }
      level = next;
    }
    words[static_cast<std::size_t>(k)] = level;
  }
  std::vector<ndsp::SpacePtr> spaces;
  std::vector<std::vector<Index>> maps;
  for (std::size_t k = 0; k < words.size(); ++k) {
    const auto& w = words[k];
    const std::size_t n = w.size();
    std::vector<double> t(n * n, 0.0);
    std::vector<double> first(n);
    for (std::size_t i = 0; i < n; ++i) {
      first[i] = w[i][0];
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        std::size_t d = 0;
        while (w[i][d] == w[j][d]) ++d;
        t[i * n + j] = std::ldexp(1.0, -static_cast<int>(d));
      }
    }
    spaces.push_back(std::make_shared<ndsp::MetricSpace>(
        ndsp::MetricSpace::from_table(n, t).with_coordinates(first)));
    if (k + 1 < words.size()) {
      std::vector<Index> m(n);
      const auto& next = words[k + 1];
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> tail(w[i].begin() + 1, w[i].end());
        m[i] = static_cast<Index>(std::find(next.begin(), next.end(), tail) - next.begin());
      }
      maps.push_back(m);
    }
  }
  return ndsp::Nds("words", spaces, maps);
}

/// Random system: each level is a random planar point cloud with the
/// Euclidean metric (coordinates on a 1/16 lattice, distinct points), random
/// maps between consecutive levels.
inline ndsp::Nds random_system(std::mt19937_64& rng, std::size_t levels, std::size_t max_points) {
  std::uniform_int_distribution<std::size_t> count(1, max_points);
  std::uniform_int_distribution<int> coord(0, 16);
  std::vector<ndsp::SpacePtr> spaces;
  std::vector<std::size_t> sizes;
  for (std::size_t k = 0; k < levels; ++k) {
    const std::size_t n = count(rng);
    std::vector<std::pair<int, int>> pts;
    while (pts.size() < n) {
      std::pair<int, int> p{coord(rng), coord(rng)};
      if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
    std::vector<double> t(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        t[i * n + j] = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second) / 16.0;
    spaces.push_back(std::make_shared<ndsp::MetricSpace>(ndsp::MetricSpace::from_table(n, t)));
    sizes.push_back(n);
  }
  std::vector<std::vector<Index>> maps;
  for (std::size_t k = 0; k + 1 < levels; ++k) {
    std::uniform_int_distribution<Index> target(0, static_cast<Index>(sizes[k + 1] - 1));
    std::vector<Index> m(sizes[k]);
    for (auto& v : m) v = target(rng);
    maps.push_back(m);
  }
  return ndsp::Nds("random", spaces, maps);
}

/// Bowen distance straight from the definition, walking maps one step at a time.
inline double naive_bowen(const ndsp::Nds& nds, std::size_t k, int n, Index x, Index y) {
  double d = 0.0;
  for (int j = 0; j < n; ++j) {
    d = std::max(d, nds.space(k + static_cast<std::size_t>(j)).dist(x, y));
    if (j + 1 < n) {
      x = nds.map(k + static_cast<std::size_t>(j))[x];
      y = nds.map(k + static_cast<std::size_t>(j))[y];
    }
  }
  return d;
}

/// Birkhoff sum straight from the definition.
inline double naive_sum(const ndsp::Nds& nds, const std::vector<std::vector<double>>& f, int n, Index x) {
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    s += f[static_cast<std::size_t>(j)][x];
    if (j + 1 < n) x = nds.map(static_cast<std::size_t>(j))[x];
  }
  return s;
}

/// min over spanning F in X_0 of sum w(F), by subset enumeration (|X_0| <= 20).
inline double brute_span(const ndsp::Nds& nds, const PointSet& Z, int n, double eps,
                         const std::vector<double>& w) {
  const std::size_t N = nds.space(0).size();
  if (Z.empty()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << N); ++m) {
    bool ok = true;
    for (Index z : Z) {
      bool hit = false;
      for (Index y = 0; y < N && !hit; ++y)
        if ((m >> y & 1) && naive_bowen(nds, 0, n, z, y) <= eps) hit = true;
      if (!hit) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    double s = 0.0;
    for (Index y = 0; y < N; ++y)
      if (m >> y & 1) s += w[y];
    best = std::min(best, s);
  }
  return best;
}

/// max over separated E in Z of sum w(E), by subset enumeration (|Z| <= 20).
inline double brute_sep(const ndsp::Nds& nds, const PointSet& Z, int n, double eps,
                        const std::vector<double>& w) {
  double best = 0.0;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << Z.size()); ++m) {
    bool ok = true;
    double s = 0.0;
    for (std::size_t i = 0; i < Z.size() && ok; ++i) {
      if (!(m >> i & 1)) continue;
      s += w[Z[i]];
      for (std::size_t j = i + 1; j < Z.size(); ++j)
        if ((m >> j & 1) && !(naive_bowen(nds, 0, n, Z[i], Z[j]) > eps)) {
          ok = false;
          break;
        }
    }
    if (ok) best = std::max(best, s);
  }
  return best;
}

}  // namespace oracle
