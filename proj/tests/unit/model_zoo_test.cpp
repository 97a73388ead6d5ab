#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "ndsp/model_zoo.hpp"
#include "oracles.hpp"

using namespace ndsp;

TEST(ModelZoo, SymbolicMatchesExplicitWords) {
  for (const std::vector<int>& sizes : {std::vector<int>{2, 2, 2, 2, 2}, std::vector<int>{2, 3, 2, 3, 2},
                                        std::vector<int>{3, 1, 2, 4}}) {
    const int L = static_cast<int>(sizes.size());
    const auto zoo = make_symbolic(sizes, L);
    const auto ref = oracle::words_system(sizes, L);
    ASSERT_EQ(zoo.system.horizon(), ref.horizon());
    for (std::size_t k = 0; k <= ref.horizon(); ++k) {
      const auto& a = zoo.system.space(k);
      const auto& b = ref.space(k);
      ASSERT_EQ(a.size(), b.size());
      EXPECT_EQ(a.coordinates(), b.coordinates());
      for (Index x = 0; x < a.size(); ++x)
        for (Index y = 0; y < a.size(); ++y) ASSERT_EQ(a.dist(x, y), b.dist(x, y));
      if (k < ref.horizon()) EXPECT_EQ(zoo.system.map(k), ref.map(k));
    }
  }
}

TEST(ModelZoo, SymbolicCountsByBruteForce) {
  const std::vector<int> sizes{2, 3, 2, 3, 2, 3};
  const auto w = make_symbolic(sizes, 6).system;
  for (int n = 1; n <= 6; ++n) {
    // distinct n-prefixes read off trajectories
    std::set<std::vector<double>> prefixes;
    for (Index x = 0; x < w.space(0).size(); ++x) {
      std::vector<double> p;
      Index y = x;
      for (int j = 0; j < n; ++j) {
        p.push_back(w.space(static_cast<std::size_t>(j)).coordinates()[y]);
        if (j + 1 < n) y = w.map(static_cast<std::size_t>(j))[y];
      }
      prefixes.insert(p);
    }
    EXPECT_EQ(static_cast<double>(prefixes.size()), symbolic_count(sizes, n));
  }
  EXPECT_EQ(symbolic_count({2}, 10), 1024.0);
  EXPECT_EQ(alphabet_at({2, 3}, 5), 3);
}

TEST(ModelZoo, OracleValues) {
  const auto full = make_symbolic({2}, 10);
  EXPECT_NEAR(full.oracle.entropy_reference, std::log(2.0), 1e-15);
  EXPECT_NEAR(full.oracle.pressure_reference.at("first_symbol"), std::log(1.0 + std::numbers::e), 1e-15);
  const auto alt = make_symbolic({2, 3}, 6);
  EXPECT_NEAR(alt.oracle.entropy_reference, 0.895880, 5e-7);
  EXPECT_EQ(alt.oracle.validity, "exact at scheduled eps");

  for (int n = 1; n <= 8; ++n)
    EXPECT_NEAR(symbolic_partition({2}, n, [](std::size_t, int a) { return double(a); }),
                std::pow(1.0 + std::numbers::e, n), 1e-12 * std::pow(1.0 + std::numbers::e, n));
  EXPECT_NEAR(std::log(symbolic_partition({2, 3}, 6, [](std::size_t, int) { return 0.0; })) / 6, 0.895880, 5e-7);
}

TEST(ModelZoo, CircleMaps) {
  const auto c = make_circle_expanding({2, 3}, 64, 5);
  EXPECT_EQ(c.system.horizon(), 5u);
  for (std::size_t k = 0; k < 5; ++k) {
    const Index m = k % 2 == 0 ? 2 : 3;
    for (Index i = 0; i < 64; ++i) EXPECT_EQ(c.system.map(k)[i], m * i % 64);
  }
  EXPECT_NEAR(c.oracle.entropy_reference, (3 * std::log(2.0) + 2 * std::log(3.0)) / 5, 1e-15);
  const auto& s = c.system.space(0);
  EXPECT_EQ(s.dist(0, 63), 1.0 / 64);
  EXPECT_EQ(s.dist(0, 32), 0.5);
  EXPECT_EQ(s.diameter(), 0.5);
  EXPECT_NO_THROW(validate_metric(s));
  EXPECT_EQ(c.oracle.validity, "analytic limit reference");
  EXPECT_THROW(make_circle_expanding({0}, 8, 2), std::invalid_argument);
}

TEST(ModelZoo, TentMaps) {
  const auto t = make_tent_sequence({2.0, 1.5}, 9, 3);
  // slope 2 on i/8 is exact: i -> 2 min(i, 8-i)
  for (Index i = 0; i < 9; ++i) EXPECT_EQ(t.system.map(0)[i], 2 * std::min<Index>(i, 8 - i));
  // slope 1.5: 1.5 * i rounded to nearest with ties to even
  const std::vector<Index> expect{0, 2, 3, 4, 6, 4, 3, 2, 0};
  EXPECT_EQ(t.system.map(1), expect);
  EXPECT_THROW(make_tent_sequence({2.5}, 9, 2), std::invalid_argument);
}

TEST(ModelZoo, RelabelConjugacy) {
  const auto w = make_symbolic({2, 3, 2}, 3).system;
  const auto id = make_relabel_conjugacy(w, 0);
  for (std::size_t k = 0; k <= w.horizon(); ++k) EXPECT_EQ(id.pi[k], all_points(w.space(k).size()));
  const auto c = make_relabel_conjugacy(w, 17);
  bool moved = false;
  for (std::size_t k = 0; k <= w.horizon(); ++k) {
    auto p = c.pi[k];
    moved = moved || p != all_points(p.size());
    std::sort(p.begin(), p.end());
    EXPECT_EQ(p, all_points(w.space(k).size()));
  }
  EXPECT_TRUE(moved);
  const auto img = apply_conjugacy(w, c);
  for (Index x = 0; x < w.space(0).size(); ++x)
    for (Index y = 0; y < w.space(0).size(); ++y)
      EXPECT_EQ(img.bowen_distance(0, 3, c.pi[0][x], c.pi[0][y]), w.bowen_distance(0, 3, x, y));
}

TEST(ModelZoo, RandomAndSmallSystems) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = make_random_system(seed, 5, 7);
    EXPECT_EQ(r.horizon(), 4u);
    for (std::size_t k = 0; k <= r.horizon(); ++k) EXPECT_NO_THROW(validate_metric(r.space(k)));
    const auto again = make_random_system(seed, 5, 7);
    EXPECT_EQ(again.maps(), r.maps());
  }
  const auto p = make_one_point(4);
  EXPECT_EQ(p.space(3).size(), 1u);
  const auto id = make_identity_system(3, 2);
  EXPECT_EQ(id.bowen_distance(0, 3, 0, 2), 1.0);
  EXPECT_EQ(id.map(1), (std::vector<Index>{0, 1, 2}));
}

TEST(ModelZoo, DisjointUnion) {
  const auto a = make_symbolic({2, 2, 2}, 3).system;
  const auto b = make_identity_system(3, 2);
  const auto u = disjoint_union(a, b);
  EXPECT_EQ(u.space(0).size(), 11u);
  EXPECT_EQ(u.space(0).dist(0, 8), 1.0);
  EXPECT_EQ(u.space(0).dist(1, 2), a.space(0).dist(1, 2));
  EXPECT_EQ(u.space(1).dist(4, 6), 1.0);
  EXPECT_EQ(u.map(0)[9], 5u);
  EXPECT_EQ(u.map(0)[3], a.map(0)[3]);
  EXPECT_NO_THROW(validate_metric(u.space(0)));
}

TEST(ModelZoo, Custom) {
  const auto c = make_custom("two", {{0, 1, 1, 0}, {0, 2, 2, 0}}, {{1, 0}});
  EXPECT_EQ(c.bowen_distance(0, 2, 0, 1), 2.0);
  EXPECT_THROW(make_custom("bad", {{0, 1, 1}}, {}), std::invalid_argument);
}
