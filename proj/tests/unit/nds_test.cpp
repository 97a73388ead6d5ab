#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ndsp/nds.hpp"
#include "oracles.hpp"

using namespace ndsp;

namespace {

std::size_t first_disagreement(const Nds& words, Index x, Index y) {
  // on the explicit word system the level-0 distance is 2^-j
  const double d = words.space(0).dist(x, y);
  return static_cast<std::size_t>(std::lround(-std::log2(d)));
}

Nds identity_system(std::size_t levels, std::size_t points) {
  std::vector<double> t(points * points, 1.0);
  for (std::size_t i = 0; i < points; ++i) t[i * points + i] = 0.0;
  auto space = std::make_shared<MetricSpace>(MetricSpace::from_table(points, t));
  std::vector<SpacePtr> spaces(levels, space);
  std::vector<std::vector<Index>> maps(levels - 1, all_points(points));
  return Nds("identity", spaces, maps);
}

}  // namespace

TEST(Nds, ConstructionChecksMaps) {
  auto s = std::make_shared<MetricSpace>(MetricSpace::from_table(1, {0.0}));
  EXPECT_THROW(Nds("bad", {s, s}, {{1}}), std::invalid_argument);
  EXPECT_THROW(Nds("bad", {s, s}, {}), std::invalid_argument);
  EXPECT_NO_THROW(Nds("ok", {s, s}, {{0}}));
}

TEST(Nds, ComposeConventions) {
  const auto w = oracle::words_system({2, 2, 2, 2, 2, 2}, 6);
  EXPECT_EQ(w.compose(0, 0), all_points(w.space(0).size()));
  EXPECT_THROW(w.compose(0, 6), HorizonError);

  // compose(0,3) drops the first three symbols: the image word is the tail
  const auto c3 = w.compose(0, 3);
  for (Index x = 0; x < w.space(0).size(); ++x) {
    Index y = x;
    for (std::size_t j = 0; j < 3; ++j) y = w.map(j)[y];
    EXPECT_EQ(c3[x], y);
  }

  // reversal twice is the identity
  std::vector<double> t(16, 1.0);
  for (int i = 0; i < 4; ++i) t[i * 4 + i] = 0.0;
  auto s = std::make_shared<MetricSpace>(MetricSpace::from_table(4, t));
  const std::vector<Index> rev{3, 2, 1, 0};
  Nds r("rev", {s, s, s}, {rev, rev});
  EXPECT_EQ(r.compose(0, 2), all_points(4));
}

TEST(Nds, BowenDistanceOnWordShift) {
  const int L = 8;
  const auto w = oracle::words_system(std::vector<int>(L, 2), L);
  const Index n0 = static_cast<Index>(w.space(0).size());
  for (Index x = 0; x < n0; x += 7)
    for (Index y = 0; y < n0; y += 5) {
      if (x == y) continue;
      const auto j = static_cast<int>(first_disagreement(w, x, y));
      for (int n = 1; n <= L; ++n) {
        const double expected = std::ldexp(1.0, -std::max(j - n + 1, 0));
        ASSERT_EQ(w.bowen_distance(0, n, x, y), expected);
        ASSERT_EQ(w.bowen_distance(0, n, x, y), oracle::naive_bowen(w, 0, n, x, y));
      }
    }
  EXPECT_THROW(w.bowen_distance(0, L + 1, 0, 1), HorizonError);
  EXPECT_THROW(w.bowen_distance(0, 0, 0, 1), HorizonError);
}

TEST(Nds, BowenDistanceProperties) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sys = oracle::random_system(rng, 5, 8);
    for (int n = 1; n <= sys.max_depth(); ++n) {
      const std::size_t N = sys.space(0).size();
      std::vector<double> t(N * N);
      for (Index x = 0; x < N; ++x)
        for (Index y = 0; y < N; ++y) {
          t[x * N + y] = sys.bowen_distance(0, n, x, y);
          ASSERT_EQ(t[x * N + y], oracle::naive_bowen(sys, 0, n, x, y));
          if (n > 1) ASSERT_GE(t[x * N + y], sys.bowen_distance(0, n - 1, x, y));
        }
      // maps may merge points, so only positivity is allowed to fail
      const auto report = validate_metric(MetricSpace::from_table(N, t));
      for (const auto& v : report.violations) ASSERT_EQ(v.axiom, Axiom::positivity);
    }
  }
}

TEST(Nds, BallsAgreeBothWays) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sys = oracle::random_system(rng, 4, 9);
    for (int n = 1; n <= sys.max_depth(); ++n)
      for (double r : {0.1, 0.25, 0.5, 1.5})
        for (bool closed : {false, true})
          for (Index x = 0; x < sys.space(0).size(); ++x) {
            const BowenAtom atom{0, n, x, r, closed};
            ASSERT_EQ(sys.bowen_ball_members(atom), sys.bowen_ball_by_preimages(atom));
          }
  }
}

TEST(Nds, BallShapes) {
  const int L = 6;
  const auto w = oracle::words_system(std::vector<int>(L, 2), L);
  for (int n = 1; n <= L; ++n) {
    const auto ball = w.bowen_ball_members({0, n, 5, 0.5, true});
    EXPECT_EQ(ball.size(), std::size_t{1} << (L - n));
    for (Index y : ball)
      if (y != 5) EXPECT_GE(first_disagreement(w, 5, y), static_cast<std::size_t>(n));
  }
  EXPECT_EQ(w.bowen_ball_members({0, 3, 0, 2.0, false}).size(), w.space(0).size());
}

TEST(Nds, NeighborhoodsMatchBalls) {
  std::mt19937_64 rng(23);
  const auto sys = oracle::random_system(rng, 5, 10);
  for (bool closed : {false, true}) {
    const auto& nb = sys.neighborhoods(0.3, closed);
    EXPECT_EQ(&nb, &sys.neighborhoods(0.3, closed));
    for (int n = 1; n <= sys.max_depth(); ++n)
      for (Index x = 0; x < sys.space(0).size(); ++x)
        EXPECT_EQ(nb.neighbors(n)[x], sys.bowen_ball_members({0, n, x, 0.3, closed}));
  }
}

TEST(Nds, IdentityMapsKeepStageMetric) {
  const auto id = identity_system(4, 5);
  for (int n = 1; n <= 4; ++n)
    for (Index x = 0; x < 5; ++x)
      for (Index y = 0; y < 5; ++y) EXPECT_EQ(id.bowen_distance(0, n, x, y), id.space(0).dist(x, y));
  const auto p = power_system(id, 3);
  EXPECT_EQ(p.horizon(), 1u);
  EXPECT_EQ(p.map(0), all_points(5));
}

TEST(Nds, PowerSystem) {
  const auto w = oracle::words_system(std::vector<int>(8, 2), 8);
  const auto p1 = power_system(w, 1);
  EXPECT_EQ(p1.horizon(), w.horizon());
  for (std::size_t k = 0; k < w.horizon(); ++k) EXPECT_EQ(p1.map(k), w.map(k));

  for (int m : {2, 3}) {
    const auto p = power_system(w, m);
    EXPECT_EQ(p.horizon(), w.horizon() / static_cast<std::size_t>(m));
    for (std::size_t k = 0; k < p.horizon(); ++k) EXPECT_EQ(p.map(k), w.compose(k * m, m));
    for (int n = 1; n <= p.max_depth(); ++n) {
      if (n * m > w.max_depth()) continue;
      for (Index x = 0; x < w.space(0).size(); x += 3)
        for (Index y = 0; y < w.space(0).size(); y += 5)
          ASSERT_LE(p.bowen_distance(0, n, x, y), w.bowen_distance(0, n * m, x, y));
    }
  }
  EXPECT_THROW(power_system(w, 9), HorizonError);
}

TEST(Nds, ProductSystem) {
  const auto a = oracle::words_system({2, 2, 2, 2}, 4);
  const auto b = oracle::words_system({3, 3, 3, 3}, 4);
  const auto ab = product_system(a, b);
  EXPECT_EQ(ab.space(0).size(), 16u * 81u);
  std::mt19937_64 rng(29);
  for (int t = 0; t < 10; ++t) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const double r = std::uniform_real_distribution<double>(0.1, 1.2)(rng);
    const bool closed = rng() % 2 == 0;
    const Index i = static_cast<Index>(rng() % 16);
    const Index j = static_cast<Index>(rng() % 81);
    const auto ball = ab.bowen_ball_members({0, n, product_index(b, 0, i, j), r, closed});
    PointSet expected;
    for (Index u : a.bowen_ball_members({0, n, i, r, closed}))
      for (Index v : b.bowen_ball_members({0, n, j, r, closed}))
        expected.push_back(product_index(b, 0, u, v));
    EXPECT_EQ(ball, normalized(expected));
  }

  // one-point factor gives an isometric copy
  auto pt = std::make_shared<MetricSpace>(MetricSpace::from_table(1, {0.0}));
  Nds one("pt", {pt, pt, pt, pt}, {{0}, {0}, {0}});
  const auto copy = product_system(a, one);
  for (Index x = 0; x < 16; ++x)
    for (Index y = 0; y < 16; ++y) EXPECT_EQ(copy.bowen_distance(0, 3, x, y), a.bowen_distance(0, 3, x, y));
}

TEST(Nds, RestrictToCompact) {
  const auto w = oracle::words_system({2, 2, 2, 2, 2}, 5);
  const auto whole = restrict_to_compact(w, all_points(w.space(0).size()));
  for (std::size_t k = 0; k <= w.horizon(); ++k) EXPECT_EQ(whole.system.space(k).size(), w.space(k).size());

  const auto single = restrict_to_compact(w, PointSet{7});
  for (std::size_t k = 0; k <= w.horizon(); ++k) EXPECT_EQ(single.system.space(k).size(), 1u);

  PointSet half;  // words starting with symbol 0
  for (Index x = 0; x < w.space(0).size(); ++x)
    if (w.space(0).coordinates()[x] == 0.0) half.push_back(x);
  const auto r = restrict_to_compact(w, half);
  EXPECT_EQ(r.system.space(0).size(), half.size());
  for (std::size_t k = 1; k <= w.horizon(); ++k) EXPECT_EQ(r.system.space(k).size(), w.space(k).size());
  EXPECT_THROW(restrict_to_compact(w, PointSet{}), std::invalid_argument);
}

TEST(Nds, ConjugacyAndRelabeling) {
  const auto w = oracle::words_system({2, 3, 2, 3}, 4);
  ConjugacyData id;
  for (std::size_t k = 0; k <= w.horizon(); ++k) id.pi.push_back(all_points(w.space(k).size()));
  const auto same = apply_conjugacy(w, id);
  for (std::size_t k = 0; k < w.horizon(); ++k) EXPECT_EQ(same.map(k), w.map(k));

  std::mt19937_64 rng(31);
  ConjugacyData perm;
  for (std::size_t k = 0; k <= w.horizon(); ++k) {
    auto p = all_points(w.space(k).size());
    std::shuffle(p.begin(), p.end(), rng);
    perm.pi.push_back(p);
  }
  const auto moved = apply_conjugacy(w, perm);
  for (int n = 1; n <= w.max_depth(); ++n)
    for (Index x = 0; x < w.space(0).size(); ++x)
      for (Index y = 0; y < w.space(0).size(); ++y)
        ASSERT_EQ(moved.bowen_distance(0, n, perm.pi[0][x], perm.pi[0][y]), w.bowen_distance(0, n, x, y));

  // supplying the induced maps passes; breaking one entry reports a witness
  ConjugacyData with_maps = perm;
  with_maps.target_maps = moved.maps();
  EXPECT_NO_THROW(apply_conjugacy(w, with_maps));
  auto broken = with_maps;
  auto& r1 = (*broken.target_maps)[1];
  const Index x = perm.pi[1][4];
  r1[x] = (r1[x] + 1) % static_cast<Index>(w.space(2).size());
  try {
    apply_conjugacy(w, broken);
    FAIL() << "expected a commutation error";
  } catch (const CommutationError& e) {
    EXPECT_EQ(e.level(), 1u);
    EXPECT_EQ(e.point(), 4u);
  }
}

TEST(Nds, BoundedMetricTransform) {
  const auto w = oracle::words_system({2, 2, 2, 2}, 4);
  const auto b = bounded_metric_transform(w);
  EXPECT_TRUE(validate_metric(b.space(0)).ok());
  for (Index x = 0; x < w.space(0).size(); ++x)
    for (Index y = 0; y < w.space(0).size(); ++y) {
      const double d = w.space(0).dist(x, y);
      EXPECT_EQ(b.space(0).dist(x, y), d / (1 + d));
    }
  EXPECT_DOUBLE_EQ(bounded_radius(1.0), 0.5);
  EXPECT_DOUBLE_EQ(bounded_radius(0.125), 1.0 / 9.0);
}

TEST(Nds, ShiftedSystem) {
  const auto w = oracle::words_system({2, 3, 2, 3}, 4);
  const auto s = shifted_system(w, 1);
  EXPECT_EQ(s.horizon(), 2u);
  EXPECT_EQ(s.space(0).size(), w.space(1).size());
  EXPECT_EQ(s.map(0), w.map(1));
}
