#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ndsp/metric.hpp"
#include "oracles.hpp"

using namespace ndsp;

namespace {

MetricSpace discrete(std::size_t n) {
  std::vector<double> t(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) t[i * n + i] = 0.0;
  return MetricSpace::from_table(n, t);
}

MetricSpace dyadic_words(int L) {
  const std::size_t n = std::size_t{1} << L;
  return MetricSpace::from_function(n, [L](Index a, Index b) {
    if (a == b) return 0.0;
    // symbol j is bit L-1-j
    int j = 0;
    while (((a >> (L - 1 - j)) & 1u) == ((b >> (L - 1 - j)) & 1u)) ++j;
    return std::ldexp(1.0, -j);
  });
}

MetricSpace circle_grid(std::size_t n) {
  return MetricSpace::from_function(n, [n](Index a, Index b) {
    const double d = std::abs(static_cast<double>(a) - static_cast<double>(b)) / static_cast<double>(n);
    return std::min(d, 1.0 - d);
  });
}

}  // namespace

TEST(Metric, ValidationReportsViolations) {
  EXPECT_TRUE(validate_metric(discrete(2)).ok());
  std::vector<double> t{0, 1, 5, 1, 0, 1, 5, 1, 0};
  const auto report = validate_metric(MetricSpace::from_table(3, t));
  ASSERT_FALSE(report.ok());
  bool found = false;
  for (const auto& v : report.violations)
    found = found || (v.axiom == Axiom::triangle && v.i == 0 && v.j == 1 && v.k == 2);
  EXPECT_TRUE(found);
  EXPECT_TRUE(validate_metric(dyadic_words(6)).ok());
}

TEST(Metric, ValidationCatchesAsymmetryAndDuplicates) {
  std::vector<double> t{0, 1, 2, 0};
  EXPECT_FALSE(validate_metric(MetricSpace::from_table(2, t)).ok());
  std::vector<double> dup{0, 0, 0, 0};
  const auto r = validate_metric(MetricSpace::from_table(2, dup));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violations.front().axiom, Axiom::positivity);
}

TEST(Metric, DiameterAndTableAgreement) {
  const auto w = dyadic_words(4);
  EXPECT_DOUBLE_EQ(w.diameter(), 1.0);
  const auto table = MetricSpace::from_table(w.size(), w.dense_table());
  for (Index i = 0; i < w.size(); ++i)
    for (Index j = 0; j < w.size(); ++j) EXPECT_EQ(table.dist(i, j), w.dist(i, j));
  EXPECT_DOUBLE_EQ(w.min_positive_distance(), 0.125);
}

TEST(Metric, BallMembers) {
  const auto d = discrete(2);
  EXPECT_EQ(ball_members(d, 0, 0.5, false), (PointSet{0}));
  EXPECT_EQ(ball_members(d, 0, 1.0, true), (PointSet{0, 1}));
  EXPECT_EQ(ball_members(d, 0, 1.0, false), (PointSet{0}));
  EXPECT_THROW(ball_members(d, 2, 1.0, true), std::out_of_range);

  const auto w = dyadic_words(4);
  EXPECT_EQ(ball_members(w, 0, 0.3, true), (PointSet{0, 1, 2, 3}));
}

TEST(Metric, OpenBallInsideClosedBall) {
  std::mt19937_64 rng(3);
  const auto c = circle_grid(64);
  for (int t = 0; t < 100; ++t) {
    const Index center = static_cast<Index>(rng() % 64);
    const double r = std::uniform_real_distribution<double>(0.0, 0.6)(rng);
    const auto open = ball_members(c, center, r, false);
    const auto closed = ball_members(c, center, r, true);
    EXPECT_TRUE(std::includes(closed.begin(), closed.end(), open.begin(), open.end()));
  }
}

TEST(Metric, FiveRLemma) {
  std::mt19937_64 rng(5);
  const std::size_t n = 100;
  auto line = MetricSpace::from_function(n, [](Index a, Index b) {
    return std::abs(static_cast<double>(a) - static_cast<double>(b)) / 100.0;
  });
  for (int trial = 0; trial < 50; ++trial) {
    BallFamily balls;
    for (int i = 0; i < 20; ++i)
      balls.push_back({static_cast<Index>(rng() % n),
                       std::uniform_real_distribution<double>(0.0, 0.1)(rng), rng() % 2 == 0});
    const auto chosen = five_r_disjoint_subfamily(line, balls);
    std::vector<char> owner(n, 0);
    for (std::size_t i : chosen)
      for (Index p : ball_members(line, balls[i].center, balls[i].radius, balls[i].closed)) {
        ASSERT_EQ(owner[p], 0) << "selected balls overlap";
        owner[p] = 1;
      }
    for (const auto& b : balls)
      for (Index p : ball_members(line, b.center, b.radius, b.closed)) {
        bool inside = false;
        for (std::size_t i : chosen)
          inside = inside || line.dist(p, balls[i].center) <= 5 * balls[i].radius + 1e-12;
        ASSERT_TRUE(inside);
      }

    // permutation of the input gives the same selected balls
    std::vector<std::size_t> perm(balls.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    BallFamily shuffled;
    for (std::size_t i : perm) shuffled.push_back(balls[i]);
    auto key = [](const BallFamily& f, const std::vector<std::size_t>& idx) {
      std::vector<std::tuple<double, Index, bool>> out;
      for (std::size_t i : idx) out.emplace_back(f[i].radius, f[i].center, f[i].closed);
      std::sort(out.begin(), out.end());
      return out;
    };
    EXPECT_EQ(key(balls, chosen), key(shuffled, five_r_disjoint_subfamily(line, shuffled)));
  }
}

TEST(Metric, GreedyNetSpansAndSeparates) {
  const auto d = discrete(5);
  EXPECT_EQ(greedy_epsilon_net(d, all_points(5), 0.5).size(), 5u);
  EXPECT_EQ(greedy_epsilon_net(d, PointSet{3}, 0.5), PointSet{3});
  EXPECT_TRUE(greedy_epsilon_net(d, PointSet{}, 0.5).empty());

  const auto c = circle_grid(256);
  const auto all = all_points(256);
  const auto net = greedy_epsilon_net(c, all, 0.1);
  // Separated points sit at least 26 grid steps apart, so at most 9 fit;
  // a closed 0.1-ball holds 51 grid points, so any spanning set has at least 6.
  EXPECT_GE(net.size(), 6u);
  EXPECT_LE(net.size(), 9u);
  for (Index p : all) {
    double nearest = 1.0;
    for (Index q : net) nearest = std::min(nearest, c.dist(p, q));
    EXPECT_LE(nearest, 0.1);
  }
  for (std::size_t i = 0; i < net.size(); ++i)
    for (std::size_t j = i + 1; j < net.size(); ++j) EXPECT_GT(c.dist(net[i], net[j]), 0.1);
  EXPECT_THROW(greedy_epsilon_net(c, all, 0.0), std::invalid_argument);
}
