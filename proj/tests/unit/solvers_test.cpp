#include <gtest/gtest.h>

#include <random>

#include "ndsp/solvers.hpp"
#include "oracles.hpp"

using namespace ndsp;

namespace {

bool covers(const CoverProblem& p, const std::vector<std::size_t>& chosen) {
  std::vector<char> hit(p.elements, 0);
  for (std::size_t c : chosen)
    for (Index u : p.sets[c]) hit[u] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char h) { return h != 0; });
}

bool independent(const ConflictGraph& g, const std::vector<std::size_t>& chosen) {
  for (std::size_t v : chosen)
    for (Index u : g.adjacency[v])
      if (std::binary_search(chosen.begin(), chosen.end(), static_cast<std::size_t>(u)))
        return false;
  return true;
}

}  // namespace

TEST(SortedSum, OrderIndependent) {
  EXPECT_EQ(sorted_sum({1e16, 1.0, -1e16, 1.0}), sorted_sum({1.0, -1e16, 1.0, 1e16}));
  EXPECT_EQ(sorted_sum({}), 0.0);
}

TEST(Cover, TrivialInstances) {
  CoverProblem empty;
  EXPECT_EQ(min_weight_cover(empty, {}).objective, 0.0);

  CoverProblem p{3, {{0, 1, 2}, {0}, {1}, {2}}, {2.5, 1.0, 1.0, 1.0}};
  const auto s = min_weight_cover(p, {});
  EXPECT_TRUE(s.certified);
  EXPECT_DOUBLE_EQ(s.objective, 2.5);
  EXPECT_EQ(s.chosen, std::vector<std::size_t>{0});
}

TEST(Cover, UncoverableElementThrows) {
  CoverProblem p{2, {{0}}, {1.0}};
  EXPECT_THROW(min_weight_cover(p, {}), std::domain_error);
}

TEST(Cover, BudgetIsPerComponent) {
  // 30 isolated elements, each with its own pair of candidates: 30 components of size 1.
  CoverProblem p;
  p.elements = 30;
  for (Index u = 0; u < 30; ++u) {
    p.sets.push_back({u});
    p.weights.push_back(1.0 + u);
    p.sets.push_back({u});
    p.weights.push_back(0.5 + u);
  }
  const auto s = min_weight_cover(p, {});
  EXPECT_EQ(s.chosen.size(), 30u);

  // A 25-element ring of overlapping pairs is one irreducible component.
  CoverProblem ring;
  ring.elements = 25;
  for (Index u = 0; u < 25; ++u) {
    ring.sets.push_back({u, static_cast<Index>((u + 1) % 25)});
    ring.weights.push_back(1.0);
  }
  EXPECT_THROW(min_weight_cover(ring, {}), BudgetExceeded);
  EXPECT_DOUBLE_EQ(min_weight_cover(ring, {SolveKind::exact, 30}).objective, 13.0);
}

TEST(Cover, MatchesExhaustiveAndGreedyBoundsFromAbove) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t E = 1 + rng() % 12;
    const std::size_t C = 1 + rng() % 12;
    const auto p = oracle::random_cover(rng, E, C);
    const auto exact = min_weight_cover(p, {});
    const auto greedy = min_weight_cover(p, SolveMode::greedy());
    const double truth = oracle::exhaustive_min_cover(p);
    ASSERT_TRUE(covers(p, exact.chosen));
    ASSERT_TRUE(covers(p, greedy.chosen));
    ASSERT_NEAR(exact.objective, truth, 1e-12 * (1 + truth)) << "trial " << trial;
    ASSERT_GE(greedy.objective, exact.objective - 1e-12);
    ASSERT_LE(greedy.objective, (1.0 + std::log(static_cast<double>(E))) * truth + 1e-9);
    ASSERT_FALSE(greedy.certified);
  }
}

TEST(Multicover, MatchesExhaustiveAndNeverExceedsCover) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t E = 1 + rng() % 8;
    const std::size_t C = 1 + rng() % 6;
    const auto p = oracle::random_cover(rng, E, C);
    const auto exact = min_weight_multicover(p, 4, {});
    const double truth = oracle::exhaustive_multicover(p, 4);
    ASSERT_NEAR(exact.objective, truth, 1e-12 * (1 + truth)) << "trial " << trial;
    ASSERT_LE(exact.objective, min_weight_cover(p, {}).objective + 1e-12);
    const auto greedy = min_weight_multicover(p, 4, SolveMode::greedy());
    ASSERT_GE(greedy.objective, exact.objective - 1e-12);
    ASSERT_LE(greedy.objective, min_weight_cover(p, SolveMode::greedy()).objective + 1e-12);
  }
}

TEST(Multicover, FractionalBeatsIntegralOnTriangle) {
  // Three points, each pair a candidate of weight 1: integral cover costs 2,
  // half weights on all three pairs cost 1.5.
  CoverProblem p{3, {{0, 1}, {1, 2}, {0, 2}}, {1.0, 1.0, 1.0}};
  EXPECT_DOUBLE_EQ(min_weight_cover(p, {}).objective, 2.0);
  EXPECT_DOUBLE_EQ(min_weight_multicover(p, 4, {}).objective, 1.5);
}

TEST(Independent, MatchesExhaustiveAndGreedyBoundsFromBelow) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t V = 1 + rng() % 12;
    const double density = std::uniform_real_distribution<double>(0.05, 0.9)(rng);
    const auto g = oracle::random_graph(rng, V, density);
    const auto exact = max_weight_independent(g, {});
    const auto greedy = max_weight_independent(g, SolveMode::greedy());
    const double truth = oracle::exhaustive_mwis(g);
    ASSERT_TRUE(independent(g, exact.chosen));
    ASSERT_TRUE(independent(g, greedy.chosen));
    ASSERT_NEAR(exact.objective, truth, 1e-12 * (1 + truth)) << "trial " << trial;
    ASSERT_LE(greedy.objective, exact.objective + 1e-12);
  }
}

TEST(Independent, CliqueUnionIsSolvedByReduction) {
  // 40 disjoint cliques of size 5 (200 vertices) stay within a budget of 20.
  ConflictGraph g;
  g.adjacency.resize(200);
  for (Index v = 0; v < 200; ++v) {
    g.weights.push_back(1.0 + (v * 7 % 5));
    for (Index u = v / 5 * 5; u < v / 5 * 5 + 5; ++u)
      if (u != v) g.adjacency[v].push_back(u);
  }
  const auto s = max_weight_independent(g, {});
  EXPECT_EQ(s.chosen.size(), 40u);
  EXPECT_DOUBLE_EQ(s.objective, 200.0);
  EXPECT_EQ(max_weight_independent(g, SolveMode::greedy()).objective, s.objective);
}

TEST(Independent, BudgetExceededOnLargeCycle) {
  ConflictGraph g;
  g.adjacency.resize(30);
  g.weights.assign(30, 1.0);
  for (Index v = 0; v < 30; ++v) g.adjacency[v] = {static_cast<Index>((v + 1) % 30)};
  EXPECT_THROW(max_weight_independent(g, {}), BudgetExceeded);
  EXPECT_DOUBLE_EQ(max_weight_independent(g, {SolveKind::exact, 30}).objective, 15.0);
}
