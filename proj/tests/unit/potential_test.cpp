#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ndsp/potential.hpp"
#include "oracles.hpp"

using namespace ndsp;

namespace {

// Values on a 1/64 lattice keep every sum below exact in binary floating point,
// so identities that regroup sums can be asserted with ==.
Potential dyadic_potential(const Nds& nds, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> v(-128, 128);
  std::vector<std::vector<double>> values;
  for (std::size_t k = 0; k <= nds.horizon(); ++k) {
    std::vector<double> level(nds.space(k).size());
    for (auto& x : level) x = v(rng) / 64.0;
    values.push_back(level);
  }
  return Potential("dyadic", values);
}

}  // namespace

TEST(Potential, RejectsNonFiniteValues) {
  EXPECT_THROW(Potential("bad", {{1.0, NAN}}), std::invalid_argument);
}

TEST(Potential, BirkhoffBasics) {
  const auto w = oracle::words_system(std::vector<int>(8, 2), 8);
  const auto one = Potential::constant(w, 0.75);
  const auto first = first_coordinate_weight(w, 1.0);
  for (Index x = 0; x < w.space(0).size(); x += 3) {
    EXPECT_EQ(birkhoff_sum(w, first, 0, 1, x), first.at(0, x));
    EXPECT_EQ(birkhoff_sum(w, one, 0, 0, x), 0.0);
    for (int n = 1; n <= 8; ++n) {
      EXPECT_EQ(birkhoff_sum(w, one, 0, n, x), 0.75 * n);
      // ones among the first n symbols; symbol j of word x is read off the trajectory
      int ones = 0;
      Index y = x;
      for (int j = 0; j < n; ++j) {
        ones += w.space(static_cast<std::size_t>(j)).coordinates()[y] == 1.0 ? 1 : 0;
        if (j + 1 < n) y = w.map(static_cast<std::size_t>(j))[y];
      }
      EXPECT_EQ(birkhoff_sum(w, first, 0, n, x), ones);
    }
  }
  EXPECT_THROW(birkhoff_sum(w, one, 0, 9, 0), HorizonError);
}

TEST(Potential, TableAndVectorAgreeWithScalar) {
  std::mt19937_64 rng(41);
  const auto sys = oracle::random_system(rng, 6, 9);
  const auto f = dyadic_potential(sys, rng);
  const auto table = birkhoff_table(sys, f, 0);
  for (int n = 0; n <= sys.max_depth(); ++n) {
    const auto row = birkhoff_sums(sys, f, 0, n);
    for (Index x = 0; x < sys.space(0).size(); ++x) {
      EXPECT_EQ(row[x], birkhoff_sum(sys, f, 0, n, x));
      EXPECT_EQ(table[static_cast<std::size_t>(n)][x], row[x]);
    }
  }
}

TEST(Potential, BirkhoffAdditivityAndBounds) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const auto sys = oracle::random_system(rng, 7, 8);
    const auto f = dyadic_potential(sys, rng);
    const auto g = dyadic_potential(sys, rng);
    const double gap = sup_norm(f - g);
    for (Index x = 0; x < sys.space(0).size(); ++x)
      for (int n = 0; n <= 7; ++n)
        for (int m = 0; n + m <= 7; ++m) {
          double rhs = birkhoff_sum(sys, f, 0, n, x);
          if (m > 0) {
            const Index tx = sys.compose(0, static_cast<std::size_t>(n))[x];
            rhs += birkhoff_sum(sys, f, static_cast<std::size_t>(n), m, tx);
          }
          ASSERT_EQ(birkhoff_sum(sys, f, 0, n + m, x), rhs);
        }
    for (Index x = 0; x < sys.space(0).size(); ++x)
      for (int n = 1; n <= 7; ++n)
        ASSERT_LE(std::abs(birkhoff_sum(sys, f, 0, n, x) - birkhoff_sum(sys, g, 0, n, x)), n * gap);

    // f <= f + |g| pointwise, hence the sums are ordered
    const auto h = f + g.abs();
    ASSERT_TRUE(f.dominated_by(h));
    for (Index x = 0; x < sys.space(0).size(); ++x)
      for (int n = 1; n <= 7; ++n) ASSERT_LE(birkhoff_sum(sys, f, 0, n, x), birkhoff_sum(sys, h, 0, n, x));
  }
}

TEST(Potential, SupNorm) {
  const auto w = oracle::words_system({2, 2, 2}, 3);
  EXPECT_EQ(sup_norm(Potential::zero(w)), 0.0);
  EXPECT_EQ(sup_norm(Potential::constant(w, -2.0)), 2.0);
  std::mt19937_64 rng(47);
  const auto sys = oracle::random_system(rng, 4, 9);
  const auto f = dyadic_potential(sys, rng);
  double brute = 0.0;
  for (std::size_t k = 0; k < f.levels(); ++k)
    for (Index x = 0; x < f.values(k).size(); ++x) brute = std::max(brute, std::abs(f.at(k, x)));
  EXPECT_EQ(sup_norm(f), brute);
}

TEST(Potential, PowerPotential) {
  std::mt19937_64 rng(53);
  const auto w = oracle::words_system(std::vector<int>(8, 2), 8);
  const auto f = dyadic_potential(w, rng);
  const auto f1 = power_potential(w, f, 1);
  for (std::size_t k = 0; k <= w.horizon(); ++k) EXPECT_EQ(f1.values(k), f.values(k));

  const auto c = power_potential(w, Potential::constant(w, 0.5), 3);
  for (std::size_t k = 0; k + 1 < c.levels(); ++k)
    for (double v : c.values(k)) EXPECT_EQ(v, 1.5);

  for (int m : {2, 3}) {
    const auto p = power_system(w, m);
    const auto fm = power_potential(w, f, m);
    for (int trial = 0; trial < 50; ++trial) {
      const Index x = static_cast<Index>(rng() % w.space(0).size());
      const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(w.max_depth() / m));
      EXPECT_EQ(birkhoff_sum(p, fm, 0, n, x), birkhoff_sum(w, f, 0, n * m, x));
    }
  }
}

TEST(Potential, ProductPotential) {
  std::mt19937_64 rng(59);
  const auto a = oracle::words_system({2, 2, 2, 2}, 4);
  const auto b = oracle::words_system({3, 3, 3, 3}, 4);
  const auto ab = product_system(a, b);
  const auto f = dyadic_potential(a, rng);
  const auto g = dyadic_potential(b, rng);
  const auto fg = product_potential(f, g);
  fg.check_compatible(ab);

  const auto lifted = product_potential(f, Potential::zero(b));
  for (Index i = 0; i < 16; ++i)
    for (Index j = 0; j < 81; ++j) EXPECT_EQ(lifted.at(0, product_index(b, 0, i, j)), f.at(0, i));

  const auto consts = product_potential(Potential::constant(a, 0.25), Potential::constant(b, 0.5));
  for (double v : consts.values(2)) EXPECT_EQ(v, 0.75);

  for (int trial = 0; trial < 50; ++trial) {
    const Index i = static_cast<Index>(rng() % 16);
    const Index j = static_cast<Index>(rng() % 81);
    const int n = 1 + static_cast<int>(rng() % 4);
    EXPECT_EQ(birkhoff_sum(ab, fg, 0, n, product_index(b, 0, i, j)),
              birkhoff_sum(a, f, 0, n, i) + birkhoff_sum(b, g, 0, n, j));
  }
}

TEST(Potential, Pullback) {
  std::mt19937_64 rng(61);
  const auto w = oracle::words_system({2, 2, 2, 2}, 4);
  const auto g = dyadic_potential(w, rng);
  std::vector<std::vector<Index>> id, perm;
  for (std::size_t k = 0; k <= w.horizon(); ++k) {
    id.push_back(all_points(w.space(k).size()));
    auto p = id.back();
    std::shuffle(p.begin(), p.end(), rng);
    perm.push_back(p);
  }
  const auto same = pullback(id, g);
  for (std::size_t k = 0; k < g.levels(); ++k) EXPECT_EQ(same.values(k), g.values(k));
  const auto c = pullback(perm, Potential::constant(w, 3.0));
  for (double v : c.values(1)) EXPECT_EQ(v, 3.0);
  const auto moved = pullback(perm, g);
  for (std::size_t k = 0; k < g.levels(); ++k) {
    auto a = moved.values(k);
    auto b = g.values(k);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
  EXPECT_THROW(pullback({id[0]}, g), std::invalid_argument);
}

TEST(Potential, EquicontinuityModulus) {
  const auto w = oracle::words_system(std::vector<int>(5, 2), 5);
  const std::vector<double> grid{0.1, 0.25, 0.5, 0.75, 1.0, 1.5};
  const auto flat = equicontinuity_modulus(w, Potential::constant(w, 2.0), grid);
  for (const auto& [d, om] : flat.rows) EXPECT_EQ(om, 0.0);

  const auto first = first_coordinate_weight(w, 1.0);
  const auto table = equicontinuity_modulus(w, first, grid);
  for (const auto& [delta, omega] : table.rows) {
    double brute = 0.0;
    for (std::size_t k = 0; k <= w.horizon(); ++k)
      for (Index x = 0; x < w.space(k).size(); ++x)
        for (Index y = 0; y < w.space(k).size(); ++y)
          if (w.space(k).dist(x, y) < delta) brute = std::max(brute, std::abs(first.at(k, x) - first.at(k, y)));
    EXPECT_EQ(omega, brute) << "delta " << delta;
  }
  // first symbols agree whenever the distance is at most 1/2
  EXPECT_EQ(table.rows[2].second, 0.0);
  EXPECT_EQ(table.rows[4].second, 0.0);
  EXPECT_EQ(table.rows[5].second, 1.0);
  EXPECT_EQ(table.omega_zero_plus, 0.0);
  EXPECT_THROW(equicontinuity_modulus(w, first, {0.5, 0.25}), std::invalid_argument);

  // discrete stages: nothing closer than 1
  std::vector<double> t{0, 1, 1, 0};
  auto s = std::make_shared<MetricSpace>(MetricSpace::from_table(2, t));
  Nds d("discrete", {s, s}, {{1, 0}});
  Potential f("f", {{0.0, 5.0}, {1.0, -1.0}});
  EXPECT_EQ(modulus_at(d, f, 0.9), 0.0);
  EXPECT_EQ(modulus_at(d, f, 1.1), 5.0);
}
