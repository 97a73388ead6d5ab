#include <benchmark/benchmark.h>

#include <random>

#include "ndsp/harness.hpp"
#include "ndsp/measure_pressures.hpp"
#include "ndsp/model_zoo.hpp"
#include "ndsp/pressure_estimators.hpp"
#include "ndsp/solvers.hpp"
#include "ndsp/span_sep.hpp"

using namespace ndsp;

namespace {

CoverProblem random_cover(std::mt19937_64& rng, std::size_t elements, std::size_t candidates) {
  CoverProblem p;
  p.elements = elements;
  std::uniform_real_distribution<double> w(0.5, 2.0);
  for (std::size_t c = 0; c < candidates; ++c) {
    PointSet s;
    for (Index e = 0; e < elements; ++e)
      if (rng() % 4 == 0) s.push_back(e);
    p.sets.push_back(s);
    p.weights.push_back(w(rng));
  }
  for (Index e = 0; e < elements; ++e) {  // keep it coverable
    p.sets.push_back({e});
    p.weights.push_back(3.0);
  }
  return p;
}

ConflictGraph random_graph(std::mt19937_64& rng, std::size_t vertices, double density) {
  ConflictGraph g;
  g.adjacency.resize(vertices);
  std::bernoulli_distribution edge(density);
  for (Index u = 0; u < vertices; ++u)
    for (Index v = u + 1; v < vertices; ++v)
      if (edge(rng)) {
        g.adjacency[u].push_back(v);
        g.adjacency[v].push_back(u);
      }
  std::uniform_real_distribution<double> w(0.5, 2.0);
  for (std::size_t v = 0; v < vertices; ++v) g.weights.push_back(w(rng));
  return g;
}

Schedule schedule(int n_max, std::vector<double> eps, SolveMode mode = {}) {
  Schedule s;
  for (int n = 1; n <= n_max; ++n) s.n_list.push_back(n);
  s.eps_list = std::move(eps);
  s.mode = mode;
  return s;
}

}  // namespace

static void BM_ExactCover(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto p = random_cover(rng, static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(min_weight_cover(p, {SolveKind::exact, 64}).objective);
}
BENCHMARK(BM_ExactCover)->Arg(8)->Arg(14)->Arg(20);

static void BM_GreedyCover(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto p = random_cover(rng, static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(min_weight_cover(p, SolveMode::greedy()).objective);
}
BENCHMARK(BM_GreedyCover)->Arg(20)->Arg(200);

static void BM_ExactIndependent(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto g = random_graph(rng, static_cast<std::size_t>(state.range(0)), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(max_weight_independent(g, {SolveKind::exact, 64}).objective);
}
BENCHMARK(BM_ExactIndependent)->Arg(8)->Arg(14)->Arg(20);

static void BM_SymbolicSeparated(benchmark::State& state) {
  const auto nds = make_symbolic({2}, 10).system;
  const auto Z = all_points(nds.space(0).size());
  const auto f = Potential::zero(nds);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(P_n(nds, f, Z, n, 0.5, {}));
}
BENCHMARK(BM_SymbolicSeparated)->Arg(2)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_CircleGridGreedy(benchmark::State& state) {
  const auto grid = static_cast<std::size_t>(state.range(0));
  const auto nds = make_circle_expanding({2}, grid, 5).system;
  const auto Z = all_points(grid);
  const auto f = Potential::zero(nds);
  for (auto _ : state) benchmark::DoNotOptimize(P_n(nds, f, Z, 6, 1.0 / 64, SolveMode::greedy()));
}
BENCHMARK(BM_CircleGridGreedy)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_CapacityPressures(benchmark::State& state) {
  const auto nds = make_symbolic({2, 3}, 8).system;
  const auto Z = all_points(nds.space(0).size());
  const auto f = first_coordinate_weight(nds, 1.0);
  const auto sch = schedule(8, {0.75, 0.5});
  for (auto _ : state) benchmark::DoNotOptimize(capacity_pressures(nds, f, Z, sch).sep_upper.value);
}
BENCHMARK(BM_CapacityPressures)->Unit(benchmark::kMillisecond);

static void BM_BowenPressure(benchmark::State& state) {
  const auto nds = make_symbolic({2}, static_cast<int>(state.range(0))).system;
  const auto Z = all_points(nds.space(0).size());
  const auto f = Potential::zero(nds);
  const auto sch = schedule(static_cast<int>(state.range(0)), {0.5});
  for (auto _ : state) benchmark::DoNotOptimize(bowen_pressure(nds, f, Z, sch).value);
}
BENCHMARK(BM_BowenPressure)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_PackingPressure(benchmark::State& state) {
  const auto nds = make_symbolic({2}, static_cast<int>(state.range(0))).system;
  const auto Z = all_points(nds.space(0).size());
  const auto f = Potential::zero(nds);
  const auto sch = schedule(static_cast<int>(state.range(0)), {0.5});
  for (auto _ : state) benchmark::DoNotOptimize(packing_pressure(nds, f, Z, sch).value);
}
BENCHMARK(BM_PackingPressure)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_InequalityChainCheck(benchmark::State& state) {
  HarnessConfig cfg;
  cfg.schedule = schedule(5, {0.45, 0.2, 0.05});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto nds = make_random_system(seed, 5, 10);
    HarnessSystem h{"random" + std::to_string(seed), nds, {Potential::zero(nds).with_label("zero")}, {}};
    cfg.systems.push_back(std::move(h));
  }
  cfg.threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(check_inequality_chain(cfg).assertions);
}
BENCHMARK(BM_InequalityChainCheck)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
