#include <cstdlib>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "marsupial/marsupial.hpp"

using namespace marsupial;

namespace {

ScenarioFile load(const char* name) {
  auto r = load_scenario(std::string(MARSUPIAL_SCENARIO_DIR) + "/" + name);
  if (!r.ok()) std::abort();
  return *r.scenario;
}

void BM_EvalP(benchmark::State& state) {
  const Params p{};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  std::vector<double> r(1024), s(1024);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = u(rng), s[i] = u(rng);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_P(r[i], s[i], p));
    i = (i + 1) & 1023;
  }
}
BENCHMARK(BM_EvalP);

void BM_FilterThreeObstacles(benchmark::State& state) {
  const std::vector<Obstacle> obs = {{Eigen::Vector2d(4, 1), 1.5},
                                     {Eigen::Vector2d(-3, 2), 1.0},
                                     {Eigen::Vector2d(0, -5), 2.0}};
  const Vec x = Eigen::Vector2d(0.5, -0.5);
  const Vec u = Eigen::Vector2d(12, -4);
  const CbfConfig cfg{0.7, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(filter(u, x, obs, cfg));
}
BENCHMARK(BM_FilterThreeObstacles);

void BM_ReferenceRun(benchmark::State& state) {
  const auto s = load("paper_3d.scn");
  const auto init = s.initial_state();
  const auto cfg = s.sim_config();
  for (auto _ : state) benchmark::DoNotOptimize(run(init, cfg, s.params));
}
BENCHMARK(BM_ReferenceRun)->Unit(benchmark::kMillisecond);

void BM_ObstacleRun(benchmark::State& state) {
  const auto s = load("obstacles_2d.scn");
  const auto init = s.initial_state();
  const auto cfg = s.sim_config();
  for (auto _ : state) benchmark::DoNotOptimize(run(init, cfg, s.params));
}
BENCHMARK(BM_ObstacleRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
