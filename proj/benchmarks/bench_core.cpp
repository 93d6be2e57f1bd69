#include <benchmark/benchmark.h>

#include "grip/env.hpp"
#include "grip/mlp.hpp"
#include "grip/proximity.hpp"
#include "grip/rollout.hpp"

namespace {

using namespace grip;

void BM_mlp_forward(benchmark::State& state) {
  int width = static_cast<int>(state.range(0));
  nn::MlpSpec spec{256, {width, width}, 8, nn::Activation::kRelu, 0.0,
                   nn::OutputSquash::kNone};
  Rng rng(1);
  auto params = nn::init_params(spec, rng);
  std::vector<double> x(256, 0.0);
  for (int i = 0; i < 64; ++i) x[static_cast<std::size_t>(4 * i + 1)] = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nn::forward(spec, params, x, false, nullptr));
  }
}
BENCHMARK(BM_mlp_forward)->Arg(64)->Arg(256);

void BM_mlp_backward(benchmark::State& state) {
  int width = static_cast<int>(state.range(0));
  nn::MlpSpec spec{256, {width, width}, 8, nn::Activation::kRelu, 0.0,
                   nn::OutputSquash::kNone};
  Rng rng(1);
  auto params = nn::init_params(spec, rng);
  std::vector<double> x(256, 0.5);
  nn::ForwardTrace trace;
  nn::forward(spec, params, x, false, nullptr, &trace);
  std::vector<double> upstream(8, 1.0);
  std::vector<double> grad(spec.param_count(), 0.0);
  for (auto _ : state) {
    nn::backward(spec, params, trace, upstream, grad);
    benchmark::DoNotOptimize(grad.data());
  }
}
BENCHMARK(BM_mlp_backward)->Arg(64)->Arg(256);

void BM_ensemble_mean(benchmark::State& state) {
  ProximityEnsemble::Options opt;
  ProximityEnsemble ens(256, opt, {}, 3);
  std::vector<double> s(256, 0.0);
  for (int i = 0; i < 64; ++i) s[static_cast<std::size_t>(4 * i + 1)] = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ens.mean_predict(s));
  }
}
BENCHMARK(BM_ensemble_mean);

void BM_grid_step(benchmark::State& state) {
  GridWorld env(8);
  env.reset();
  int i = 0;
  for (auto _ : state) {
    if (env.done()) env.reset();
    benchmark::DoNotOptimize(env.step(static_cast<GridAction>(i++ % 8)));
  }
}
BENCHMARK(BM_grid_step);

void BM_maze_step(benchmark::State& state) {
  PointMaze maze(Layout::parse(PointMaze::default_map()), 3);
  Rng rng(4);
  for (auto _ : state) {
    if (maze.done()) maze.reset();
    benchmark::DoNotOptimize(
        maze.step({uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)}));
  }
}
BENCHMARK(BM_maze_step);

void BM_gae(benchmark::State& state) {
  std::size_t n = 2048;
  std::vector<double> rewards(n, 0.01), values(n + 1, 0.5);
  std::vector<std::uint8_t> dones(n, 0);
  std::vector<double> adv(n), ret(n);
  for (auto _ : state) {
    gae(rewards, values, dones, 0.99, 0.95, adv, ret);
    benchmark::DoNotOptimize(adv.data());
  }
}
BENCHMARK(BM_gae);

}  // namespace

BENCHMARK_MAIN();
