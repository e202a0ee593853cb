#include <benchmark/benchmark.h>

#include "uavnet/baselines.hpp"
#include "uavnet/dqn.hpp"
#include "uavnet/knn.hpp"
#include "uavnet/mlp.hpp"

using namespace uavnet;

namespace {

ChannelSet random_channels(int cells, int antennas, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1e-5);
  ChannelSet ch(cells, antennas);
  for (int b = 0; b < cells; ++b)
    for (int u = 0; u < cells; ++u) {
      CVector h(antennas);
      for (int i = 0; i < antennas; ++i) h[i] = {n(rng), n(rng)};
      ch.at(b, u) = h;
    }
  return ch;
}

// Full grid of (|P| * |W|)^L joint configurations.
void BM_BruteForce(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  Rng rng(1);
  const ChannelSet ch = random_channels(cells, 4, rng);
  const Codebook cb = dft_codebook(4, 8);
  const PowerSet p = PowerSet::uniform(4);
  std::uint64_t evaluated = 0;
  for (auto _ : state) {
    const auto r = brute_force_search(ch, cb, p, 1e-10);
    evaluated = r.evaluated;
    benchmark::DoNotOptimize(r.best_sum_rate);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(evaluated) * state.iterations());
}
BENCHMARK(BM_BruteForce)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

// One Q-network forward pass over the joint action space of L cells.
void BM_MlpForward(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  Rng rng(2);
  const Mlp net = Mlp::he_init({5 * cells, 128, 128, static_cast<int>(action_space_size(cells))}, rng);
  const Eigen::VectorXd x = Eigen::VectorXd::Random(5 * cells);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
}
BENCHMARK(BM_MlpForward)->DenseRange(1, 5);

void BM_DqnTrainStep(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  DqnConfig c;
  DqnAgent agent(5 * cells, action_space_size(cells), c, 3);
  Rng rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> s(static_cast<std::size_t>(5 * cells)), s2(s.size());
    for (auto& x : s) x = u(rng);
    for (auto& x : s2) x = u(rng);
    agent.observe({s, static_cast<std::uint64_t>(i) % action_space_size(cells), u(rng), s2, false});
  }
  for (auto _ : state) benchmark::DoNotOptimize(agent.train_step(rng));
}
BENCHMARK(BM_DqnTrainStep)->Arg(2)->Arg(5);

// k nearest corners of {0,1}^(2L); L <= 8 enumerates, larger L uses the heap.
void BM_Knn(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  Rng rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> proto(static_cast<std::size_t>(2 * cells));
  for (auto& x : proto) x = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(knn_corner_indices(proto, k));
}
BENCHMARK(BM_Knn)->Args({3, 8})->Args({8, 8})->Args({8, 64})->Args({16, 8})->Args({30, 64});

}  // namespace

BENCHMARK_MAIN();
