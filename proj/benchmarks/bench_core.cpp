#include <benchmark/benchmark.h>

#include "depnet/depnet.hpp"

using namespace depnet;

namespace {

VariableSpace binary_space(int n) { return VariableSpace(std::vector<std::int32_t>(n, 2)); }

DenseDistribution bench_distribution(int n_vars, std::uint64_t seed) {
  Rng rng(seed);
  const VariableSpace space = binary_space(n_vars);
  std::vector<double> w(space.total_states());
  double z = 0.0;
  for (double& v : w) {
    v = 0.05 + rng.next_unit();
    z += v;
  }
  for (double& v : w) v /= z;
  return DenseDistribution(space, std::move(w));
}

DependencyNetwork bench_network(int n_vars, std::uint64_t seed) {
  const Dataset data = sample_exact(bench_distribution(n_vars, seed), 5000, seed + 1);
  return learn_network(data, LearnConfig{});
}

void BM_MProject(benchmark::State& state) {
  const int n_vars = static_cast<int>(state.range(0));
  const DenseDistribution p = bench_distribution(n_vars, 1);
  const DependencyNetwork net = bench_network(n_vars, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m_project(p, 0, net.node(0).table, net.node(0).source));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.size()));
}
BENCHMARK(BM_MProject)->Arg(8)->Arg(12);

void BM_TransitionApply(benchmark::State& state) {
  const int n_vars = static_cast<int>(state.range(0));
  const DependencyNetwork net = bench_network(n_vars, 3);
  const TransitionOperator t = TransitionOperator::random_scan(net);
  std::vector<double> in(net.space().total_states(), 1.0 / net.space().total_states());
  std::vector<double> out(in.size());
  for (auto _ : state) {
    t.apply_raw(in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size()));
}
BENCHMARK(BM_TransitionApply)->Arg(8)->Arg(12);

void BM_PseudoGibbs(benchmark::State& state) {
  const DependencyNetwork net = bench_network(10, 4);
  const ScanPolicy policy = ScanPolicy::random_uniform(10);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pseudo_gibbs(net, policy, 10'000, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * 10'000);
}
BENCHMARK(BM_PseudoGibbs);

void BM_StationaryDirect(benchmark::State& state) {
  const int n_vars = static_cast<int>(state.range(0));
  const DependencyNetwork net = bench_network(n_vars, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stationary_random_scan(net, StationaryMethod::kDirect));
  }
}
BENCHMARK(BM_StationaryDirect)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_StationaryPower(benchmark::State& state) {
  const int n_vars = static_cast<int>(state.range(0));
  const DependencyNetwork net = bench_network(n_vars, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stationary_random_scan(net, StationaryMethod::kPower));
  }
}
BENCHMARK(BM_StationaryPower)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_LearnNode(benchmark::State& state) {
  const Dataset data = sample_exact(bench_distribution(10, 6), 10'000, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(structure_learn_node(data, 0, LearnConfig{}));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_LearnNode)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
