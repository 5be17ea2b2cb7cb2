#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "lnu/cuts.hpp"
#include "lnu/dataset.hpp"
#include "lnu/fixtures.hpp"
#include "lnu/gcn.hpp"
#include "lnu/harmonic.hpp"
#include "lnu/nonuniformity.hpp"

namespace {

std::mt19937_64 rng_for(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), 17u};
  return std::mt19937_64(seq);
}

// Dense path below kDenseSolveLimit interior nodes, CG above it.
void BM_HarmonicSolve(benchmark::State& state) {
  auto rng = rng_for(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const lnu::Graph g = lnu::fixtures::random_connected_graph(n, 4.0 / static_cast<double>(n), rng);
  lnu::NodeSet o0(n);
  lnu::NodeSet o1(n);
  for (std::size_t v = 0; v < n / 20; ++v) {
    o0.insert(static_cast<lnu::NodeId>(2 * v));
    o1.insert(static_cast<lnu::NodeId>(2 * v + 1));
  }
  const lnu::HarmonicProblem p(g, o0, o1);
  for (auto _ : state) benchmark::DoNotOptimize(lnu::solve_harmonic(p));
}
BENCHMARK(BM_HarmonicSolve)->Arg(200)->Arg(1000)->Arg(2000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_TrainingEpoch(benchmark::State& state) {
  lnu::SbmParams params;
  params.block_sizes.assign(4, static_cast<std::size_t>(state.range(0)) / 4);
  params.seed = 2;
  const lnu::Dataset data = lnu::generate_sbm(params);
  const lnu::Split split = lnu::make_split(data.labels, 4, 20, 100, 200, 2);
  const lnu::PropagationMatrix a = lnu::normalize_adjacency(data.graph);
  const lnu::GcnParams w = lnu::glorot_init(data.features.cols(), 16, 4, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lnu::loss_and_gradients(a, data.features, w, data.labels, split.train, 5e-4));
  }
}
BENCHMARK(BM_TrainingEpoch)->Arg(400)->Arg(2000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_Cheeger(benchmark::State& state) {
  auto rng = rng_for(3);
  const lnu::Graph g = lnu::fixtures::random_connected_graph(static_cast<std::size_t>(state.range(0)), 0.2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(lnu::cheeger_constant(g));
}
BENCHMARK(BM_Cheeger)->DenseRange(12, 20, 4)->Unit(benchmark::kMillisecond);

void BM_Coupling(benchmark::State& state) {
  auto rng = rng_for(4);
  const auto k = static_cast<std::size_t>(state.range(0));
  std::exponential_distribution<double> e(1.0);
  std::vector<double> mu(k);
  std::vector<double> nu(k);
  double smu = 0.0;
  double snu = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    smu += mu[i] = e(rng);
    snu += nu[i] = e(rng);
  }
  for (std::size_t i = 0; i < k; ++i) {
    mu[i] /= smu;
    nu[i] /= snu;
  }
  for (auto _ : state) benchmark::DoNotOptimize(lnu::optimal_coupling(mu, nu));
}
BENCHMARK(BM_Coupling)->Arg(4)->Arg(10)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
