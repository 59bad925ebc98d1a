// Copyright 2026 The tempord Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "tempord/dd_model.hpp"
#include "tempord/graph.hpp"
#include "tempord/optimizer.hpp"
#include "tempord/puv_matrix.hpp"
#include "tempord/rng.hpp"
#include "tempord/sampler.hpp"

namespace {

using namespace tempord;

Graph dd_graph(std::size_t n, std::size_t n0, std::uint64_t seed) {
  Rng rng(seed);
  const Graph seed_graph = erdos_renyi_seed(n0, 0.6, rng);
  return generate(DDParams{0.3, 1.0, n, n0}, seed_graph, rng).graph;
}

void BM_StepLikelihood(benchmark::State& state) {
  const Graph h = dd_graph(static_cast<std::size_t>(state.range(0)), 10, 7);
  PeelingState peel(h, 0.3, 1.0);
  const NodeId v = static_cast<NodeId>(h.capacity() - 1);
  for (auto _ : state) benchmark::DoNotOptimize(peel.log_step_likelihood(v));
}
BENCHMARK(BM_StepLikelihood)->Arg(50)->Arg(200)->Arg(1000);

void BM_SamplePath(benchmark::State& state) {
  const Graph h = dd_graph(static_cast<std::size_t>(state.range(0)), 10, 11);
  PathSampler sampler(h, 0.3, 1.0, Scheme::local_unif);
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.run(rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SamplePath)->Arg(50)->Arg(200);

void BM_EstimatePuv(benchmark::State& state) {
  const Graph h = dd_graph(50, 10, 5);
  SamplerOptions opt;
  opt.paths = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_puv(h, 0.3, 1.0, opt).weights.paths);
}
BENCHMARK(BM_EstimatePuv)->Arg(1000)->Unit(benchmark::kMillisecond);

// random consistent-looking matrix: p(u,v) from a noisy latent score
PuvMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  PuvMatrix m(n, 0);
  std::vector<double> score(n);
  for (auto& s : score) s = uniform01(rng);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      m.set(u, v, 1.0 / (1.0 + std::exp(4.0 * (score[v] - score[u]))));
  return m;
}

void BM_SolveLp(benchmark::State& state) {
  const PuvMatrix m = random_matrix(static_cast<std::size_t>(state.range(0)), 9);
  PrecisionProgram prog{&m, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(prog).objective);
}
BENCHMARK(BM_SolveLp)->Arg(8)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_BruteforceIp(benchmark::State& state) {
  const PuvMatrix m = random_matrix(6, 13);
  PrecisionProgram prog{&m, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(solve_ip_bruteforce(prog).objective);
}
BENCHMARK(BM_BruteforceIp)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
