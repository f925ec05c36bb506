// Copyright 2026 The dpverify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against their OpenMP counterparts.

#include <omp.h>

#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "dpv/dataset_io.h"
#include "dpv/network.h"
#include "dpv/parallel.h"
#include "dpv/session.h"
#include "dpv/verifier.h"

namespace dpv {
namespace {

struct Fixture {
  Network network;
  VerificationSession session;
};

// Dense enough that one src->dst query explores many paths.
const Fixture& Get(size_t nodes) {
  static std::vector<std::pair<size_t, Fixture*>> cache;
  for (auto& [n, f] : cache) {
    if (n == nodes) return *f;
  }
  GeneratorOptions g;
  g.nodes = nodes;
  g.edges = nodes * 3;
  g.rules_per_node = nodes * 4;
  g.width = 24;
  g.seed = 42;
  NetworkSpec spec = *GenerateSynthetic(g);
  // Extra rules toward random neighbors create branching.
  std::mt19937_64 rng(7);
  std::vector<size_t> degree(nodes, 0);
  for (const EdgeSpec& e : spec.edges) {
    ++degree[e.a];
    ++degree[e.b];
  }
  std::vector<Prefix> extra;
  for (size_t i = 0; i < nodes * 8; ++i) {
    const Prefix p(rng() & 0xFFFF, 16);
    extra.push_back(p);
  }
  Network network = *Network::FromSpec(spec);
  for (RouterId r = 0; r < nodes; ++r) {
    for (size_t i = 0; i < 6; ++i) {
      const Prefix& p = extra[rng() % extra.size()];
      (void)network.Apply({UpdateOp::kInsert, r, p,
                           static_cast<PortId>(rng() % degree[r])});
    }
  }
  auto* f = new Fixture{std::move(network), {}};
  f->session = *BuildSession(f->network, f->network.AffectedAll());
  cache.push_back({nodes, f});
  return *f;
}

void BM_ReachabilitySerial(benchmark::State& state) {
  const Fixture& f = Get(state.range(0));
  const RouterId dst = static_cast<RouterId>(state.range(0) - 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        VerifyReachability(f.session, 0, dst, f.session.AllOnes()));
  }
}

void BM_ReachabilityParallel(benchmark::State& state) {
  const Fixture& f = Get(state.range(0));
  const RouterId dst = static_cast<RouterId>(state.range(0) - 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(VerifyReachabilityParallel(
        f.session, 0, dst, f.session.AllOnes()));
  }
  state.counters["threads"] = omp_get_max_threads();
}

void BM_AllPairsSerial(benchmark::State& state) {
  const Fixture& f = Get(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(AllPairsReachability(f.session,
                                                  f.session.AllOnes()));
  }
}

void BM_AllPairsParallel(benchmark::State& state) {
  const Fixture& f = Get(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        AllPairsReachabilityParallel(f.session, f.session.AllOnes()));
  }
  state.counters["threads"] = omp_get_max_threads();
}

BENCHMARK(BM_ReachabilitySerial)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ReachabilityParallel)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AllPairsSerial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AllPairsParallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dpv

BENCHMARK_MAIN();
