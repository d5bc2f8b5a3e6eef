// Copyright 2026 the himec-sim authors
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

#include <random>
#include <vector>

#include "himec/bandwidth.hpp"
#include "himec/bids.hpp"
#include "himec/exact_solver.hpp"
#include "himec/heuristics.hpp"
#include "support/fixtures.hpp"

namespace {

using namespace himec;
using himec::testing::TopoSpec;

std::vector<Bid> bench_bids(int n, int aps, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::vector<Bid> bids;
  for (int i = 0; i < n; ++i)
    bids.push_back({i, static_cast<int>(g() % static_cast<unsigned>(aps)),
                    static_cast<int>(g() % 3), static_cast<Money>(g() % 2'000'000)});
  return bids;
}

TopoSpec provider_spec() {
  TopoSpec spec;
  spec.aps = 8;
  spec.pops = {{0, 1, 2, 3}, {4, 5, 6, 7}};
  spec.field_count = 2;
  spec.shallow_count = 8;
  spec.deep_count = 64;
  return spec;
}

void BM_HeuristicFrame(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Catalog cat = himec::testing::reference_catalog();
  Topology topo = himec::testing::make_topology(cat, provider_spec());
  std::vector<Bid> bids = bench_bids(n, topo.num_aps(), 11);
  for (auto _ : state) {
    BidBook book = build_bid_book(bids, topo, cat);
    HeuristicResult out = run_heuristic(book, topo, cat);
    benchmark::DoNotOptimize(out.distribution.assigned);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_HeuristicFrame)->Arg(50)->Arg(200)->Arg(500)->Arg(2000)
    ->Unit(benchmark::kMillisecond);

void BM_ExactSmallFrame(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Catalog cat = himec::testing::small_catalog();
  TopoSpec spec;  // 2 APs, one pop, defaults elsewhere
  Topology topo = himec::testing::make_topology(cat, spec);
  std::vector<Bid> bids = bench_bids(n, topo.num_aps(), 17);
  BidBook book = build_bid_book(bids, topo, cat);
  CostTables tables = build_cost_tables(topo, cat);
  for (auto _ : state) {
    SolveReport rep = solve_bnb({topo, cat, book, tables, {}});
    benchmark::DoNotOptimize(rep.breakdown.revenue);
  }
}
BENCHMARK(BM_ExactSmallFrame)->Arg(6)->Arg(10)->Arg(14)
    ->Unit(benchmark::kMillisecond);

void BM_BandwidthSlot(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  std::mt19937_64 g(23);
  FlowSet fs;
  fs.capacity.assign(9, 0.0);
  double ceiling_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    Flow f;
    f.bid_id = i;
    f.weight = 1.0 + static_cast<double>(g() % 100) / 50.0;
    f.load = 1e6 * static_cast<double>(1 + g() % 50);
    f.lower = 1e5;
    f.upper = 1e8;
    f.links = {static_cast<int>(g() % 9)};
    ceiling_sum += f.upper;
    fs.flows.push_back(f);
  }
  for (double& c : fs.capacity) c = ceiling_sum / 4.0;
  for (auto _ : state) {
    Allocation alloc = solve_allocation(fs);
    benchmark::DoNotOptimize(alloc.kkt.objective);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_BandwidthSlot)->Arg(5)->Arg(20)->Arg(100)
    ->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
