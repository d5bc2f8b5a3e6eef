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

#include <doctest.h>

#include <stdexcept>

#include "himec/exact_solver.hpp"
#include "support/brute_force.hpp"
#include "support/fixtures.hpp"

using namespace himec;
using namespace himec::testing;

namespace {

struct Built {
  Catalog cat;
  Topology topo;
  BidBook book;
  CostTables tables;
  Built(const RandomInstance& inst)
      : cat(inst.catalog),
        topo(inst.topology),
        book(build_bid_book(inst.bids, topo, cat)),
        tables(build_cost_tables(topo, cat)) {}
  Instance instance(SolveLimits limits = {}) const {
    return Instance{topo, cat, book, tables, limits};
  }
};

}  // namespace

TEST_CASE("an empty frame solves to the all-reject solution") {
  RandomInstance inst = random_instance(1, 0);
  Built b(inst);
  for (auto* solve : {solve_exhaustive, solve_bnb}) {
    SolveReport report = solve(b.instance());
    CHECK(report.optimal);
    CHECK(report.breakdown.profit() == 0);
    CHECK(report.solution.served_count() == 0);
    CHECK(report.solution.placements.empty());
  }
}

TEST_CASE("a single profitable bid lands on the cheapest machine") {
  Catalog cat = small_catalog();
  TopoSpec spec;
  spec.aps = 1;
  spec.pops = {{0}};
  Topology topo = make_topology(cat, spec);
  std::vector<Bid> bids = {{0, 0, 0, 500'000}};
  BidBook book = build_bid_book(bids, topo, cat);
  CostTables tables = build_cost_tables(topo, cat);

  SolveReport report = solve_bnb({topo, cat, book, tables, {}});
  CHECK(report.optimal);
  REQUIRE(report.solution.placements.size() == 1);
  const Placement& pl = report.solution.placements[0];
  CHECK(pl.cloudlet == 0);  // field: same energy price, no QoS penalty
  CHECK(report.breakdown.revenue == 500'000);
  CHECK(report.breakdown.electricity ==
        tables.pm_idle_energy[0][0] + tables.vm_energy[0][0]);
  CHECK(report.breakdown.lost_revenue == 0);
  CHECK(check_feasibility(report.solution, book, topo, cat).empty());
}

TEST_CASE("a bid priced below its serving cost is rejected") {
  Catalog cat = small_catalog();
  TopoSpec spec;
  spec.aps = 1;
  spec.pops = {{0}};
  Topology topo = make_topology(cat, spec);
  CostTables tables = build_cost_tables(topo, cat);
  Money cheapest = tables.pm_idle_energy[0][0] + tables.vm_energy[0][0];
  std::vector<Bid> bids = {{0, 0, 0, cheapest - 1}};
  BidBook book = build_bid_book(bids, topo, cat);

  for (auto* solve : {solve_exhaustive, solve_bnb}) {
    SolveReport report = solve({topo, cat, book, tables, {}});
    CHECK(report.optimal);
    CHECK(report.breakdown.profit() == 0);
    CHECK(report.solution.served_count() == 0);
  }
}

TEST_CASE("the exhaustive solver refuses more than 12 bids") {
  RandomInstance inst = random_instance(2, 13);
  Built b(inst);
  CHECK_THROWS_AS(solve_exhaustive(b.instance()), std::invalid_argument);
}

TEST_CASE("both solvers match the independent brute-force oracle") {
  for (std::uint64_t seed = 100; seed < 125; ++seed) {
    RandomInstance inst = random_instance(seed, 3 + static_cast<int>(seed % 5));
    Built b(inst);
    BruteBest oracle = brute_force_best(inst.bids, b.topo, b.cat);

    SolveReport ex = solve_exhaustive(b.instance());
    SolveReport bb = solve_bnb(b.instance());
    CAPTURE(seed);
    CHECK(ex.optimal);
    CHECK(bb.optimal);
    CHECK(ex.breakdown.profit() == oracle.profit);
    CHECK(bb.breakdown.profit() == oracle.profit);
    CHECK(check_feasibility(ex.solution, b.book, b.topo, b.cat).empty());
    CHECK(check_feasibility(bb.solution, b.book, b.topo, b.cat).empty());
  }
}

TEST_CASE("branch and bound agrees with exhaustive search bit for bit") {
  for (std::uint64_t seed = 300; seed < 315; ++seed) {
    RandomInstance inst = random_instance(seed, 4 + static_cast<int>(seed % 7));
    Built b(inst);
    SolveReport ex = solve_exhaustive(b.instance());
    SolveReport bb = solve_bnb(b.instance());
    CAPTURE(seed);
    CHECK(ex.breakdown.profit() == bb.breakdown.profit());
    CHECK(ex.breakdown.revenue == bb.breakdown.revenue);
    CHECK(ex.breakdown.electricity == bb.breakdown.electricity);
    CHECK(ex.breakdown.lost_revenue == bb.breakdown.lost_revenue);
  }
}

TEST_CASE("adding a bid never lowers the optimal profit") {
  for (std::uint64_t seed = 400; seed < 410; ++seed) {
    RandomInstance inst = random_instance(seed, 6);
    Built all(inst);
    RandomInstance fewer = inst;
    fewer.bids.pop_back();
    Built some(fewer);
    CAPTURE(seed);
    CHECK(solve_bnb(all.instance()).breakdown.profit() >=
          solve_bnb(some.instance()).breakdown.profit());
  }
}

TEST_CASE("an exhausted node budget returns a feasible incumbent, honestly flagged") {
  RandomInstance inst = random_instance(42, 9);
  Built b(inst);
  SolveLimits tiny;
  tiny.node_budget = 1;
  SolveReport report = solve_bnb(b.instance(tiny));
  CHECK_FALSE(report.optimal);
  CHECK(report.breakdown.profit() >= 0);  // never worse than all-reject
  CHECK(check_feasibility(report.solution, b.book, b.topo, b.cat).empty());

  SolveLimits zero;
  zero.node_budget = 0;
  CHECK_THROWS_AS(solve_bnb(b.instance(zero)), std::invalid_argument);
}

TEST_CASE("solving the same instance twice is bit-for-bit deterministic") {
  RandomInstance inst = random_instance(77, 8);
  Built b(inst);
  SolveReport a = solve_bnb(b.instance());
  SolveReport c = solve_bnb(b.instance());
  CHECK(a.solution.canonical_key() == c.solution.canonical_key());
  CHECK(a.breakdown.profit() == c.breakdown.profit());

  SolveReport e1 = solve_exhaustive(b.instance());
  SolveReport e2 = solve_exhaustive(b.instance());
  CHECK(e1.solution.canonical_key() == e2.solution.canonical_key());
}

TEST_CASE("the reported breakdown is recomputed from the returned solution") {
  for (std::uint64_t seed = 500; seed < 510; ++seed) {
    RandomInstance inst = random_instance(seed, 7);
    Built b(inst);
    SolveReport report = solve_bnb(b.instance());
    ProfitBreakdown again = profit(report.solution, b.book, b.topo, b.tables);
    CHECK(report.breakdown.revenue == again.revenue);
    CHECK(report.breakdown.electricity == again.electricity);
    CHECK(report.breakdown.lost_revenue == again.lost_revenue);
  }
}
