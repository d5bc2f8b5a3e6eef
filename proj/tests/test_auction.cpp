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

#include <algorithm>
#include <random>
#include <stdexcept>

#include "himec/objective.hpp"
#include "support/fixtures.hpp"

using namespace himec;
using namespace himec::testing;

namespace {

// One AP, one pop, full-size PMs: the smallest complete hierarchy.
struct SinglePair {
  Catalog cat = reference_catalog();
  Topology topo;
  SinglePair() {
    TopoSpec spec;
    spec.aps = 1;
    spec.pops = {{0}};
    topo = make_topology(cat, spec);
  }
};

}  // namespace

TEST_CASE("bid book ranks prices descending with id as tiebreak") {
  SinglePair fix;
  std::vector<Bid> bids = {
      {0, 0, 0, 80}, {1, 0, 0, 100}, {2, 0, 0, 80}, {3, 0, 1, 50},
  };
  BidBook book = build_bid_book(bids, fix.topo, fix.cat);
  const BidSequence& seq = book.pairs[book.pair_index(0, 0)];
  REQUIRE(seq.size() == 3);
  CHECK(book.bids[seq.bid_index[0]].id == 1);   // 100
  CHECK(book.bids[seq.bid_index[1]].id == 0);   // 80, lower id first
  CHECK(book.bids[seq.bid_index[2]].id == 2);   // 80
  CHECK(seq.price_at_rank(1) == 100);
  CHECK(book.rank_of_bid[0] == 2);
  CHECK(book.rank_of_bid[1] == 1);
  CHECK(book.pair_of_bid[3] == book.pair_index(0, 1));
}

TEST_CASE("bid book rejects negative prices and unknown references") {
  SinglePair fix;
  CHECK_THROWS_AS(build_bid_book({{0, 0, 0, -1}}, fix.topo, fix.cat), std::invalid_argument);
  CHECK_THROWS_AS(build_bid_book({{0, 5, 0, 1}}, fix.topo, fix.cat), std::invalid_argument);
  CHECK_THROWS_AS(build_bid_book({{0, 0, 9, 1}}, fix.topo, fix.cat), std::invalid_argument);
}

TEST_CASE("telescoped revenue equals the per-rank sum on every cut") {
  SinglePair fix;
  std::mt19937_64 g(7);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(g() % 9);
    std::vector<Bid> bids;
    for (int i = 0; i < n; ++i)
      bids.push_back({i, 0, 0, static_cast<Money>(g() % 1'000'000)});
    BidBook book = build_bid_book(bids, fix.topo, fix.cat);
    const BidSequence& seq = book.pairs[book.pair_index(0, 0)];
    for (int cut = 0; cut <= n; ++cut) {
      Solution sol = Solution::empty_for(book, fix.topo);
      sol.set_cut(book.pair_index(0, 0), cut);
      CHECK(revenue(sol, book) == rank_sum_revenue(seq.prices, cut));
    }
  }
}

TEST_CASE("revenue is invariant under permuting equal-priced bids") {
  SinglePair fix;
  std::vector<Bid> bids = {{0, 0, 0, 70}, {1, 0, 0, 70}, {2, 0, 0, 70}};
  std::vector<int> order = {0, 1, 2};
  Money expected = -1;
  do {
    std::vector<Bid> shuffled;
    for (int i : order) shuffled.push_back(bids[i]);
    BidBook book = build_bid_book(shuffled, fix.topo, fix.cat);
    Solution sol = Solution::empty_for(book, fix.topo);
    sol.set_cut(0, 2);
    Money r = revenue(sol, book);
    if (expected < 0) expected = r;
    CHECK(r == expected);
  } while (std::next_permutation(order.begin(), order.end()));
  CHECK(expected == 140);
}

TEST_CASE("revenue rejects non-monotone serve flags") {
  SinglePair fix;
  std::vector<Bid> bids = {{0, 0, 0, 10}, {1, 0, 0, 5}};
  BidBook book = build_bid_book(bids, fix.topo, fix.cat);
  Solution sol = Solution::empty_for(book, fix.topo);
  sol.served[0] = {0, 1};
  CHECK_THROWS_AS(revenue(sol, book), std::invalid_argument);
}

// Hand-checked energy bill: one pm.standard switched on (idle 0.7 kW) hosting
// one m3.large (peak 0.0335 kW), q = 2 cents/kWh, PUE 1.2, 300 s frame.
//   idle: 0.7 * 1.2 * 2 / 12 = 0.14 cents      = 140000 micros
//   vm:   0.0335 * 1.2 * 2 / 12 = 0.0067 cents =   6700 micros
TEST_CASE("electricity cost matches the hand-computed frame bill") {
  SinglePair fix;
  std::vector<Bid> bids = {{0, 0, 0, 500'000}};
  BidBook book = build_bid_book(bids, fix.topo, fix.cat);
  CostTables tables = build_cost_tables(fix.topo, fix.cat);
  CHECK(tables.pm_idle_energy[0][0] == 140'000);
  CHECK(tables.vm_energy[0][0] == 6'700);

  Solution sol = Solution::empty_for(book, fix.topo);
  sol.set_cut(book.pair_index(0, 0), 1);
  sol.pm_on[0][0][0] = 1;
  sol.placements = {{0, 0, 0, 1}};
  CHECK(electricity_cost(sol, book, fix.topo, tables) == 146'700);
  CHECK(lost_revenue(sol, book, fix.topo, tables) == 0);  // field placement

  ProfitBreakdown pb = profit(sol, book, fix.topo, tables);
  CHECK(pb.revenue == 500'000);
  CHECK(pb.profit() == 500'000 - 146'700);
}

// Same bid parked one tier up / two tiers up. With D = 0.75 * T * r_min the
// penalty is xi * 0.75 exactly: 675 micro-cents shallow, 1350 deep.
TEST_CASE("lost revenue matches the hand-computed QoS penalty") {
  SinglePair fix;
  CostTables tables = build_cost_tables(fix.topo, fix.cat);
  CHECK(tables.lr_shallow[0][0] == 675);
  CHECK(tables.lr_deep[0][0] == 1350);

  std::vector<Bid> bids = {{0, 0, 0, 500'000}};
  BidBook book = build_bid_book(bids, fix.topo, fix.cat);
  Solution sol = Solution::empty_for(book, fix.topo);
  sol.set_cut(book.pair_index(0, 0), 1);
  int deep = fix.topo.deep_cloudlet();
  sol.pm_on[deep][0][0] = 1;
  sol.placements = {{0, deep, 0, 1}};
  CHECK(lost_revenue(sol, book, fix.topo, tables) == 1350);
}

TEST_CASE("electricity cost requires the hosting machine to be on") {
  SinglePair fix;
  std::vector<Bid> bids = {{0, 0, 0, 500'000}};
  BidBook book = build_bid_book(bids, fix.topo, fix.cat);
  CostTables tables = build_cost_tables(fix.topo, fix.cat);
  Solution sol = Solution::empty_for(book, fix.topo);
  sol.set_cut(0, 1);
  sol.placements = {{0, 0, 0, 1}};  // machine left off
  CHECK_THROWS_AS(electricity_cost(sol, book, fix.topo, tables), std::invalid_argument);
}

// Exact-grid draws so rounding is the identity: whole-kW powers, PUE 1, a one
// hour frame and micro-cent prices make every table entry q * kW exactly.
TEST_CASE("cost tables scale linearly in the unit prices") {
  Catalog cat = reference_catalog();
  cat.pm_types[0].idle_power = 2'000'000;  // 2 kW
  for (auto& vm : cat.vm_types) vm.peak_power = 1'000'000;
  TopoSpec spec;
  spec.aps = 1;
  spec.pops = {{0}};
  spec.pue_ppm = 1'000'000;
  spec.frame_ms = 3'600'000;
  spec.slot_ms = 3'600'000;
  std::mt19937_64 g(11);
  for (int trial = 0; trial < 20; ++trial) {
    Money q = static_cast<Money>(1 + g() % 5'000'000);
    // xi * D * 1000 / (frame_ms * r_min) = xi / 16 here, exact for multiples of 16
    Money xi = 16 * static_cast<Money>(g() % 10'000);
    TopoSpec one = spec, three = spec;
    one.q_field = one.q_shallow = one.q_deep = q;
    three.q_field = three.q_shallow = three.q_deep = 3 * q;
    one.xi_shallow = xi;
    three.xi_shallow = 3 * xi;
    one.xi_deep = three.xi_deep = 0;

    CostTables t1 = build_cost_tables(make_topology(cat, one), cat);
    CostTables t3 = build_cost_tables(make_topology(cat, three), cat);
    CHECK(t1.vm_energy[0][0] == q);  // 1 kW for one hour at PUE 1
    CHECK(t1.pm_idle_energy[0][0] == 2 * q);
    CHECK(t3.vm_energy[0][0] == 3 * t1.vm_energy[0][0]);
    CHECK(t3.pm_idle_energy[0][0] == 3 * t1.pm_idle_energy[0][0]);
    CHECK(t3.lr_shallow[0][0] == 3 * t1.lr_shallow[0][0]);
  }
}

TEST_CASE("feasibility audit accepts a well-formed assignment") {
  SinglePair fix;
  std::vector<Bid> bids = {{0, 0, 0, 500'000}, {1, 0, 0, 400'000}};
  BidBook book = build_bid_book(bids, fix.topo, fix.cat);
  Solution sol = Solution::empty_for(book, fix.topo);
  sol.set_cut(0, 2);
  sol.pm_on[0][0][0] = 1;
  sol.placements = {{0, 0, 0, 1}, {1, 0, 0, 1}};
  CHECK(check_feasibility(sol, book, fix.topo, fix.cat).empty());
}

TEST_CASE("feasibility audit flags each constructed violation") {
  Catalog cat = small_catalog();  // pm.small: one r3.2xlarge fills it
  TopoSpec spec;
  spec.aps = 1;
  spec.pops = {{0}};
  Topology topo = make_topology(cat, spec);

  auto labels = [&](const Solution& sol, const BidBook& book) {
    std::vector<std::string> out;
    for (const Violation& v : check_feasibility(sol, book, topo, cat))
      out.push_back(v.constraint);
    return out;
  };
  auto has = [](const std::vector<std::string>& ls, const std::string& want) {
    return std::find(ls.begin(), ls.end(), want) != ls.end();
  };

  std::vector<Bid> bids = {{0, 0, 2, 900'000}, {1, 0, 2, 800'000}};
  BidBook book = build_bid_book(bids, topo, cat);

  SUBCASE("C6: serving rank 2 without rank 1") {
    Solution sol = Solution::empty_for(book, topo);
    sol.served[book.pair_index(0, 2)] = {0, 1};
    sol.pm_on[0][0][0] = 1;
    sol.placements = {{1, 0, 2, 1}};
    CHECK(has(labels(sol, book), "C6"));
  }
  SUBCASE("C1: serve flag without an assignment, and the reverse") {
    Solution sol = Solution::empty_for(book, topo);
    sol.set_cut(book.pair_index(0, 2), 1);
    CHECK(has(labels(sol, book), "C1"));

    Solution extra = Solution::empty_for(book, topo);
    extra.pm_on[0][0][0] = 1;
    extra.placements = {{0, 0, 2, 1}};
    CHECK(has(labels(extra, book), "C1"));
  }
  SUBCASE("C2: two machine-filling VMs packed onto one machine") {
    Solution sol = Solution::empty_for(book, topo);
    sol.set_cut(book.pair_index(0, 2), 2);
    sol.pm_on[0][0][0] = 1;
    sol.placements = {{0, 0, 0, 1}, {1, 0, 0, 1}};
    CHECK(has(labels(sol, book), "C2"));
  }
  SUBCASE("C7: machine 2 on while machine 1 is off") {
    Topology two = topo;
    two.cloudlets[0].pm_counts[0] = 2;
    Solution sol = Solution::empty_for(book, two);
    sol.pm_on[0][0] = {0, 1};
    CHECK(has(labels(sol, book), "C7"));
  }
  SUBCASE("C8 and C10: non-binary flags") {
    Solution sol = Solution::empty_for(book, topo);
    sol.served[book.pair_index(0, 2)][0] = 2;
    sol.pm_on[0][0][0] = 3;
    auto ls = labels(sol, book);
    CHECK(has(ls, "C8"));
    CHECK(has(ls, "C10"));
  }
  SUBCASE("C9: machine index outside the inventory") {
    Solution sol = Solution::empty_for(book, topo);
    sol.set_cut(book.pair_index(0, 2), 1);
    sol.pm_on[0][0][0] = 1;
    sol.placements = {{0, 0, 0, 7}};
    CHECK(has(labels(sol, book), "C9"));
  }
}

TEST_CASE("feasibility audit flags link overloads per tier") {
  Catalog cat = small_catalog();
  TopoSpec spec;
  spec.aps = 2;
  spec.pops = {{0, 1}};
  spec.deep_count = 4;
  SUBCASE("C3: last-mile narrower than one VM lane") {
    spec.last_mile_bps = 4'000'000;  // m3.large needs 5 Mbps
    Topology topo = make_topology(cat, spec);
    std::vector<Bid> bids = {{0, 0, 0, 900'000}};
    BidBook book = build_bid_book(bids, topo, cat);
    Solution sol = Solution::empty_for(book, topo);
    sol.set_cut(book.pair_index(0, 0), 1);
    int deep = topo.deep_cloudlet();
    sol.pm_on[deep][0][0] = 1;
    sol.placements = {{0, deep, 0, 1}};
    auto violations = check_feasibility(sol, book, topo, cat);
    bool c3 = false;
    for (const Violation& v : violations) c3 = c3 || v.constraint == "C3";
    CHECK(c3);
  }
  SUBCASE("C4/C5: aggregation and backhaul narrower than the lane sum") {
    spec.aggregation_bps = 30'000'000;
    spec.backhaul_bps = 30'000'000;
    Topology topo = make_topology(cat, spec);
    // Two r3 lanes from different APs: 40 Mbps through pop and backhaul.
    std::vector<Bid> bids = {{0, 0, 2, 900'000}, {1, 1, 2, 900'000}};
    BidBook book = build_bid_book(bids, topo, cat);
    Solution sol = Solution::empty_for(book, topo);
    sol.set_cut(book.pair_index(0, 2), 1);
    sol.set_cut(book.pair_index(1, 2), 1);
    int deep = topo.deep_cloudlet();
    sol.pm_on[deep][0][0] = 1;
    sol.pm_on[deep][0][1] = 1;
    sol.placements = {{0, deep, 0, 1}, {1, deep, 0, 2}};
    bool c4 = false, c5 = false;
    for (const Violation& v : check_feasibility(sol, book, topo, cat)) {
      c4 = c4 || v.constraint == "C4";
      c5 = c5 || v.constraint == "C5";
    }
    CHECK(c4);
    CHECK(c5);
  }
}
