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

#ifndef HIMEC_TESTS_FIXTURES_HPP
#define HIMEC_TESTS_FIXTURES_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "himec/bandwidth.hpp"
#include "himec/bids.hpp"
#include "himec/topology.hpp"

namespace himec::testing {

inline ResourceAmount milli(double x) { return static_cast<ResourceAmount>(std::llround(x * 1000)); }

/// Three EC2-shaped VM types on a small PM, sized so a machine fills after a
/// handful of VMs (4x m3.large, 2x c3.xlarge or 1x r3.2xlarge) and packing
/// decisions actually matter in solver tests.
inline Catalog small_catalog() {
  Catalog cat;
  cat.resources = {"cpu_cores", "memory_gib", "storage_gb"};
  cat.vm_types = {
      {"m3.large", {milli(2), milli(7.5), milli(32)}, 5'000'000, 1'125'000'000, 33'500,
       1'108'333},
      {"c3.xlarge", {milli(4), milli(7.5), milli(80)}, 10'000'000, 2'250'000'000, 65'600,
       1'750'000},
      {"r3.2xlarge", {milli(8), milli(61), milli(160)}, 20'000'000, 4'500'000'000, 176'000,
       5'541'667},
  };
  cat.pm_types = {{"pm.small", {milli(8), milli(61), milli(192)}, 700'000}};
  return cat;
}

/// Same VM types on the full-size reference PM (32 cores / 240 GiB / 640 GB).
inline Catalog reference_catalog() {
  Catalog cat = small_catalog();
  cat.pm_types = {{"pm.standard", {milli(32), milli(240), milli(640)}, 700'000}};
  return cat;
}

struct TopoSpec {
  int aps = 2;
  std::vector<std::vector<int>> pops = {{0, 1}};  // AP ids per shallow cloudlet
  int field_count = 1;
  int shallow_count = 1;
  int deep_count = 2;
  Money q_field = 2'000'000;  // 2 cents per kWh
  Money q_shallow = 2'000'000;
  Money q_deep = 2'000'000;
  std::int64_t last_mile_bps = 1'000'000'000;
  std::int64_t aggregation_bps = 1'000'000'000;
  std::int64_t backhaul_bps = 1'000'000'000;
  Money xi_shallow = 900;  // 0.0009 cents
  Money xi_deep = 1800;
  std::int64_t pue_ppm = 1'200'000;
  std::int64_t frame_ms = 300'000;
  std::int64_t slot_ms = 5'000;
};

/// Canonical-order hierarchy over PM type 0 of the given catalog.
inline Topology make_topology(const Catalog& cat, const TopoSpec& spec = {}) {
  (void)cat;
  Topology topo;
  for (int a = 0; a < spec.aps; ++a) topo.ap_names.push_back("ap" + std::to_string(a));
  for (int a = 0; a < spec.aps; ++a) {
    Cloudlet c;
    c.name = "field@" + topo.ap_names[a];
    c.tier = Tier::field;
    c.pm_type_ids = {0};
    c.pm_counts = {spec.field_count};
    c.electricity_per_kwh = spec.q_field;
    topo.cloudlets.push_back(c);
  }
  for (std::size_t s = 0; s < spec.pops.size(); ++s) {
    Cloudlet c;
    c.name = "pop" + std::to_string(s);
    c.tier = Tier::shallow;
    c.pm_type_ids = {0};
    c.pm_counts = {spec.shallow_count};
    c.electricity_per_kwh = spec.q_shallow;
    topo.cloudlets.push_back(c);
    topo.shallow_aps.push_back(spec.pops[s]);
  }
  Cloudlet deep;
  deep.name = "deep";
  deep.tier = Tier::deep;
  deep.pm_type_ids = {0};
  deep.pm_counts = {spec.deep_count};
  deep.electricity_per_kwh = spec.q_deep;
  topo.cloudlets.push_back(deep);

  topo.last_mile_bps.assign(spec.aps, spec.last_mile_bps);
  topo.aggregation_bps.assign(spec.pops.size(), spec.aggregation_bps);
  topo.backhaul_bps = spec.backhaul_bps;
  topo.xi_shallow.assign(spec.aps, spec.xi_shallow);
  topo.xi_deep.assign(spec.aps, spec.xi_deep);
  topo.pue_ppm = spec.pue_ppm;
  topo.frame_ms = spec.frame_ms;
  topo.slot_ms = spec.slot_ms;
  return topo;
}

inline double unit01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

struct RandomInstance {
  Catalog catalog;
  Topology topology;
  std::vector<Bid> bids;
};

/// Small random solver instance: 1-2 APs over the small catalog, 1-2 PMs per
/// cloudlet, occasionally tight links so path capacities bind, and prices
/// spanning both sides of the serving cost.
inline RandomInstance random_instance(std::uint64_t seed, int nbids, int max_pms = 2) {
  std::mt19937_64 g(seed);
  RandomInstance inst;
  inst.catalog = small_catalog();

  TopoSpec spec;
  spec.aps = 1 + static_cast<int>(g() % 2);
  spec.pops = {{}};
  for (int a = 0; a < spec.aps; ++a) spec.pops[0].push_back(a);
  spec.field_count = 1 + static_cast<int>(g() % max_pms);
  spec.shallow_count = 1 + static_cast<int>(g() % max_pms);
  spec.deep_count = 1 + static_cast<int>(g() % max_pms);
  if (g() % 3 == 0) spec.last_mile_bps = 15'000'000;  // 3 m3 lanes, no r3 lane
  if (g() % 3 == 0) spec.backhaul_bps = 30'000'000;
  inst.topology = make_topology(inst.catalog, spec);

  for (int i = 0; i < nbids; ++i) {
    Bid b;
    b.id = i;
    b.ap = static_cast<int>(g() % spec.aps);
    b.vm_type = static_cast<int>(g() % inst.catalog.vm_types.size());
    b.price = static_cast<Money>(g() % 400'000);  // up to 0.4 cents
    inst.bids.push_back(b);
  }
  return inst;
}

/// Random rate-allocation instance with a mix of binding and slack links.
inline FlowSet random_flowset(std::uint64_t seed, int max_flows, int max_links) {
  std::mt19937_64 g(seed);
  const int links = 1 + static_cast<int>(g() % max_links);
  const int flows = 1 + static_cast<int>(g() % max_flows);

  FlowSet fs;
  fs.capacity.assign(links, 1.0);
  std::vector<double> floor_sum(links, 0.0), upper_sum(links, 0.0);
  for (int b = 0; b < flows; ++b) {
    Flow f;
    f.bid_id = b;
    f.weight = 0.5 + 1.5 * unit01(g);
    f.load = (g() % 10 == 0) ? 0.0 : 20.0 * unit01(g);
    f.lower = 0.05 + 0.15 * unit01(g);
    f.upper = f.lower + 1.0 + 9.0 * unit01(g);
    int degree = 1 + static_cast<int>(g() % std::min(3, links));
    while (static_cast<int>(f.links.size()) < degree) {
      int l = static_cast<int>(g() % links);
      bool dup = false;
      for (int seen : f.links) dup = dup || seen == l;
      if (!dup) f.links.push_back(l);
    }
    for (int l : f.links) {
      floor_sum[l] += f.lower;
      upper_sum[l] += f.upper;
    }
    fs.flows.push_back(f);
  }
  for (int l = 0; l < links; ++l) {
    if (upper_sum[l] == 0.0) continue;  // untouched link keeps capacity 1
    double frac = 0.1 + unit01(g);
    fs.capacity[l] = floor_sum[l] + frac * (upper_sum[l] - floor_sum[l]);
  }
  return fs;
}

/// Auction revenue in its per-rank sum form: sum over served ranks k of
/// k*e_k - (k-1)*e_{k-1}. The production code computes the telescoped k*e_k
/// instead; on a serve prefix the two must agree exactly.
inline Money rank_sum_revenue(const std::vector<Money>& prices, int cut) {
  Money total = 0;
  for (int k = 1; k <= cut; ++k) {
    Money prev = k > 1 ? prices[k - 2] : 0;
    total += static_cast<Money>(k) * prices[k - 1] - static_cast<Money>(k - 1) * prev;
  }
  return total;
}

}  // namespace himec::testing

#endif  // HIMEC_TESTS_FIXTURES_HPP
