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

#ifndef HIMEC_TESTS_BRUTE_FORCE_HPP
#define HIMEC_TESTS_BRUTE_FORCE_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "himec/bids.hpp"
#include "himec/money.hpp"
#include "himec/topology.hpp"

namespace himec::testing {

/// Independent maximum-profit oracle. Enumerates every serve subset and every
/// machine assignment directly from the constraint statements, with its own
/// ranking, path and cost arithmetic, and no pruning beyond feasibility.
/// Exponential on purpose; refuses more than 8 bids.
struct BruteBest {
  Money profit = 0;  // the all-reject solution is always feasible
  int served = 0;    // served count of the first maximizer found
};

namespace brute_detail {

inline Money ec_term(Money q, std::int64_t pue_ppm, std::int64_t frame_ms, MicroKw power) {
  __int128 num = static_cast<__int128>(q) * pue_ppm * power * frame_ms;
  __int128 den = static_cast<__int128>(1'000'000) * 1'000'000 * 3'600'000;
  return round_half_even(num, den);
}

inline Money lr_term(Money xi, std::int64_t data_bits, std::int64_t frame_ms,
                     std::int64_t r_min_bps) {
  __int128 num = static_cast<__int128>(xi) * data_bits * 1000;
  __int128 den = static_cast<__int128>(frame_ms) * r_min_bps;
  return round_half_even(num, den);
}

struct Machine {
  int cloudlet;
  int pm_type;
  std::vector<ResourceAmount> residual;
  int vms = 0;
};

struct Searcher {
  const std::vector<Bid>& bids;
  const Topology& topo;
  const Catalog& cat;

  std::vector<Machine> machines;
  std::vector<std::int64_t> link_residual;
  std::vector<std::vector<int>> path_of;  // [ap * cloudlets + c], own path logic

  Money best = 0;
  int best_served = 0;

  Searcher(const std::vector<Bid>& b, const Topology& t, const Catalog& c)
      : bids(b), topo(t), cat(c) {
    for (int cl = 0; cl < topo.num_cloudlets(); ++cl)
      for (std::size_t s = 0; s < topo.cloudlets[cl].pm_type_ids.size(); ++s)
        for (int m = 0; m < topo.cloudlets[cl].pm_counts[s]; ++m)
          machines.push_back({cl, topo.cloudlets[cl].pm_type_ids[s],
                              cat.pm_types[topo.cloudlets[cl].pm_type_ids[s]].supply, 0});

    for (int a = 0; a < topo.num_aps(); ++a) link_residual.push_back(topo.last_mile_bps[a]);
    for (int s = 0; s < topo.num_shallow(); ++s)
      link_residual.push_back(topo.aggregation_bps[s]);
    link_residual.push_back(topo.backhaul_bps);

    path_of.assign(static_cast<std::size_t>(topo.num_aps()) * topo.num_cloudlets(), {});
    for (int a = 0; a < topo.num_aps(); ++a) {
      int pop = -1;
      for (int s = 0; s < topo.num_shallow(); ++s)
        for (int member : topo.shallow_aps[s])
          if (member == a) pop = s;
      path_of[a * topo.num_cloudlets() + a] = {};  // own field cloudlet
      if (pop >= 0) {
        int shallow_cl = topo.num_aps() + pop;
        path_of[a * topo.num_cloudlets() + shallow_cl] = {a};
        path_of[a * topo.num_cloudlets() + topo.num_cloudlets() - 1] = {
            a, topo.num_aps() + pop, topo.num_aps() + topo.num_shallow()};
      }
    }
  }

  bool reachable(int ap, int cloudlet) const {
    if (cloudlet == ap) return true;                      // field
    if (cloudlet == topo.num_cloudlets() - 1) return true;  // deep
    for (int s = 0; s < topo.num_shallow(); ++s)
      if (topo.num_aps() + s == cloudlet)
        for (int member : topo.shallow_aps[s])
          if (member == ap) return true;
    return false;
  }

  Money assignment_cost(const std::vector<int>& host_of,
                        const std::vector<int>& chosen) const {
    Money cost = 0;
    std::vector<char> used(machines.size(), 0);
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      const Bid& b = bids[chosen[j]];
      const Machine& m = machines[host_of[j]];
      used[host_of[j]] = 1;
      cost += ec_term(topo.cloudlets[m.cloudlet].electricity_per_kwh, topo.pue_ppm,
                      topo.frame_ms, cat.vm_types[b.vm_type].peak_power);
      if (m.cloudlet != b.ap) {  // off the field tier
        Money xi = m.cloudlet == topo.num_cloudlets() - 1 ? topo.xi_deep[b.ap]
                                                          : topo.xi_shallow[b.ap];
        cost += lr_term(xi, cat.vm_types[b.vm_type].max_data_bits, topo.frame_ms,
                        cat.vm_types[b.vm_type].base_bandwidth_bps);
      }
    }
    for (std::size_t i = 0; i < machines.size(); ++i)
      if (used[i])
        cost += ec_term(topo.cloudlets[machines[i].cloudlet].electricity_per_kwh,
                        topo.pue_ppm, topo.frame_ms,
                        cat.pm_types[machines[i].pm_type].idle_power);
    return cost;
  }

  void place(const std::vector<int>& chosen, std::size_t j, Money revenue, int served,
             std::vector<int>& host_of) {
    if (j == chosen.size()) {
      Money profit = revenue - assignment_cost(host_of, chosen);
      if (profit > best) {
        best = profit;
        best_served = served;
      }
      return;
    }
    const Bid& b = bids[chosen[j]];
    const VmType& v = cat.vm_types[b.vm_type];
    for (std::size_t i = 0; i < machines.size(); ++i) {
      Machine& m = machines[i];
      if (!reachable(b.ap, m.cloudlet)) continue;
      if (!cat.pm_can_host(m.pm_type, b.vm_type)) continue;
      bool fits = true;
      for (std::size_t r = 0; r < v.demand.size(); ++r)
        fits = fits && m.residual[r] >= v.demand[r];
      const auto& path = path_of[b.ap * topo.num_cloudlets() + m.cloudlet];
      for (int l : path) fits = fits && link_residual[l] >= v.base_bandwidth_bps;
      if (!fits) continue;

      for (std::size_t r = 0; r < v.demand.size(); ++r) m.residual[r] -= v.demand[r];
      for (int l : path) link_residual[l] -= v.base_bandwidth_bps;
      host_of[j] = static_cast<int>(i);
      place(chosen, j + 1, revenue, served, host_of);
      for (std::size_t r = 0; r < v.demand.size(); ++r) m.residual[r] += v.demand[r];
      for (int l : path) link_residual[l] += v.base_bandwidth_bps;
    }
  }
};

}  // namespace brute_detail

inline BruteBest brute_force_best(const std::vector<Bid>& bids, const Topology& topo,
                                  const Catalog& cat) {
  if (bids.size() > 8) throw std::invalid_argument("brute_force_best: more than 8 bids");
  const int n = static_cast<int>(bids.size());

  // Own ranking: per (ap, vm) pair, price descending, bid id ascending.
  std::vector<std::vector<int>> pair_ranks(
      static_cast<std::size_t>(topo.num_aps()) * cat.vm_types.size());
  for (int i = 0; i < n; ++i)
    pair_ranks[bids[i].ap * cat.vm_types.size() + bids[i].vm_type].push_back(i);
  for (auto& ranks : pair_ranks)
    std::sort(ranks.begin(), ranks.end(), [&](int x, int y) {
      if (bids[x].price != bids[y].price) return bids[x].price > bids[y].price;
      return bids[x].id < bids[y].id;
    });

  brute_detail::Searcher searcher(bids, topo, cat);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    // Serve flags must be rank prefixes within each pair.
    bool prefix = true;
    Money revenue = 0;
    for (const auto& ranks : pair_ranks) {
      int cut = 0;
      bool gap = false;
      for (std::size_t k = 0; k < ranks.size(); ++k) {
        bool on = (mask >> ranks[k]) & 1u;
        if (on && gap) prefix = false;
        if (on) cut = static_cast<int>(k) + 1;
        if (!on) gap = true;
      }
      if (!prefix) break;
      for (int k = 1; k <= cut; ++k) {
        Money prev = k > 1 ? bids[ranks[k - 2]].price : 0;
        revenue += static_cast<Money>(k) * bids[ranks[k - 1]].price -
                   static_cast<Money>(k - 1) * prev;
      }
    }
    if (!prefix) continue;

    std::vector<int> chosen;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) chosen.push_back(i);
    std::vector<int> host_of(chosen.size(), -1);
    searcher.place(chosen, 0, revenue, static_cast<int>(chosen.size()), host_of);
  }
  return {searcher.best, searcher.best_served};
}

}  // namespace himec::testing

#endif  // HIMEC_TESTS_BRUTE_FORCE_HPP
