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

#include "himec/objective.hpp"

#include <stdexcept>

namespace himec {

namespace {

// frame_hours * PUE * q * P with everything in scaled integers:
// q in money micros / kWh, PUE in ppm, P in micro-kW, frame in ms.
Money energy_cost_term(std::int64_t frame_ms, std::int64_t pue_ppm, Money q_per_kwh,
                       MicroKw power) {
  __int128 num = static_cast<__int128>(q_per_kwh) * pue_ppm * power * frame_ms;
  __int128 den = static_cast<__int128>(1'000'000) * 1'000'000 * 3'600'000;
  return round_half_even(num, den);
}

}  // namespace

CostTables build_cost_tables(const Topology& topo, const Catalog& catalog) {
  CostTables t;
  const int n_cloudlets = topo.num_cloudlets();
  const int n_vm = static_cast<int>(catalog.vm_types.size());
  const int n_pm = static_cast<int>(catalog.pm_types.size());

  t.vm_energy.assign(n_cloudlets, std::vector<Money>(n_vm, 0));
  t.pm_idle_energy.assign(n_cloudlets, std::vector<Money>(n_pm, 0));
  for (int c = 0; c < n_cloudlets; ++c) {
    Money q = topo.cloudlets[c].electricity_per_kwh;
    for (int v = 0; v < n_vm; ++v)
      t.vm_energy[c][v] =
          energy_cost_term(topo.frame_ms, topo.pue_ppm, q, catalog.vm_types[v].peak_power);
    for (int p = 0; p < n_pm; ++p)
      t.pm_idle_energy[c][p] =
          energy_cost_term(topo.frame_ms, topo.pue_ppm, q, catalog.pm_types[p].idle_power);
  }

  t.lr_shallow.assign(topo.num_aps(), std::vector<Money>(n_vm, 0));
  t.lr_deep.assign(topo.num_aps(), std::vector<Money>(n_vm, 0));
  for (int a = 0; a < topo.num_aps(); ++a) {
    for (int v = 0; v < n_vm; ++v) {
      const VmType& vm = catalog.vm_types[v];
      // xi * D / (frame_seconds * r_min), on the money grid
      __int128 den = static_cast<__int128>(topo.frame_ms) * vm.base_bandwidth_bps;
      __int128 num_s = static_cast<__int128>(topo.xi_shallow[a]) * vm.max_data_bits * 1000;
      __int128 num_d = static_cast<__int128>(topo.xi_deep[a]) * vm.max_data_bits * 1000;
      t.lr_shallow[a][v] = round_half_even(num_s, den);
      t.lr_deep[a][v] = round_half_even(num_d, den);
    }
  }
  return t;
}

Money CostTables::lost_revenue_term(const Topology& topo, int ap, int cloudlet,
                                    int vm_type) const {
  switch (topo.tier_of(cloudlet)) {
    case Tier::field: return 0;
    case Tier::shallow: return lr_shallow[ap][vm_type];
    case Tier::deep: return lr_deep[ap][vm_type];
  }
  return 0;
}

Money revenue(const Solution& sol, const BidBook& book) {
  Money total = 0;
  for (std::size_t p = 0; p < book.pairs.size(); ++p) {
    const auto& flags = sol.served[p];
    for (std::size_t k = 1; k < flags.size(); ++k)
      if (flags[k] && !flags[k - 1])
        throw std::invalid_argument("revenue: serve flags not monotone in pair " +
                                    std::to_string(p));
    int cut = sol.cut_of(static_cast<int>(p));
    if (cut > 0) total += static_cast<Money>(cut) * book.pairs[p].price_at_rank(cut);
  }
  return total;
}

Money electricity_cost(const Solution& sol, const BidBook& book, const Topology& topo,
                       const CostTables& tables) {
  Money total = 0;
  for (const Placement& pl : sol.placements) {
    int slot = topo.pm_slot(pl.cloudlet, pl.pm_type);
    if (slot < 0 || pl.pm_index < 1 ||
        pl.pm_index > static_cast<int>(sol.pm_on[pl.cloudlet][slot].size()) ||
        !sol.pm_on[pl.cloudlet][slot][pl.pm_index - 1])
      throw std::invalid_argument("electricity_cost: bid " +
                                  std::to_string(book.bids[pl.bid_index].id) +
                                  " assigned to a machine that is not on");
    total += tables.vm_energy[pl.cloudlet][book.bids[pl.bid_index].vm_type];
  }
  for (int c = 0; c < topo.num_cloudlets(); ++c)
    for (std::size_t s = 0; s < sol.pm_on[c].size(); ++s) {
      int pm_type = topo.cloudlets[c].pm_type_ids[s];
      for (auto on : sol.pm_on[c][s])
        if (on) total += tables.pm_idle_energy[c][pm_type];
    }
  return total;
}

Money lost_revenue(const Solution& sol, const BidBook& book, const Topology& topo,
                   const CostTables& tables) {
  Money total = 0;
  for (const Placement& pl : sol.placements) {
    const Bid& b = book.bids[pl.bid_index];
    total += tables.lost_revenue_term(topo, b.ap, pl.cloudlet, b.vm_type);
  }
  return total;
}

ProfitBreakdown profit(const Solution& sol, const BidBook& book, const Topology& topo,
                       const CostTables& tables) {
  ProfitBreakdown out;
  out.revenue = revenue(sol, book);
  out.electricity = electricity_cost(sol, book, topo, tables);
  out.lost_revenue = lost_revenue(sol, book, topo, tables);
  return out;
}

std::vector<Violation> check_feasibility(const Solution& sol, const BidBook& book,
                                         const Topology& topo, const Catalog& catalog) {
  std::vector<Violation> out;
  auto add = [&](const char* c, std::string detail) {
    out.push_back({c, std::move(detail)});
  };

  // C8 binarity + C6 monotone serve flags
  for (std::size_t p = 0; p < sol.served.size(); ++p) {
    const auto& flags = sol.served[p];
    for (std::size_t k = 0; k < flags.size(); ++k)
      if (flags[k] > 1)
        add("C8", "pair " + std::to_string(p) + " rank " + std::to_string(k + 1) +
                      " has a non-binary serve flag");
    for (std::size_t k = 1; k < flags.size(); ++k)
      if (flags[k] && !flags[k - 1])
        add("C6", "pair " + std::to_string(p) + ": rank " + std::to_string(k + 1) +
                      " served while rank " + std::to_string(k) + " is not");
  }

  // C10 binarity + C7 machine index priority
  for (int c = 0; c < topo.num_cloudlets(); ++c)
    for (std::size_t s = 0; s < sol.pm_on[c].size(); ++s) {
      const auto& on = sol.pm_on[c][s];
      for (std::size_t m = 0; m < on.size(); ++m)
        if (on[m] > 1)
          add("C10", "cloudlet '" + topo.cloudlets[c].name + "' machine " +
                         std::to_string(m + 1) + " has a non-binary on flag");
      for (std::size_t m = 1; m < on.size(); ++m)
        if (on[m] && !on[m - 1])
          add("C7", "cloudlet '" + topo.cloudlets[c].name + "': machine " +
                        std::to_string(m + 1) + " on while machine " + std::to_string(m) +
                        " is off");
      // the program only defines machine variables up to min(|B|, M_c^p)
      for (std::size_t m = static_cast<std::size_t>(
               std::max(0, std::min(book.total_bids(),
                                    static_cast<int>(on.size()))));
           m < on.size(); ++m)
        if (on[m])
          add("C10", "cloudlet '" + topo.cloudlets[c].name + "' machine " +
                         std::to_string(m + 1) + " exceeds the bid-count machine bound");
    }

  // C9: placement structure
  std::vector<int> assignments(book.bids.size(), 0);
  std::vector<const Placement*> valid;
  for (const Placement& pl : sol.placements) {
    if (pl.bid_index < 0 || pl.bid_index >= book.total_bids()) {
      add("C9", "placement references an unknown bid");
      continue;
    }
    const Bid& b = book.bids[pl.bid_index];
    ++assignments[pl.bid_index];
    if (pl.cloudlet < 0 || pl.cloudlet >= topo.num_cloudlets()) {
      add("C9", "bid " + std::to_string(b.id) + " placed at an unknown cloudlet");
      continue;
    }
    int slot = topo.pm_slot(pl.cloudlet, pl.pm_type);
    if (slot < 0) {
      add("C9", "bid " + std::to_string(b.id) + " placed on a PM type absent from '" +
                    topo.cloudlets[pl.cloudlet].name + "'");
      continue;
    }
    if (pl.pm_index < 1 || pl.pm_index > topo.cloudlets[pl.cloudlet].pm_counts[slot]) {
      add("C9", "bid " + std::to_string(b.id) + " placed on machine index " +
                    std::to_string(pl.pm_index) + " outside the inventory of '" +
                    topo.cloudlets[pl.cloudlet].name + "'");
      continue;
    }
    if (!topo.reaches(b.ap, pl.cloudlet)) {
      add("C1", "bid " + std::to_string(b.id) + " placed at cloudlet '" +
                    topo.cloudlets[pl.cloudlet].name + "' unreachable from AP '" +
                    topo.ap_names[b.ap] + "'");
      continue;
    }
    valid.push_back(&pl);
  }

  // C1: assignment count must equal the serve flag
  for (int i = 0; i < book.total_bids(); ++i) {
    int pair = book.pair_of_bid[i];
    int rank = book.rank_of_bid[i];
    int flag = sol.served[pair][rank - 1] ? 1 : 0;
    if (assignments[i] != flag)
      add("C1", "bid " + std::to_string(book.bids[i].id) + " has " +
                    std::to_string(assignments[i]) + " assignments but serve flag " +
                    std::to_string(flag));
  }

  // C2: per-machine resource capacity, and machines must be on
  for (int c = 0; c < topo.num_cloudlets(); ++c) {
    const Cloudlet& cl = topo.cloudlets[c];
    for (std::size_t s = 0; s < cl.pm_type_ids.size(); ++s) {
      const PmType& pm = catalog.pm_types[cl.pm_type_ids[s]];
      for (int m = 1; m <= cl.pm_counts[s]; ++m) {
        std::vector<ResourceAmount> used(catalog.resources.size(), 0);
        bool any = false;
        for (const Placement* pl : valid) {
          if (pl->cloudlet != c || topo.pm_slot(c, pl->pm_type) != static_cast<int>(s) ||
              pl->pm_index != m)
            continue;
          any = true;
          const auto& demand = catalog.vm_types[book.bids[pl->bid_index].vm_type].demand;
          for (std::size_t r = 0; r < used.size(); ++r) used[r] += demand[r];
        }
        bool on = sol.pm_on[c][s][m - 1] != 0;
        for (std::size_t r = 0; r < used.size(); ++r) {
          ResourceAmount cap = on ? pm.supply[r] : 0;
          if (used[r] > cap) {
            add("C2", "machine " + std::to_string(m) + " of '" + pm.name + "' at '" + cl.name +
                          "' over " + catalog.resources[r] + (on ? "" : " (machine off)"));
            break;
          }
        }
        (void)any;
      }
    }
  }

  // C3: last-mile links
  for (int a = 0; a < topo.num_aps(); ++a) {
    std::int64_t used = 0;
    for (const Placement* pl : valid) {
      const Bid& b = book.bids[pl->bid_index];
      if (b.ap == a && topo.tier_of(pl->cloudlet) != Tier::field)
        used += catalog.vm_types[b.vm_type].base_bandwidth_bps;
    }
    if (used > topo.last_mile_bps[a])
      add("C3", "last-mile link of AP '" + topo.ap_names[a] + "' over capacity");
  }

  // C4: aggregation links carry the deep-placed traffic of their APs
  for (int s = 0; s < topo.num_shallow(); ++s) {
    std::int64_t used = 0;
    for (const Placement* pl : valid) {
      const Bid& b = book.bids[pl->bid_index];
      if (topo.tier_of(pl->cloudlet) == Tier::deep && topo.shallow_cloudlet(b.ap) == topo.num_aps() + s)
        used += catalog.vm_types[b.vm_type].base_bandwidth_bps;
    }
    if (used > topo.aggregation_bps[s])
      add("C4", "aggregation link of '" + topo.cloudlets[topo.num_aps() + s].name +
                    "' over capacity");
  }

  // C5: backhaul carries all deep-placed traffic
  {
    std::int64_t used = 0;
    for (const Placement* pl : valid)
      if (topo.tier_of(pl->cloudlet) == Tier::deep)
        used += catalog.vm_types[book.bids[pl->bid_index].vm_type].base_bandwidth_bps;
    if (used > topo.backhaul_bps) add("C5", "backhaul link over capacity");
  }

  return out;
}

}  // namespace himec
