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

#include "himec/heuristics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "himec/topology.hpp"

namespace himec {

namespace {

// Estimated cost of serving one VM of type `vm` on PM type `pm` at cloudlet
// `c`, in money micros: frame energy at peak plus a demand-weighted share of
// the idle draw, plus the QoS penalty of the placement. The energy part is a
// coarse estimate by design (no PUE, whole machine amortized evenly over the
// resource kinds); the true cost is always recomputed by the objective.
double unit_cost_estimate(const Topology& topo, const Catalog& cat, int ap, int c, int pm,
                          int vm) {
  const VmType& v = cat.vm_types[vm];
  const PmType& p = cat.pm_types[pm];
  double share = 0.0;
  for (std::size_t r = 0; r < v.demand.size(); ++r)
    share += static_cast<double>(v.demand[r]) / static_cast<double>(p.supply[r]);
  share /= static_cast<double>(v.demand.size());
  double kw = static_cast<double>(v.peak_power) / 1e6 +
              static_cast<double>(p.idle_power) / 1e6 * share;
  double hours = static_cast<double>(topo.frame_ms) / 3.6e6;
  double energy = hours * static_cast<double>(topo.cloudlets[c].electricity_per_kwh) * kw;
  double penalty = static_cast<double>(topo.xi(ap, c)) *
                   (static_cast<double>(v.max_data_bits) /
                    static_cast<double>(v.base_bandwidth_bps));
  return energy + penalty;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

CutChoice favored_cut(const std::vector<Money>& prices, double phi, bool serve_breakeven) {
  CutChoice best;
  double best_rho = 0.0;
  for (int k = 1; k <= static_cast<int>(prices.size()); ++k) {
    double rho = static_cast<double>(k) * (static_cast<double>(prices[k - 1]) - phi);
    if (rho < 0) continue;
    if (rho == 0 && !serve_breakeven) continue;
    if (rho >= best_rho) {
      best_rho = rho;
      best.k = k;
      best.omega = prices[k - 1];
      best.rho = rho;
    }
  }
  return best;
}

PricingOutcome price_vms(const BidBook& book, const Topology& topo, const Catalog& catalog,
                         const PricingOptions& opt) {
  const int pairs = static_cast<int>(book.pairs.size());
  PricingOutcome out;
  out.phi.assign(pairs, 0.0);
  out.capacity.assign(pairs, 0);
  out.k_hat.assign(pairs, 0);
  out.omega.assign(pairs, 0);
  out.rho_hat.assign(pairs, 0.0);
  out.in_served.assign(book.bids.size(), 0);

  for (int pr = 0; pr < pairs; ++pr) {
    const BidSequence& seq = book.pairs[pr];
    const std::int64_t nbids = seq.size();
    if (nbids == 0) continue;
    const int ap = seq.ap;
    const int vm = seq.vm_type;
    const VmType& v = catalog.vm_types[vm];

    std::int64_t g_total = 0;
    double phi_acc = 0.0;
    for (const ReachableCloudlet& rc : reachable_cloudlets(topo, ap)) {
      const Cloudlet& cl = topo.cloudlets[rc.cloudlet];
      for (std::size_t s = 0; s < cl.pm_type_ids.size(); ++s) {
        const int pm = cl.pm_type_ids[s];
        if (!catalog.pm_can_host(pm, vm)) continue;
        std::int64_t g = std::min<std::int64_t>(cl.pm_counts[s], nbids);
        if (rc.tier != Tier::field) {
          std::int64_t lane =
              topo.link_capacity_bps(topo.last_mile_link(ap)) / v.base_bandwidth_bps;
          g = std::min(g, lane);
        }
        g_total += g;
        phi_acc += static_cast<double>(g) *
                   unit_cost_estimate(topo, catalog, ap, rc.cloudlet, pm, vm);
      }
    }
    out.capacity[pr] = g_total;
    if (g_total <= 0) continue;

    out.phi[pr] = phi_acc / static_cast<double>(g_total);
    CutChoice cut = favored_cut(seq.prices, out.phi[pr], opt.serve_breakeven);
    out.k_hat[pr] = cut.k;
    out.omega[pr] = cut.omega;
    out.rho_hat[pr] = cut.rho;
    for (int k = 0; k < cut.k; ++k) out.in_served[seq.bid_index[k]] = 1;
    out.served_total += cut.k;
  }
  return out;
}

DistributionResult distribute_vms(const PricingOutcome& pricing, const BidBook& book,
                                  const Topology& topo, const Catalog& catalog) {
  DistributionResult out;
  out.solution = Solution::empty_for(book, topo);
  Solution& sol = out.solution;

  const int aps = topo.num_aps();
  const int cloudlets = topo.num_cloudlets();
  const int nbids = static_cast<int>(book.bids.size());

  // Reachability and path tables, scanned once per bid per candidate.
  std::vector<std::vector<std::uint8_t>> reach(aps, std::vector<std::uint8_t>(cloudlets, 0));
  std::vector<std::vector<std::vector<int>>> paths(aps);
  for (int a = 0; a < aps; ++a) {
    paths[a].resize(cloudlets);
    for (const ReachableCloudlet& rc : reachable_cloudlets(topo, a)) {
      reach[a][rc.cloudlet] = 1;
      paths[a][rc.cloudlet] = links_on_path(topo, a, rc.cloudlet);
    }
  }

  std::vector<std::uint8_t> pending = pricing.in_served;
  int pending_count = 0;
  for (std::uint8_t f : pending) pending_count += f;

  // Packing lists scan the served set rank-first within each pair. Bids of a
  // pair share one AP and one VM type, so once a rank fails a resource or
  // link check every later rank fails too, which keeps each pair's assigned
  // set a contiguous rank prefix and spares the settle pass from unwinding.
  std::vector<int> scan_order;
  scan_order.reserve(nbids);
  for (const BidSequence& seq : book.pairs)
    for (int bi : seq.bid_index) scan_order.push_back(bi);

  std::vector<std::vector<int>> opened(cloudlets);
  for (int c = 0; c < cloudlets; ++c)
    opened[c].assign(topo.cloudlets[c].pm_type_ids.size(), 0);
  std::vector<std::int64_t> link_residual(topo.num_links());
  for (int l = 0; l < topo.num_links(); ++l) link_residual[l] = topo.link_capacity_bps(l);

  std::vector<int> list, best_list;
  std::vector<std::int64_t> tentative(topo.num_links());
  std::vector<ResourceAmount> residual;

  while (pending_count > 0) {
    double best_u = 0.0;
    int best_pm = -1, best_cloudlet = -1, best_slot = -1;
    best_list.clear();

    for (int pm = 0; pm < static_cast<int>(catalog.pm_types.size()); ++pm) {
      for (int c = 0; c < cloudlets; ++c) {
        const int slot = topo.pm_slot(c, pm);
        if (slot < 0) continue;
        if (opened[c][slot] >= topo.cloudlets[c].pm_counts[slot]) continue;

        // Greedy packing list for one fresh instance of this machine.
        list.clear();
        residual = catalog.pm_types[pm].supply;
        std::fill(tentative.begin(), tentative.end(), 0);
        double sum_omega = 0.0;
        double peak_kw = 0.0;
        double penalty = 0.0;
        for (int b : scan_order) {
          if (!pending[b]) continue;
          const Bid& bid = book.bids[b];
          if (!reach[bid.ap][c]) continue;
          const VmType& v = catalog.vm_types[bid.vm_type];
          bool fits = true;
          for (std::size_t r = 0; r < v.demand.size(); ++r)
            if (residual[r] < v.demand[r]) {
              fits = false;
              break;
            }
          if (!fits) continue;
          const auto& path = paths[bid.ap][c];
          for (int l : path)
            if (link_residual[l] - tentative[l] < v.base_bandwidth_bps) {
              fits = false;
              break;
            }
          if (!fits) continue;
          for (std::size_t r = 0; r < v.demand.size(); ++r) residual[r] -= v.demand[r];
          for (int l : path) tentative[l] += v.base_bandwidth_bps;
          list.push_back(b);
          sum_omega += static_cast<double>(pricing.omega[book.pair_of_bid[b]]);
          peak_kw += static_cast<double>(v.peak_power) / 1e6;
          penalty += static_cast<double>(topo.xi(bid.ap, c)) *
                     static_cast<double>(v.max_data_bits) /
                     (topo.frame_seconds() * static_cast<double>(v.base_bandwidth_bps));
        }
        if (list.empty()) continue;

        double idle_kw = static_cast<double>(catalog.pm_types[pm].idle_power) / 1e6;
        double denom =
            static_cast<double>(topo.cloudlets[c].electricity_per_kwh) * (idle_kw + peak_kw) +
            penalty;
        double u = denom > 0 ? sum_omega / denom : std::numeric_limits<double>::infinity();
        if (u > best_u) {
          best_u = u;
          best_pm = pm;
          best_cloudlet = c;
          best_slot = slot;
          best_list = list;
        }
      }
    }

    if (best_pm < 0) break;
    const int machine = opened[best_cloudlet][best_slot]++;
    sol.pm_on[best_cloudlet][best_slot][machine] = 1;
    for (int b : best_list) {
      sol.placements.push_back(
          {b, best_cloudlet, best_pm, machine + 1});
      pending[b] = 0;
      --pending_count;
      const VmType& v = catalog.vm_types[book.bids[b].vm_type];
      for (int l : paths[book.bids[b].ap][best_cloudlet])
        link_residual[l] -= v.base_bandwidth_bps;
    }
    out.rounds.push_back({best_pm, best_cloudlet, best_u,
                          static_cast<int>(best_list.size())});
  }

  // Settle serve flags: a pair serves its longest fully assigned rank prefix.
  // Anything assigned above a gap is unwound so ranks stay monotone.
  std::vector<std::uint8_t> placed(nbids, 0);
  for (const Placement& pl : sol.placements) placed[pl.bid_index] = 1;
  std::vector<std::uint8_t> keep(nbids, 0);
  for (std::size_t p = 0; p < book.pairs.size(); ++p) {
    const BidSequence& seq = book.pairs[p];
    int cut = 0;
    while (cut < static_cast<int>(seq.size()) && placed[seq.bid_index[cut]]) ++cut;
    sol.set_cut(static_cast<int>(p), cut);
    for (int k = 0; k < cut; ++k) keep[seq.bid_index[k]] = 1;
  }
  std::erase_if(sol.placements, [&](const Placement& pl) { return !keep[pl.bid_index]; });
  std::sort(sol.placements.begin(), sol.placements.end(),
            [](const Placement& a, const Placement& b) { return a.bid_index < b.bid_index; });

  out.assigned = static_cast<int>(sol.placements.size());
  out.dropped = pricing.served_total - out.assigned;
  return out;
}

HeuristicResult run_heuristic(const BidBook& book, const Topology& topo,
                              const Catalog& catalog, const PricingOptions& opt) {
  HeuristicResult out;
  auto t0 = std::chrono::steady_clock::now();
  out.pricing = price_vms(book, topo, catalog, opt);
  out.pricing_ms = ms_since(t0);
  auto t1 = std::chrono::steady_clock::now();
  out.distribution = distribute_vms(out.pricing, book, topo, catalog);
  out.distribution_ms = ms_since(t1);
  return out;
}

}  // namespace himec
