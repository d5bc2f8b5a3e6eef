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

#include "himec/exact_solver.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "himec/topology.hpp"

namespace himec {

namespace {

using Clock = std::chrono::steady_clock;

struct Budget {
  std::int64_t remaining;
  Clock::time_point deadline;
  bool exhausted = false;
  int tick = 0;

  explicit Budget(const SolveLimits& lim)
      : remaining(lim.node_budget),
        deadline(Clock::now() + std::chrono::milliseconds(lim.time_budget_ms)) {
    if (lim.node_budget <= 0 || lim.time_budget_ms <= 0)
      throw std::invalid_argument("solver limits must be positive");
  }

  // One search node; false once either budget is gone.
  bool spend() {
    if (exhausted) return false;
    if (--remaining < 0) {
      exhausted = true;
      return false;
    }
    if ((++tick & 1023) == 0 && Clock::now() > deadline) {
      exhausted = true;
      return false;
    }
    return true;
  }
};

// One way to host a VM of a given pair: a reachable cloudlet and a PM slot
// there. Machines within the slot are enumerated at search time.
struct HostOption {
  int cloudlet = -1;
  int slot = -1;
  int pm_type = -1;
  Money vm_cost = 0;  // energy plus QoS penalty for one VM, idle excluded
  std::vector<int> links;
};

struct PackResult {
  bool feasible = false;
  Money cost = 0;
  std::vector<Placement> placements;
  std::vector<std::vector<int>> open_count;  // [cloudlet][slot]
};

constexpr Money kInfCost = std::numeric_limits<Money>::max() / 4;

// Minimum-cost assignment of a fixed served set to machines, by exhaustive
// depth-first search. Identical VMs are forced into non-decreasing host
// order and a closed machine may only be the first closed one of its slot,
// which removes both permutation symmetries without losing any packing.
class Packer {
 public:
  Packer(const Instance& inst, Budget& budget)
      : topo_(inst.topology), cat_(inst.catalog), book_(inst.book), budget_(budget) {
    const int pairs = static_cast<int>(book_.pairs.size());
    options_.resize(pairs);
    min_vm_cost_.assign(pairs, kInfCost);
    for (int p = 0; p < pairs; ++p) {
      if (book_.pairs[p].size() == 0) continue;
      int ap = book_.pairs[p].ap;
      int vm = book_.pairs[p].vm_type;
      for (const ReachableCloudlet& rc : reachable_cloudlets(topo_, ap)) {
        const int c = rc.cloudlet;
        const Cloudlet& cl = topo_.cloudlets[c];
        for (std::size_t s = 0; s < cl.pm_type_ids.size(); ++s) {
          if (cl.pm_counts[s] <= 0) continue;
          if (!cat_.pm_can_host(cl.pm_type_ids[s], vm)) continue;
          HostOption opt;
          opt.cloudlet = c;
          opt.slot = static_cast<int>(s);
          opt.pm_type = cl.pm_type_ids[s];
          opt.vm_cost = inst.tables.vm_energy[c][vm] +
                        inst.tables.lost_revenue_term(topo_, ap, c, vm);
          opt.links = links_on_path(topo_, ap, c);
          options_[p].push_back(std::move(opt));
        }
      }
      for (const HostOption& o : options_[p])
        min_vm_cost_[p] = std::min(min_vm_cost_[p], o.vm_cost);
    }
    tables_ = &inst.tables;

    residual_.resize(topo_.num_cloudlets());
    open_.resize(topo_.num_cloudlets());
    for (int c = 0; c < topo_.num_cloudlets(); ++c) {
      residual_[c].resize(topo_.cloudlets[c].pm_type_ids.size());
      open_[c].assign(topo_.cloudlets[c].pm_type_ids.size(), 0);
    }
    link_residual_.resize(topo_.num_links());
  }

  // True when every pair with a positive count has at least one host option.
  bool servable(const std::vector<int>& counts) const {
    for (std::size_t p = 0; p < counts.size(); ++p)
      if (counts[p] > 0 && options_[p].empty()) return false;
    return true;
  }

  Money min_vm_cost(int pair) const { return min_vm_cost_[pair]; }

  // counts[p] = number of leading ranks of pair p to place.
  PackResult pack(const std::vector<int>& counts, Money cost_cap) {
    PackResult out;
    if (!servable(counts)) return out;

    items_.clear();
    for (std::size_t p = 0; p < counts.size(); ++p)
      for (int j = 0; j < counts[p]; ++j) items_.push_back(static_cast<int>(p));
    suffix_lb_.assign(items_.size() + 1, 0);
    for (int i = static_cast<int>(items_.size()) - 1; i >= 0; --i)
      suffix_lb_[i] = suffix_lb_[i + 1] + min_vm_cost_[items_[i]];

    for (int c = 0; c < topo_.num_cloudlets(); ++c)
      for (std::size_t s = 0; s < open_[c].size(); ++s) {
        open_[c][s] = 0;
        residual_[c][s].clear();
      }
    for (int l = 0; l < topo_.num_links(); ++l)
      link_residual_[l] = topo_.link_capacity_bps(l);

    best_cost_ = cost_cap;
    found_ = false;
    choice_.assign(items_.size(), Choice{});
    dfs(0, -1);

    if (!found_) return out;
    out.feasible = true;
    out.cost = best_cost_;
    out.open_count = best_open_;
    out.placements.reserve(items_.size());
    std::vector<int> seen(counts.size(), 0);
    for (std::size_t i = 0; i < items_.size(); ++i) {
      int p = items_[i];
      const Choice& ch = best_choice_[i];
      Placement pl;
      pl.bid_index = book_.pairs[p].bid_index[seen[p]++];
      pl.cloudlet = options_[p][ch.opt].cloudlet;
      pl.pm_type = options_[p][ch.opt].pm_type;
      pl.pm_index = ch.machine + 1;
      out.placements.push_back(pl);
    }
    std::sort(out.placements.begin(), out.placements.end(),
              [](const Placement& a, const Placement& b) { return a.bid_index < b.bid_index; });
    return out;
  }

  bool aborted() const { return budget_.exhausted; }

 private:
  struct Choice {
    int opt = -1;
    int machine = -1;
  };

  void dfs(std::size_t i, std::int64_t prev_key) {
    if (budget_.exhausted) return;
    if (i == items_.size()) {
      if (cost_ < best_cost_) {
        best_cost_ = cost_;
        best_choice_ = choice_;
        best_open_ = open_;
        found_ = true;
      }
      return;
    }
    if (cost_ + suffix_lb_[i] >= best_cost_) return;
    if (!budget_.spend()) return;

    const int p = items_[i];
    const bool same_group = i > 0 && items_[i - 1] == p;
    const auto& demand = cat_.vm_types[book_.pairs[p].vm_type].demand;
    const std::int64_t bw = cat_.vm_types[book_.pairs[p].vm_type].base_bandwidth_bps;

    for (std::size_t oi = 0; oi < options_[p].size(); ++oi) {
      const HostOption& opt = options_[p][oi];
      bool links_ok = true;
      for (int l : opt.links)
        if (link_residual_[l] < bw) {
          links_ok = false;
          break;
        }
      if (!links_ok) continue;

      const int cap = topo_.cloudlets[opt.cloudlet].pm_counts[opt.slot];
      auto& machines = residual_[opt.cloudlet][opt.slot];
      int& open = open_[opt.cloudlet][opt.slot];
      const int last = std::min(open, cap - 1);
      for (int m = 0; m <= last; ++m) {
        const std::int64_t key = (static_cast<std::int64_t>(oi) << 32) | m;
        if (same_group && key < prev_key) continue;
        const bool fresh = m == open;
        if (fresh) machines.push_back(cat_.pm_types[opt.pm_type].supply);
        bool fits = true;
        for (std::size_t r = 0; r < demand.size(); ++r)
          if (machines[m][r] < demand[r]) {
            fits = false;
            break;
          }
        if (!fits) {
          if (fresh) machines.pop_back();
          continue;
        }
        Money delta = opt.vm_cost +
                      (fresh ? tables_->pm_idle_energy[opt.cloudlet][opt.pm_type] : 0);
        if (cost_ + delta + suffix_lb_[i + 1] >= best_cost_) {
          if (fresh) machines.pop_back();
          continue;
        }

        for (std::size_t r = 0; r < demand.size(); ++r) machines[m][r] -= demand[r];
        for (int l : opt.links) link_residual_[l] -= bw;
        if (fresh) ++open;
        cost_ += delta;
        choice_[i] = {static_cast<int>(oi), m};

        dfs(i + 1, key);

        cost_ -= delta;
        if (fresh) {
          --open;
          machines.pop_back();
        } else {
          for (std::size_t r = 0; r < demand.size(); ++r) machines[m][r] += demand[r];
        }
        for (int l : opt.links) link_residual_[l] += bw;
        if (budget_.exhausted) return;
      }
    }
  }

  const Topology& topo_;
  const Catalog& cat_;
  const BidBook& book_;
  const CostTables* tables_ = nullptr;
  Budget& budget_;

  std::vector<std::vector<HostOption>> options_;  // [pair], canonical order
  std::vector<Money> min_vm_cost_;

  std::vector<int> items_;
  std::vector<Money> suffix_lb_;
  std::vector<std::vector<std::vector<std::vector<ResourceAmount>>>> residual_;
  std::vector<std::vector<int>> open_;
  std::vector<std::int64_t> link_residual_;
  Money cost_ = 0;
  Money best_cost_ = kInfCost;
  bool found_ = false;
  std::vector<Choice> choice_, best_choice_;
  std::vector<std::vector<int>> best_open_;
};

Money rank_revenue(const BidSequence& seq, int k) {
  return k == 0 ? 0 : static_cast<Money>(k) * seq.price_at_rank(k);
}

Solution assemble(const Instance& inst, const std::vector<int>& cuts,
                  const PackResult& pack) {
  Solution sol = Solution::empty_for(inst.book, inst.topology);
  for (std::size_t p = 0; p < cuts.size(); ++p) sol.set_cut(static_cast<int>(p), cuts[p]);
  sol.placements = pack.placements;
  for (int c = 0; c < inst.topology.num_cloudlets(); ++c)
    for (std::size_t s = 0; s < pack.open_count[c].size(); ++s)
      for (int m = 0; m < pack.open_count[c][s]; ++m) sol.pm_on[c][s][m] = 1;
  return sol;
}

SolveReport finish(const Instance& inst, const Solution& sol, bool optimal,
                   std::int64_t nodes, Clock::time_point start) {
  SolveReport rep;
  rep.solution = sol;
  rep.breakdown = profit(sol, inst.book, inst.topology, inst.tables);
  rep.optimal = optimal;
  rep.nodes = nodes;
  rep.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
  return rep;
}

}  // namespace

SolveReport solve_exhaustive(const Instance& inst) {
  if (inst.book.total_bids() > 12)
    throw std::invalid_argument("solve_exhaustive: more than 12 bids");
  const auto start = Clock::now();
  Budget budget(inst.limits);
  Packer packer(inst, budget);

  const int pairs = static_cast<int>(inst.book.pairs.size());
  std::vector<int> cuts(pairs, 0);
  Money best_profit = std::numeric_limits<Money>::min();
  std::vector<int> best_cuts;
  PackResult best_pack;

  bool done = false;
  while (!done && budget.spend()) {
    Money rev = 0;
    for (int p = 0; p < pairs; ++p) rev += rank_revenue(inst.book.pairs[p], cuts[p]);
    // A packing only helps if even a zero-cost one would beat the incumbent.
    if (best_profit == std::numeric_limits<Money>::min() || rev > best_profit) {
      Money cap = best_profit == std::numeric_limits<Money>::min()
                      ? kInfCost
                      : rev - best_profit;  // cost must stay under this
      PackResult pack = packer.pack(cuts, cap);
      if (pack.feasible && rev - pack.cost > best_profit) {
        best_profit = rev - pack.cost;
        best_cuts = cuts;
        best_pack = std::move(pack);
      }
    }
    // Odometer step, least significant at the back: ascending order over
    // prefix vectors, so the first optimum found has the smallest flags.
    done = true;
    for (int p = pairs - 1; p >= 0; --p) {
      if (cuts[p] < static_cast<int>(inst.book.pairs[p].size())) {
        ++cuts[p];
        std::fill(cuts.begin() + p + 1, cuts.end(), 0);
        done = false;
        break;
      }
    }
  }

  if (best_cuts.empty() && best_profit == std::numeric_limits<Money>::min()) {
    // Budget died before even the empty vector was scored.
    best_cuts.assign(pairs, 0);
    best_pack.open_count.assign(inst.topology.num_cloudlets(), {});
    for (int c = 0; c < inst.topology.num_cloudlets(); ++c)
      best_pack.open_count[c].assign(inst.topology.cloudlets[c].pm_type_ids.size(), 0);
  }
  return finish(inst, assemble(inst, best_cuts, best_pack), done && !budget.exhausted,
                inst.limits.node_budget - budget.remaining, start);
}

SolveReport solve_bnb(const Instance& inst) {
  const auto start = Clock::now();
  Budget budget(inst.limits);
  Packer packer(inst, budget);

  const int pairs = static_cast<int>(inst.book.pairs.size());
  std::vector<int> order(pairs);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Money> max_rev(pairs, 0);
  std::vector<std::vector<int>> child_order(pairs);
  for (int p = 0; p < pairs; ++p) {
    const BidSequence& seq = inst.book.pairs[p];
    child_order[p].resize(seq.size() + 1);
    std::iota(child_order[p].begin(), child_order[p].end(), 0);
    std::stable_sort(child_order[p].begin(), child_order[p].end(),
                     [&](int a, int b) { return rank_revenue(seq, a) > rank_revenue(seq, b); });
    for (int k = 0; k <= static_cast<int>(seq.size()); ++k)
      max_rev[p] = std::max(max_rev[p], rank_revenue(seq, k));
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return max_rev[a] > max_rev[b]; });
  std::vector<Money> suffix_rev(pairs + 1, 0);
  for (int i = pairs - 1; i >= 0; --i) suffix_rev[i] = suffix_rev[i + 1] + max_rev[order[i]];

  std::vector<int> cuts(pairs, 0);
  Money incumbent = 0;  // the all-reject solution is always feasible
  std::vector<int> best_cuts(pairs, 0);
  PackResult best_pack;
  best_pack.open_count.assign(inst.topology.num_cloudlets(), {});
  for (int c = 0; c < inst.topology.num_cloudlets(); ++c)
    best_pack.open_count[c].assign(inst.topology.cloudlets[c].pm_type_ids.size(), 0);

  auto dfs = [&](auto&& self, int depth, Money decided_rev) -> void {
    if (budget.exhausted) return;
    if (decided_rev + suffix_rev[depth] <= incumbent) return;
    if (!budget.spend()) return;
    if (depth == pairs) {
      PackResult pack = packer.pack(cuts, decided_rev - incumbent);
      if (pack.feasible && decided_rev - pack.cost > incumbent) {
        incumbent = decided_rev - pack.cost;
        best_cuts = cuts;
        best_pack = std::move(pack);
      }
      return;
    }
    const int p = order[depth];
    for (int k : child_order[p]) {
      cuts[p] = k;
      self(self, depth + 1, decided_rev + rank_revenue(inst.book.pairs[p], k));
      if (budget.exhausted) break;
    }
    cuts[p] = 0;
  };
  dfs(dfs, 0, 0);

  const std::int64_t nodes = inst.limits.node_budget - budget.remaining;
  return finish(inst, assemble(inst, best_cuts, best_pack), !budget.exhausted, nodes, start);
}

}  // namespace himec
