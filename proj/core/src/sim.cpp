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

#include "himec/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace himec {

namespace {

// All randomness flows through these helpers instead of <random>
// distributions, whose outputs vary between standard libraries. seed_seq and
// mt19937_64 are pinned by the standard, so records reproduce anywhere.
std::mt19937_64 substream(std::uint64_t seed, std::uint32_t tag, std::uint32_t a,
                          std::uint32_t b = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    tag, a, b};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = g();
  } while (x >= limit);
  return x % n;
}

// Inverse-CDF draw from a triangular law on [lo, hi] with the given mode.
double triangle(std::mt19937_64& g, double lo, double mode, double hi) {
  if (hi <= lo) return lo;
  const double u = uniform01(g);
  const double split = (mode - lo) / (hi - lo);
  if (u < split) return lo + std::sqrt(u * (hi - lo) * (mode - lo));
  return hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - mode));
}

// Integer apportionment by largest remainder: exact for ratios that divide
// the total, never off by more than one elsewhere.
std::vector<int> apportion(int total, const std::vector<double>& mix) {
  const std::size_t n = mix.size();
  double sum = 0.0;
  for (double m : mix) sum += m;
  std::vector<int> counts(n, 0);
  std::vector<double> frac(n, 0.0);
  int assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double quota = static_cast<double>(total) * mix[i] / sum;
    counts[i] = static_cast<int>(std::floor(quota));
    frac[i] = quota - std::floor(quota);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (int i = 0; i < total - assigned; ++i) ++counts[order[i % n]];
  return counts;
}

}  // namespace

std::vector<Bid> generate_bids(const GeneratorConfig& cfg, const Catalog& catalog,
                               int num_aps, int frame) {
  const std::size_t n_vm = catalog.vm_types.size();
  if (cfg.mix.size() != n_vm || cfg.price_min.size() != n_vm ||
      cfg.price_mode.size() != n_vm || cfg.price_max.size() != n_vm)
    throw std::invalid_argument("generator config does not match the VM catalog");
  const int total = cfg.bids_for_frame(frame);
  std::mt19937_64 rng = substream(cfg.seed, 1, static_cast<std::uint32_t>(frame));
  const std::vector<int> counts = apportion(total, cfg.mix);

  std::vector<Bid> bids;
  bids.reserve(total);
  for (std::size_t v = 0; v < counts.size(); ++v) {
    const double lo = static_cast<double>(cfg.price_min[v]);
    const double mode = static_cast<double>(cfg.price_mode[v]);
    const double hi = static_cast<double>(cfg.price_max[v]);
    for (int i = 0; i < counts[v]; ++i) {
      Bid b;
      b.ap = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(num_aps)));
      b.vm_type = static_cast<int>(v);
      b.price = std::clamp<Money>(
          static_cast<Money>(std::llround(triangle(rng, lo, mode, hi))), cfg.price_min[v],
          cfg.price_max[v]);
      bids.push_back(b);
    }
  }
  // Shuffled arrival order becomes the bid id, so ids carry no type bias.
  for (std::size_t i = bids.size(); i > 1; --i)
    std::swap(bids[i - 1], bids[uniform_below(rng, i)]);
  for (std::size_t i = 0; i < bids.size(); ++i) bids[i].id = static_cast<int>(i);
  return bids;
}

FlowSet flows_for_solution(const Solution& sol, const BidBook& book, const Topology& topo,
                           const Catalog& catalog, double floor_fraction) {
  FlowSet fs;
  fs.capacity.resize(topo.num_links());
  for (int l = 0; l < topo.num_links(); ++l)
    fs.capacity[l] = static_cast<double>(topo.link_capacity_bps(l));
  for (const Placement& pl : sol.placements) {
    if (topo.tier_of(pl.cloudlet) == Tier::field) continue;
    const Bid& bid = book.bids[pl.bid_index];
    const VmType& vm = catalog.vm_types[bid.vm_type];
    Flow f;
    f.bid_id = bid.id;
    f.ap = bid.ap;
    f.cloudlet = pl.cloudlet;
    f.weight = static_cast<double>(topo.xi(bid.ap, pl.cloudlet));
    f.load = 0.0;
    f.lower = floor_fraction * static_cast<double>(vm.base_bandwidth_bps);
    f.links = links_on_path(topo, bid.ap, pl.cloudlet);
    double cap = std::numeric_limits<double>::infinity();
    for (int l : f.links) cap = std::min(cap, fs.capacity[l]);
    f.upper = cap;
    fs.flows.push_back(std::move(f));
  }
  return fs;
}

Simulation::Simulation(Scenario scenario)
    : scenario_(std::move(scenario)),
      tables_(build_cost_tables(scenario_.topology, scenario_.catalog)) {}

FrameOutput Simulation::run_frame(SolverChoice choice) {
  const Topology& topo = scenario_.topology;
  const Catalog& cat = scenario_.catalog;
  const GeneratorConfig& gen = scenario_.generator;

  if (frame_ == 0 || !gen.persistent_bids) {
    bids_ = generate_bids(gen, cat, topo.num_aps(), frame_);
  } else if (gen.mobility > 0) {
    std::mt19937_64 rng = substream(gen.seed, 2, static_cast<std::uint32_t>(frame_));
    for (Bid& b : bids_)
      if (uniform01(rng) < gen.mobility)
        b.ap = static_cast<int>(uniform_below(rng, topo.num_aps()));
  }

  FrameOutput out;
  out.book = build_bid_book(bids_, topo, cat);
  FrameRecord& rec = out.record;
  rec.frame = frame_;
  rec.submitted = static_cast<int>(bids_.size());

  auto assert_feasible = [&](const Solution& sol, const char* who) {
    const std::vector<Violation> v = check_feasibility(sol, out.book, topo, cat);
    if (!v.empty())
      throw std::logic_error(std::string(who) + " produced an infeasible solution: " +
                             v.front().constraint + " " + v.front().detail);
  };

  if (choice == SolverChoice::heuristic || choice == SolverChoice::both) {
    out.heuristic = run_heuristic(out.book, topo, cat);
    const Solution& sol = out.heuristic.distribution.solution;
    assert_feasible(sol, "heuristic");
    rec.ran_heuristic = true;
    rec.heuristic_profit = profit(sol, out.book, topo, tables_);
    rec.heuristic_served = sol.served_count();
    rec.heuristic_ratio =
        rec.submitted > 0 ? static_cast<double>(rec.heuristic_served) / rec.submitted : 0.0;
    rec.heuristic_dropped = out.heuristic.distribution.dropped;
    rec.heuristic_pricing_ms = out.heuristic.pricing_ms;
    rec.heuristic_distribution_ms = out.heuristic.distribution_ms;
  }

  if (choice == SolverChoice::exact || choice == SolverChoice::both) {
    Instance inst{topo, cat, out.book, tables_, scenario_.limits};
    out.exact = solve_bnb(inst);
    assert_feasible(out.exact.solution, "exact solver");
    rec.ran_exact = true;
    rec.exact_profit = out.exact.breakdown;
    rec.exact_served = out.exact.solution.served_count();
    rec.exact_ratio =
        rec.submitted > 0 ? static_cast<double>(rec.exact_served) / rec.submitted : 0.0;
    rec.exact_optimal = out.exact.optimal;
    rec.exact_nodes = out.exact.nodes;
    rec.exact_ms = static_cast<double>(out.exact.elapsed_ms);
  }

  for (std::size_t p = 0; p < out.book.pairs.size(); ++p) {
    const BidSequence& seq = out.book.pairs[p];
    if (seq.size() == 0) continue;
    PairPriceRecord row;
    row.ap = seq.ap;
    row.vm_type = seq.vm_type;
    row.bids = static_cast<int>(seq.size());
    if (rec.ran_heuristic) {
      const Solution& sol = out.heuristic.distribution.solution;
      row.heuristic_k = out.heuristic.pricing.k_hat[p];
      row.heuristic_omega = out.heuristic.pricing.omega[p];
      row.heuristic_served = sol.cut_of(static_cast<int>(p));
      row.heuristic_price = sol.local_price(static_cast<int>(p), out.book);
    }
    if (rec.ran_exact) {
      row.exact_k = out.exact.solution.cut_of(static_cast<int>(p));
      row.exact_price = out.exact.solution.local_price(static_cast<int>(p), out.book);
    }
    rec.prices.push_back(row);
  }

  out.solution = choice == SolverChoice::exact ? out.exact.solution
                                               : out.heuristic.distribution.solution;
  ++frame_;
  return out;
}

std::vector<SlotRecord> Simulation::run_slots(const FrameOutput& frame_out) {
  const Topology& topo = scenario_.topology;
  const int nslots = static_cast<int>(topo.frame_ms / topo.slot_ms);
  FlowSet fs = flows_for_solution(frame_out.solution, frame_out.book, topo,
                                  scenario_.catalog, scenario_.bandwidth.rate_floor_fraction);

  // λ ceiling per flow: the share of the frame data cap falling on one slot.
  std::vector<double> max_load(fs.flows.size());
  const double slot_share = static_cast<double>(topo.slot_ms) / topo.frame_ms;
  for (std::size_t i = 0; i < fs.flows.size(); ++i) {
    int vm = -1;
    for (const Bid& b : frame_out.book.bids)
      if (b.id == fs.flows[i].bid_id) {
        vm = b.vm_type;
        break;
      }
    max_load[i] = scenario_.generator.load_fraction *
                  static_cast<double>(scenario_.catalog.vm_types[vm].max_data_bits) *
                  slot_share;
  }

  std::vector<SlotRecord> out;
  out.reserve(nslots);
  for (int s = 0; s < nslots; ++s) {
    std::mt19937_64 rng = substream(scenario_.generator.seed, 3,
                                    static_cast<std::uint32_t>(frame_out.record.frame),
                                    static_cast<std::uint32_t>(s));
    for (std::size_t i = 0; i < fs.flows.size(); ++i)
      fs.flows[i].load = uniform01(rng) * max_load[i];

    SlotRecord rec;
    rec.frame = frame_out.record.frame;
    rec.slot = s;
    rec.flows = static_cast<int>(fs.flows.size());
    rec.link_utilization.assign(fs.capacity.size(), 0.0);
    if (fs.flows.empty()) {
      out.push_back(std::move(rec));
      continue;
    }
    Allocation alloc = solve_allocation(fs, scenario_.bandwidth.tolerances);
    rec.objective = alloc.kkt.objective;
    rec.converged = alloc.converged;
    rec.iterations = alloc.iterations;
    rec.max_stationarity = alloc.kkt.max_stationarity;
    rec.max_feasibility = alloc.kkt.max_feasibility;
    rec.max_comp_slack = alloc.kkt.max_comp_slack;
    const std::vector<double> usage = fs.link_usage(alloc.rates);
    for (std::size_t l = 0; l < usage.size(); ++l)
      rec.link_utilization[l] = usage[l] / fs.capacity[l];
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace himec
