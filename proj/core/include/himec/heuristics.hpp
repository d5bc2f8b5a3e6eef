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

#ifndef HIMEC_HEURISTICS_HPP
#define HIMEC_HEURISTICS_HPP

#include <cstdint>
#include <vector>

#include "himec/objective.hpp"

namespace himec {

struct PricingOptions {
  /// When set, a break-even rank (estimated profit exactly 0) still counts as
  /// worth serving, which is the literal reading of the update rule. Default
  /// keeps the serve threshold strictly positive.
  bool serve_breakeven = false;
};

/// Phase-1 result: per (ap, vm) pair the estimated unit serving cost, the
/// chosen serve count with its local price, and the resulting served set.
struct PricingOutcome {
  std::vector<double> phi;                // money micros per VM, estimate
  std::vector<std::int64_t> capacity;     // hostable instance estimate g
  std::vector<int> k_hat;                 // serve count
  std::vector<Money> omega;               // local price, 0 when k_hat = 0
  std::vector<double> rho_hat;            // estimated profit at k_hat
  std::vector<std::uint8_t> in_served;    // per bid index
  int served_total = 0;
};

struct CutChoice {
  int k = 0;
  Money omega = 0;
  double rho = 0.0;
};

/// Serve-count selection for one pair: scan k ascending and keep the last k
/// maximizing k * (price_k - phi). Prices are the pair's ranked willingness
/// prices (descending); phi is in money micros.
CutChoice favored_cut(const std::vector<Money>& prices, double phi, bool serve_breakeven);

PricingOutcome price_vms(const BidBook& book, const Topology& topo, const Catalog& catalog,
                         const PricingOptions& opt = {});

/// One machine-opening round of phase 2, for audit and replay.
struct RoundLog {
  int pm_type = -1;
  int cloudlet = -1;
  double utility = 0.0;
  int list_size = 0;
};

struct DistributionResult {
  Solution solution;
  std::vector<RoundLog> rounds;
  int assigned = 0;  // bids that kept their machine after serve flags settled
  int dropped = 0;   // phase-1 served bids that found no machine or lost it
};

/// Phase 2: repeatedly scores one fresh machine instance per (PM type,
/// cloudlet) by the utility of the greedy packing list it could take, opens
/// the best one, and assigns its list. Serve flags are then settled to the
/// longest assigned prefix of each pair, dropping assigned bids above a gap,
/// so the result always satisfies the rank-monotonicity constraint.
DistributionResult distribute_vms(const PricingOutcome& pricing, const BidBook& book,
                                  const Topology& topo, const Catalog& catalog);

struct HeuristicResult {
  PricingOutcome pricing;
  DistributionResult distribution;
  double pricing_ms = 0.0;
  double distribution_ms = 0.0;
};

HeuristicResult run_heuristic(const BidBook& book, const Topology& topo,
                              const Catalog& catalog, const PricingOptions& opt = {});

}  // namespace himec

#endif  // HIMEC_HEURISTICS_HPP
