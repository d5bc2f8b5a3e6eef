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

#ifndef HIMEC_OBJECTIVE_HPP
#define HIMEC_OBJECTIVE_HPP

#include <string>
#include <vector>

#include "himec/solution.hpp"

namespace himec {

/// Per-frame cost contributions, precomputed once per (topology, catalog) on
/// the exact money grid. Each table entry is the energy cost of one frame:
///   frame_hours * PUE * q_c * P, rounded half-to-even to money micros,
/// and the per-bid QoS penalty xi * D / (frame_seconds * r_min) likewise.
/// Keeping the objective a sum of precomputed integers makes solver-vs-oracle
/// comparisons exact and branch-and-bound bookkeeping additive.
struct CostTables {
  // [cloudlet][vm_type]: energy cost of running one VM of that type for a frame
  std::vector<std::vector<Money>> vm_energy;
  // [cloudlet][pm_type]: idle energy cost of one switched-on machine for a frame
  std::vector<std::vector<Money>> pm_idle_energy;
  // [ap][vm_type]: lost revenue of a bid placed at the AP's shallow / the deep cloudlet
  std::vector<std::vector<Money>> lr_shallow;
  std::vector<std::vector<Money>> lr_deep;

  Money lost_revenue_term(const Topology& topo, int ap, int cloudlet, int vm_type) const;
};

CostTables build_cost_tables(const Topology& topo, const Catalog& catalog);

struct ProfitBreakdown {
  Money revenue = 0;
  Money electricity = 0;
  Money lost_revenue = 0;
  Money profit() const { return revenue - electricity - lost_revenue; }
};

/// Auction revenue of a frame: sum over pairs of k* e_{k*} with k* the last
/// served rank (the telescoped form of the per-rank sum). Throws
/// std::invalid_argument when serve flags are not monotone within a pair.
Money revenue(const Solution& sol, const BidBook& book);

/// Energy cost of the assignment. Throws std::invalid_argument when a bid is
/// placed on a machine that is not switched on.
Money electricity_cost(const Solution& sol, const BidBook& book, const Topology& topo,
                       const CostTables& tables);

/// QoS penalty of all non-field placements.
Money lost_revenue(const Solution& sol, const BidBook& book, const Topology& topo,
                   const CostTables& tables);

ProfitBreakdown profit(const Solution& sol, const BidBook& book, const Topology& topo,
                       const CostTables& tables);

struct Violation {
  std::string constraint;  // "C1".."C10"
  std::string detail;
};

/// Full feasibility audit of a candidate solution against the assignment,
/// capacity, link, monotonicity and binarity constraints. Returns one entry
/// per violated constraint instance; empty means feasible.
std::vector<Violation> check_feasibility(const Solution& sol, const BidBook& book,
                                         const Topology& topo, const Catalog& catalog);

}  // namespace himec

#endif  // HIMEC_OBJECTIVE_HPP
