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

#ifndef HIMEC_SIM_HPP
#define HIMEC_SIM_HPP

#include <cstdint>
#include <vector>

#include "himec/heuristics.hpp"
#include "himec/scenario.hpp"

namespace himec {

enum class SolverChoice { heuristic, exact, both };

/// Deterministic bid generation for one frame: VM-type counts follow the mix
/// ratios with largest-remainder rounding, AP assignment is uniform, prices
/// draw from the per-type triangular law, and bid ids are a shuffled arrival
/// order. Identical inputs give identical bids on every platform.
std::vector<Bid> generate_bids(const GeneratorConfig& cfg, const Catalog& catalog,
                               int num_aps, int frame);

/// Per-pair price comparison line (one row of the local-price figures).
struct PairPriceRecord {
  int ap = -1;
  int vm_type = -1;
  int bids = 0;
  int heuristic_k = 0;           // phase-1 serve count
  Money heuristic_omega = 0;     // phase-1 local price
  int heuristic_served = 0;      // after distribution settled the flags
  Money heuristic_price = 0;     // realized local price of the final solution
  int exact_k = 0;
  Money exact_price = 0;
};

struct FrameRecord {
  int frame = 0;
  int submitted = 0;

  bool ran_heuristic = false;
  ProfitBreakdown heuristic_profit{};
  int heuristic_served = 0;
  double heuristic_ratio = 0.0;
  int heuristic_dropped = 0;

  bool ran_exact = false;
  ProfitBreakdown exact_profit{};
  int exact_served = 0;
  double exact_ratio = 0.0;
  bool exact_optimal = false;
  std::int64_t exact_nodes = 0;

  std::vector<PairPriceRecord> prices;

  // Wall-clock figures; reported separately from the deterministic records.
  double heuristic_pricing_ms = 0.0;
  double heuristic_distribution_ms = 0.0;
  double exact_ms = 0.0;
};

struct SlotRecord {
  int frame = 0;
  int slot = 0;
  int flows = 0;
  double objective = 0.0;
  bool converged = true;
  std::int64_t iterations = 0;
  double max_stationarity = 0.0;
  double max_feasibility = 0.0;
  double max_comp_slack = 0.0;
  std::vector<double> link_utilization;  // usage / capacity per link id
};

struct FrameOutput {
  FrameRecord record;
  BidBook book;
  Solution solution;  // feeds the slot runs: exact's in exact mode, else heuristic's
  HeuristicResult heuristic;
  SolveReport exact;
};

/// Flow network of a frame solution: one flow per non-field placement with
/// the placement's QoS weight, rate box [floor_fraction * r_min, smallest
/// path capacity] and traversed links. Loads start at zero.
FlowSet flows_for_solution(const Solution& sol, const BidBook& book, const Topology& topo,
                           const Catalog& catalog, double floor_fraction);

/// Two-time-scale engine. Frames advance internal state (bid persistence and
/// mobility); slots are pure given a frame output.
class Simulation {
 public:
  explicit Simulation(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  const CostTables& tables() const { return tables_; }
  int frames_done() const { return frame_; }

  /// Runs one auction frame with the chosen solver(s) and asserts the
  /// resulting solution is feasible. Throws std::logic_error if a solver
  /// ever emits an infeasible solution.
  FrameOutput run_frame(SolverChoice choice);

  /// Runs frame_ms / slot_ms bandwidth slots against a frame solution.
  std::vector<SlotRecord> run_slots(const FrameOutput& frame_out);

 private:
  Scenario scenario_;
  CostTables tables_;
  std::vector<Bid> bids_;  // carried across frames when persistence is on
  int frame_ = 0;
};

}  // namespace himec

#endif  // HIMEC_SIM_HPP
