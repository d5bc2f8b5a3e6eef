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

#ifndef HIMEC_BANDWIDTH_HPP
#define HIMEC_BANDWIDTH_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace himec {

/// One bid served off the field tier, as seen by the per-slot rate allocator.
struct Flow {
  std::int64_t bid_id = 0;
  int ap = -1;
  int cloudlet = -1;
  double weight = 1.0;      // QoS weight of the (AP, cloudlet) pair
  double load = 0.0;        // traffic load at slot start (bits)
  double lower = 0.0;       // rate floor (bits/s), > 0
  double upper = 0.0;       // rate ceiling (bits/s), >= lower
  std::vector<int> links;   // link ids the flow traverses
};

/// A rate-allocation problem instance: minimize sum weight*load/rate over box
/// bounds and per-link capacity constraints on the traversed links.
struct FlowSet {
  std::vector<double> capacity;  // per link id
  std::vector<Flow> flows;

  int num_links() const { return static_cast<int>(capacity.size()); }
  int num_flows() const { return static_cast<int>(flows.size()); }
  /// Per-link sum of the given rates (V * r).
  std::vector<double> link_usage(const std::vector<double>& rates) const;
  double objective(const std::vector<double>& rates) const;
  /// Checks invariants (positive bounds, jointly feasible floors, ...).
  std::vector<std::string> validate() const;
};

/// Closed-form minimizer of the Lagrangian for fixed link multipliers:
/// rate = clamp(sqrt(weight*load / sum of duals on the path), lower, upper),
/// with the ceiling when no traversed link is priced and the floor when the
/// flow carries no load. Throws std::invalid_argument on a negative dual.
std::vector<double> primal_from_duals(const FlowSet& fs, const std::vector<double>& duals);

/// KKT residuals recomputed from scratch, independent of solver state.
/// Stationarity is reported for interior flows; clamped flows contribute the
/// violation of the corresponding multiplier sign condition instead.
struct KktReport {
  double max_stationarity = 0.0;
  double max_feasibility = 0.0;   // relative capacity overshoot
  double max_comp_slack = 0.0;
  double max_box_violation = 0.0;
  std::vector<double> link_slack;       // R_m - (V r)_m
  std::vector<double> link_comp_slack;  // normalized |gamma_m * slack_m|
  double objective = 0.0;

  bool within(double tol) const {
    return max_stationarity <= tol && max_feasibility <= tol && max_comp_slack <= tol &&
           max_box_violation <= tol;
  }
};

KktReport kkt_report(const FlowSet& fs, const std::vector<double>& rates,
                     const std::vector<double>& duals);

struct BandwidthTolerances {
  double feasibility = 1e-6;
  double comp_slack = 1e-6;
  double stationarity = 1e-6;
  std::int64_t max_iterations = 100'000;
};

struct Allocation {
  std::vector<double> rates;
  std::vector<double> duals;
  KktReport kkt;
  bool converged = false;
  std::int64_t iterations = 0;
};

/// Dual ascent on the link multipliers by cyclic coordinate maximization:
/// each pass bisects every link price to the root of its complementary
/// slackness condition under the closed-form primal, which keeps the method
/// exact across arbitrary capacity and dual scales. max_iterations bounds the
/// number of sweeps; the best iterate with its residuals is returned when the
/// budget runs out un-converged.
Allocation solve_allocation(const FlowSet& fs, const BandwidthTolerances& tol = {},
                            std::vector<double> initial_duals = {});

}  // namespace himec

#endif  // HIMEC_BANDWIDTH_HPP
