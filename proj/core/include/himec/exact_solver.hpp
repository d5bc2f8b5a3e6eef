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

#ifndef HIMEC_EXACT_SOLVER_HPP
#define HIMEC_EXACT_SOLVER_HPP

#include <cstdint>

#include "himec/objective.hpp"

namespace himec {

struct SolveLimits {
  std::int64_t node_budget = 10'000'000;  // search nodes, cut tree + packing
  std::int64_t time_budget_ms = 10'000;
};

struct Instance {
  const Topology& topology;
  const Catalog& catalog;
  const BidBook& book;
  const CostTables& tables;
  SolveLimits limits{};
};

struct SolveReport {
  Solution solution;
  ProfitBreakdown breakdown;
  bool optimal = false;
  std::int64_t nodes = 0;
  std::int64_t elapsed_ms = 0;
};

/// Full enumeration of serve-prefix vectors with an embedded optimal packing
/// search. Refuses instances with more than 12 bids total. Ties between
/// optima resolve to the first solution in ascending prefix-vector order,
/// which is the lexicographically smallest serve-flag vector.
SolveReport solve_exhaustive(const Instance& inst);

/// Depth-first branch and bound over serve prefixes, sequences ordered by
/// their best achievable revenue. A node's bound is the decided revenue plus
/// the best revenue of every undecided sequence (running costs are
/// nonnegative, so dropping them keeps the bound admissible). When a budget
/// runs out the incumbent is returned with optimal = false.
SolveReport solve_bnb(const Instance& inst);

}  // namespace himec

#endif  // HIMEC_EXACT_SOLVER_HPP
