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

#ifndef HIMEC_SOLUTION_HPP
#define HIMEC_SOLUTION_HPP

#include <cstdint>
#include <vector>

#include "himec/bids.hpp"

namespace himec {

/// One bid-to-machine assignment (a set z variable). pm_index is 1-based to
/// match the index-priority constraint on machines.
struct Placement {
  int bid_index = -1;  // position in BidBook::bids
  int cloudlet = -1;
  int pm_type = -1;
  int pm_index = 0;

  friend bool operator==(const Placement&, const Placement&) = default;
};

/// Candidate assignment triple. The representation can express infeasible
/// states (non-monotone serve flags, bids on closed machines) on purpose:
/// feasibility checking is a separate operation that reports violations.
struct Solution {
  /// served[pair][k] is the serve flag of rank k+1 in that pair's sequence.
  std::vector<std::vector<std::uint8_t>> served;
  /// pm_on[cloudlet][pm_type][m] is the on flag of machine m+1.
  std::vector<std::vector<std::vector<std::uint8_t>>> pm_on;
  std::vector<Placement> placements;  // at most one per bid, sorted by bid_index

  static Solution empty_for(const BidBook& book, const Topology& topo);

  /// Serve the first `cut` ranks of a pair (monotone by construction).
  void set_cut(int pair, int cut);
  /// Count of served ranks when flags are a prefix; the prefix length otherwise.
  int cut_of(int pair) const;
  bool is_served(int pair, int rank_1based) const;
  int served_count() const;

  /// Local price of a pair: the willingness price of the last served rank,
  /// or 0 when the pair serves nothing.
  Money local_price(int pair, const BidBook& book) const;

  /// Deterministic comparison key: serve flags then placements, both in
  /// canonical order. Used for reproducible tie-breaking between optima.
  std::vector<std::int32_t> canonical_key() const;
};

}  // namespace himec

#endif  // HIMEC_SOLUTION_HPP
