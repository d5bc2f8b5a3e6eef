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

#ifndef HIMEC_BIDS_HPP
#define HIMEC_BIDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "himec/money.hpp"
#include "himec/topology.hpp"

namespace himec {

struct Bid {
  std::int64_t id = 0;
  int ap = 0;       // AP index
  int vm_type = 0;  // index into Catalog::vm_types
  Money price = 0;  // maximum willingness price per frame
};

/// Price-sorted bid sequence for one (AP, VM type) pair. Rank 1 is the
/// highest price; equal prices are ranked by ascending bid id.
struct BidSequence {
  int ap = 0;
  int vm_type = 0;
  std::vector<int> bid_index;  // positions into BidBook::bids, rank order
  std::vector<Money> prices;   // e_{k,a}^v, parallel to bid_index

  Money price_at_rank(int rank_1based) const { return prices[rank_1based - 1]; }
  int size() const { return static_cast<int>(bid_index.size()); }
};

/// All bids of a frame plus the per-(AP, VM type) ranked sequences and the
/// rank/pair lookup per bid. Sequences are laid out AP-major, VM-minor, so
/// pair_index(a, v) = a * num_vm_types + v.
struct BidBook {
  std::vector<Bid> bids;
  std::vector<BidSequence> pairs;
  std::vector<int> rank_of_bid;  // 1-based rank within its pair
  std::vector<int> pair_of_bid;
  int num_aps = 0;
  int num_vm_types = 0;

  int pair_index(int ap, int vm_type) const { return ap * num_vm_types + vm_type; }
  int total_bids() const { return static_cast<int>(bids.size()); }
};

/// Sorts bids into their (AP, VM type) sequences, prices descending and ties
/// broken by ascending bid id. Throws std::invalid_argument on a bid that
/// references an unknown AP or VM type, or carries a negative price.
BidBook build_bid_book(const std::vector<Bid>& bids, const Topology& topo,
                       const Catalog& catalog);

/// Reads bids from delimited text with header "id,ap,vm_type,price".
std::vector<Bid> read_bids_csv(const std::string& path, const Topology& topo,
                               const Catalog& catalog);
void write_bids_csv(const std::string& path, const std::vector<Bid>& bids,
                    const Topology& topo, const Catalog& catalog);

}  // namespace himec

#endif  // HIMEC_BIDS_HPP
