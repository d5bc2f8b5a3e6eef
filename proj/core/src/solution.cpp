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

#include "himec/solution.hpp"

#include <algorithm>

namespace himec {

Solution Solution::empty_for(const BidBook& book, const Topology& topo) {
  Solution s;
  s.served.resize(book.pairs.size());
  for (std::size_t p = 0; p < book.pairs.size(); ++p)
    s.served[p].assign(book.pairs[p].size(), 0);
  s.pm_on.resize(topo.num_cloudlets());
  for (int c = 0; c < topo.num_cloudlets(); ++c) {
    const Cloudlet& cl = topo.cloudlets[c];
    s.pm_on[c].resize(cl.pm_type_ids.size());
    for (std::size_t t = 0; t < cl.pm_type_ids.size(); ++t)
      s.pm_on[c][t].assign(cl.pm_counts[t], 0);
  }
  return s;
}

void Solution::set_cut(int pair, int cut) {
  auto& flags = served[pair];
  for (std::size_t k = 0; k < flags.size(); ++k)
    flags[k] = static_cast<int>(k) < cut ? 1 : 0;
}

int Solution::cut_of(int pair) const {
  const auto& flags = served[pair];
  int cut = 0;
  while (cut < static_cast<int>(flags.size()) && flags[cut]) ++cut;
  return cut;
}

bool Solution::is_served(int pair, int rank_1based) const {
  return served[pair][rank_1based - 1] != 0;
}

int Solution::served_count() const {
  int n = 0;
  for (const auto& flags : served)
    for (auto f : flags) n += f;
  return n;
}

Money Solution::local_price(int pair, const BidBook& book) const {
  int cut = cut_of(pair);
  return cut == 0 ? 0 : book.pairs[pair].price_at_rank(cut);
}

std::vector<std::int32_t> Solution::canonical_key() const {
  std::vector<std::int32_t> key;
  for (const auto& flags : served)
    for (auto f : flags) key.push_back(f);
  std::vector<Placement> sorted = placements;
  std::sort(sorted.begin(), sorted.end(), [](const Placement& a, const Placement& b) {
    return std::tie(a.bid_index, a.cloudlet, a.pm_type, a.pm_index) <
           std::tie(b.bid_index, b.cloudlet, b.pm_type, b.pm_index);
  });
  for (const Placement& p : sorted) {
    key.push_back(p.bid_index);
    key.push_back(p.cloudlet);
    key.push_back(p.pm_type);
    key.push_back(p.pm_index);
  }
  return key;
}

}  // namespace himec
