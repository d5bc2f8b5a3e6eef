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

#include "himec/bids.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace himec {

BidBook build_bid_book(const std::vector<Bid>& bids, const Topology& topo,
                       const Catalog& catalog) {
  BidBook book;
  book.bids = bids;
  book.num_aps = topo.num_aps();
  book.num_vm_types = static_cast<int>(catalog.vm_types.size());
  book.pairs.resize(static_cast<std::size_t>(book.num_aps) * book.num_vm_types);
  for (int a = 0; a < book.num_aps; ++a)
    for (int v = 0; v < book.num_vm_types; ++v) {
      BidSequence& seq = book.pairs[book.pair_index(a, v)];
      seq.ap = a;
      seq.vm_type = v;
    }

  book.rank_of_bid.assign(bids.size(), 0);
  book.pair_of_bid.assign(bids.size(), -1);
  for (std::size_t i = 0; i < bids.size(); ++i) {
    const Bid& b = bids[i];
    if (b.ap < 0 || b.ap >= book.num_aps)
      throw std::invalid_argument("bid " + std::to_string(b.id) + " references an unknown AP");
    if (b.vm_type < 0 || b.vm_type >= book.num_vm_types)
      throw std::invalid_argument("bid " + std::to_string(b.id) + " references an unknown VM type");
    if (b.price < 0)
      throw std::invalid_argument("bid " + std::to_string(b.id) + " has a negative price");
    int pair = book.pair_index(b.ap, b.vm_type);
    book.pair_of_bid[i] = pair;
    book.pairs[pair].bid_index.push_back(static_cast<int>(i));
  }

  for (BidSequence& seq : book.pairs) {
    std::sort(seq.bid_index.begin(), seq.bid_index.end(), [&](int lhs, int rhs) {
      if (bids[lhs].price != bids[rhs].price) return bids[lhs].price > bids[rhs].price;
      return bids[lhs].id < bids[rhs].id;
    });
    seq.prices.reserve(seq.bid_index.size());
    for (std::size_t k = 0; k < seq.bid_index.size(); ++k) {
      book.rank_of_bid[seq.bid_index[k]] = static_cast<int>(k) + 1;
      seq.prices.push_back(bids[seq.bid_index[k]].price);
    }
  }
  return book;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

std::vector<Bid> read_bids_csv(const std::string& path, const Topology& topo,
                               const Catalog& catalog) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open bids file: " + path);
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"id", "ap", "vm_type", "price"})
    throw std::runtime_error("bids file must start with header id,ap,vm_type,price: " + path);

  std::vector<Bid> bids;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 4)
      throw std::runtime_error("bids file row with wrong field count: " + line);
    Bid b;
    b.id = std::stoll(fields[0]);
    auto ap_it = std::find(topo.ap_names.begin(), topo.ap_names.end(), fields[1]);
    if (ap_it == topo.ap_names.end())
      throw std::runtime_error("bids file references unknown AP '" + fields[1] + "'");
    b.ap = static_cast<int>(ap_it - topo.ap_names.begin());
    b.vm_type = catalog.vm_index(fields[2]);
    if (b.vm_type < 0)
      throw std::runtime_error("bids file references unknown VM type '" + fields[2] + "'");
    b.price = money_from_string(fields[3]);
    bids.push_back(b);
  }
  return bids;
}

void write_bids_csv(const std::string& path, const std::vector<Bid>& bids,
                    const Topology& topo, const Catalog& catalog) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write bids file: " + path);
  out << "id,ap,vm_type,price\n";
  for (const Bid& b : bids)
    out << b.id << ',' << topo.ap_names[b.ap] << ',' << catalog.vm_types[b.vm_type].name << ','
        << money_to_string(b.price) << '\n';
}

}  // namespace himec
