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

#include "himec/records.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace himec {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string frames_csv(const std::vector<FrameRecord>& frames) {
  std::ostringstream out;
  out << "frame,solver,submitted,revenue,electricity,lost_revenue,profit,served,ratio,"
         "dropped,optimal,nodes\n";
  for (const FrameRecord& f : frames) {
    if (f.ran_heuristic) {
      out << f.frame << ",heuristic," << f.submitted << ','
          << money_to_string(f.heuristic_profit.revenue) << ','
          << money_to_string(f.heuristic_profit.electricity) << ','
          << money_to_string(f.heuristic_profit.lost_revenue) << ','
          << money_to_string(f.heuristic_profit.profit()) << ',' << f.heuristic_served
          << ',' << fmt(f.heuristic_ratio) << ',' << f.heuristic_dropped << ",,\n";
    }
    if (f.ran_exact) {
      out << f.frame << ",exact," << f.submitted << ','
          << money_to_string(f.exact_profit.revenue) << ','
          << money_to_string(f.exact_profit.electricity) << ','
          << money_to_string(f.exact_profit.lost_revenue) << ','
          << money_to_string(f.exact_profit.profit()) << ',' << f.exact_served << ','
          << fmt(f.exact_ratio) << ",," << (f.exact_optimal ? "true" : "false") << ','
          << f.exact_nodes << '\n';
    }
  }
  return out.str();
}

std::string slots_csv(const std::vector<SlotRecord>& slots, const Topology& topo) {
  std::ostringstream out;
  out << "frame,slot,flows,objective,converged,iterations,max_stationarity,"
         "max_feasibility,max_comp_slack";
  for (int l = 0; l < topo.num_links(); ++l) out << ",util_" << topo.link_name(l);
  out << '\n';
  for (const SlotRecord& s : slots) {
    out << s.frame << ',' << s.slot << ',' << s.flows << ',' << fmt(s.objective) << ','
        << (s.converged ? "true" : "false") << ',' << s.iterations << ','
        << fmt(s.max_stationarity) << ',' << fmt(s.max_feasibility) << ','
        << fmt(s.max_comp_slack);
    for (double u : s.link_utilization) out << ',' << fmt(u);
    out << '\n';
  }
  return out.str();
}

std::string prices_csv(const std::vector<FrameRecord>& frames, const Topology& topo,
                       const Catalog& catalog) {
  std::ostringstream out;
  out << "frame,ap,vm_type,bids,heuristic_k,heuristic_omega,heuristic_served,"
         "heuristic_price,exact_k,exact_price\n";
  for (const FrameRecord& f : frames) {
    for (const PairPriceRecord& r : f.prices) {
      out << f.frame << ',' << topo.ap_names[r.ap] << ','
          << catalog.vm_types[r.vm_type].name << ',' << r.bids << ',';
      if (f.ran_heuristic)
        out << r.heuristic_k << ',' << money_to_string(r.heuristic_omega) << ','
            << r.heuristic_served << ',' << money_to_string(r.heuristic_price) << ',';
      else
        out << ",,,,";
      if (f.ran_exact)
        out << r.exact_k << ',' << money_to_string(r.exact_price);
      else
        out << ',';
      out << '\n';
    }
  }
  return out.str();
}

std::string timings_csv(const std::vector<FrameRecord>& frames) {
  std::ostringstream out;
  out << "frame,heuristic_pricing_ms,heuristic_distribution_ms,exact_ms\n";
  for (const FrameRecord& f : frames) {
    out << f.frame << ',';
    if (f.ran_heuristic)
      out << fmt(f.heuristic_pricing_ms) << ',' << fmt(f.heuristic_distribution_ms) << ',';
    else
      out << ",,";
    if (f.ran_exact) out << fmt(f.exact_ms);
    out << '\n';
  }
  return out.str();
}

std::string summary_json(const std::string& scenario_name, std::uint64_t seed,
                         const std::string& mode, const std::vector<FrameRecord>& frames,
                         const std::vector<SlotRecord>& slots) {
  nlohmann::ordered_json j;
  j["scenario"] = scenario_name;
  j["seed"] = seed;
  j["mode"] = mode;
  j["frames"] = frames.size();

  bool any_h = false, any_x = false;
  Money h_profit = 0, x_profit = 0;
  double h_ratio = 0, x_ratio = 0;
  int h_dropped = 0;
  bool all_optimal = true;
  for (const FrameRecord& f : frames) {
    if (f.ran_heuristic) {
      any_h = true;
      h_profit += f.heuristic_profit.profit();
      h_ratio += f.heuristic_ratio;
      h_dropped += f.heuristic_dropped;
    }
    if (f.ran_exact) {
      any_x = true;
      x_profit += f.exact_profit.profit();
      x_ratio += f.exact_ratio;
      all_optimal = all_optimal && f.exact_optimal;
    }
  }
  if (any_h) {
    j["heuristic"]["profit_total"] = money_to_string(h_profit);
    j["heuristic"]["served_ratio_mean"] = frames.empty() ? 0.0 : h_ratio / frames.size();
    j["heuristic"]["dropped_total"] = h_dropped;
  }
  if (any_x) {
    j["exact"]["profit_total"] = money_to_string(x_profit);
    j["exact"]["served_ratio_mean"] = frames.empty() ? 0.0 : x_ratio / frames.size();
    j["exact"]["all_optimal"] = all_optimal;
  }

  std::size_t converged = 0;
  double obj = 0.0;
  for (const SlotRecord& s : slots) {
    converged += s.converged ? 1 : 0;
    obj += s.objective;
  }
  j["slots"]["count"] = slots.size();
  j["slots"]["converged"] = converged;
  j["slots"]["objective_mean"] = slots.empty() ? 0.0 : obj / slots.size();
  return j.dump(2) + "\n";
}

std::string solution_csv(const Solution& sol, const BidBook& book, const Topology& topo,
                         const Catalog& catalog) {
  std::ostringstream out;
  out << "bid,ap,vm_type,cloudlet,pm_type,pm_index,price\n";
  for (const Placement& pl : sol.placements) {
    const Bid& b = book.bids[pl.bid_index];
    out << b.id << ',' << topo.ap_names[b.ap] << ',' << catalog.vm_types[b.vm_type].name
        << ',' << topo.cloudlets[pl.cloudlet].name << ','
        << catalog.pm_types[pl.pm_type].name << ',' << pl.pm_index << ','
        << money_to_string(sol.local_price(book.pair_of_bid[pl.bid_index], book)) << '\n';
  }
  return out.str();
}

Solution read_solution_csv(const std::string& path, const BidBook& book,
                           const Topology& topo, const Catalog& catalog) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open solution file: " + path);
  std::string line;
  if (!std::getline(in, line) ||
      split_line(line) !=
          std::vector<std::string>{"bid", "ap", "vm_type", "cloudlet", "pm_type",
                                   "pm_index", "price"})
    throw std::runtime_error("solution file must start with its column header: " + path);

  Solution sol = Solution::empty_for(book, topo);
  auto cloudlet_index = [&](const std::string& name) {
    for (int c = 0; c < topo.num_cloudlets(); ++c)
      if (topo.cloudlets[c].name == name) return c;
    throw std::runtime_error("unknown cloudlet \"" + name + "\" in " + path);
  };

  std::vector<std::uint8_t> listed(book.bids.size(), 0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_line(line);
    if (f.size() != 7) throw std::runtime_error("malformed solution row: " + line);
    int id;
    try {
      id = std::stoi(f[0]);
    } catch (const std::exception&) {
      throw std::runtime_error("malformed bid id in solution row: " + line);
    }
    int bid_index = -1;
    for (std::size_t i = 0; i < book.bids.size(); ++i)
      if (book.bids[i].id == id) {
        bid_index = static_cast<int>(i);
        break;
      }
    if (bid_index < 0) throw std::runtime_error("solution row for unknown bid: " + line);
    if (listed[bid_index]) throw std::runtime_error("duplicate solution row: " + line);
    listed[bid_index] = 1;

    Placement pl;
    pl.bid_index = bid_index;
    pl.cloudlet = cloudlet_index(f[3]);
    pl.pm_type = catalog.pm_index(f[4]);
    if (pl.pm_type < 0) throw std::runtime_error("unknown pm type in row: " + line);
    try {
      pl.pm_index = std::stoi(f[5]);
    } catch (const std::exception&) {
      throw std::runtime_error("malformed pm index in solution row: " + line);
    }
    sol.placements.push_back(pl);

    const int slot = topo.pm_slot(pl.cloudlet, pl.pm_type);
    if (slot < 0 || pl.pm_index < 1 ||
        pl.pm_index > static_cast<int>(sol.pm_on[pl.cloudlet][slot].size()))
      throw std::runtime_error("placement outside the PM inventory: " + line);
    sol.pm_on[pl.cloudlet][slot][pl.pm_index - 1] = 1;
  }

  for (std::size_t p = 0; p < book.pairs.size(); ++p) {
    const BidSequence& seq = book.pairs[p];
    int cut = 0;
    while (cut < static_cast<int>(seq.size()) && listed[seq.bid_index[cut]]) ++cut;
    for (int k = cut; k < static_cast<int>(seq.size()); ++k)
      if (listed[seq.bid_index[k]])
        throw std::runtime_error("served bids of a pair must be a rank prefix");
    sol.set_cut(static_cast<int>(p), cut);
  }
  std::sort(sol.placements.begin(), sol.placements.end(),
            [](const Placement& a, const Placement& b) { return a.bid_index < b.bid_index; });
  return sol;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create " + tmp);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

}  // namespace himec
