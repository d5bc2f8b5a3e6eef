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

#ifndef HIMEC_SCENARIO_HPP
#define HIMEC_SCENARIO_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "himec/bandwidth.hpp"
#include "himec/exact_solver.hpp"
#include "himec/topology.hpp"

namespace himec {

/// Random bid and traffic generation knobs. Prices draw from a per-VM-type
/// triangular law capped at the type's on-demand price; per-slot loads draw
/// uniformly from [0, load_fraction * D * slot/frame].
struct GeneratorConfig {
  std::uint64_t seed = 1;
  int frames = 1;
  std::vector<int> bid_schedule = {50};  // per frame, last entry repeats
  std::vector<double> mix;               // per VM type, same order as catalog
  std::vector<Money> price_min;          // default 0
  std::vector<Money> price_mode;         // default cap / 2
  std::vector<Money> price_max;          // default cap
  double mobility = 0.0;                 // chance a persistent bid moves AP
  double load_fraction = 1.0;
  bool persistent_bids = false;          // regenerate every frame when false

  int bids_for_frame(int frame) const {
    if (bid_schedule.empty()) return 0;
    return bid_schedule[std::min<std::size_t>(frame, bid_schedule.size() - 1)];
  }
};

struct BandwidthConfig {
  double rate_floor_fraction = 0.1;  // l_b as a fraction of the VM's base rate
  BandwidthTolerances tolerances{};
};

struct Scenario {
  std::string name;
  Catalog catalog;
  Topology topology;
  GeneratorConfig generator;
  BandwidthConfig bandwidth;
  SolveLimits limits;
};

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the "himec-scenario/1" JSON document. Unknown keys, wrong types,
/// missing fields and schema mismatches all throw ScenarioError with the
/// offending key in the message. Money fields accept exact decimal strings
/// or numbers.
Scenario parse_scenario(const std::string& json_text);

/// Reads and parses a scenario file; throws ScenarioError on IO failure too.
Scenario load_scenario(const std::string& path);

}  // namespace himec

#endif  // HIMEC_SCENARIO_HPP
