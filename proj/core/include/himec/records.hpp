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

#ifndef HIMEC_RECORDS_HPP
#define HIMEC_RECORDS_HPP

#include <string>
#include <vector>

#include "himec/sim.hpp"

namespace himec {

// Record serialization. Every formatter returns the full file body so tests
// can compare bytes without touching the filesystem. Numeric formatting is
// locale-independent by construction. Wall-clock timings are kept out of
// frames_csv on purpose: the frame/slot/price streams are byte-reproducible
// for a fixed (scenario, seed), timings never are, so they get their own
// file.

std::string frames_csv(const std::vector<FrameRecord>& frames);
std::string slots_csv(const std::vector<SlotRecord>& slots, const Topology& topo);
std::string prices_csv(const std::vector<FrameRecord>& frames, const Topology& topo,
                       const Catalog& catalog);
std::string timings_csv(const std::vector<FrameRecord>& frames);
std::string summary_json(const std::string& scenario_name, std::uint64_t seed,
                         const std::string& mode, const std::vector<FrameRecord>& frames,
                         const std::vector<SlotRecord>& slots);

/// Served bids of a solution as a flat table: one row per bid with its
/// placement and the local price its pair settled on.
std::string solution_csv(const Solution& sol, const BidBook& book, const Topology& topo,
                         const Catalog& catalog);

/// Rebuilds a Solution from solution_csv output. Serve flags come from the
/// listed bids (which must form rank prefixes), machines are switched on
/// exactly where bids landed. Throws std::runtime_error on malformed input.
Solution read_solution_csv(const std::string& path, const BidBook& book,
                           const Topology& topo, const Catalog& catalog);

/// Writes via a temp file in the same directory plus rename, so readers never
/// observe a half-written file. Throws std::runtime_error on IO failure.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace himec

#endif  // HIMEC_RECORDS_HPP
