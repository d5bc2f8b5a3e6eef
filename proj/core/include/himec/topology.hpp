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

#ifndef HIMEC_TOPOLOGY_HPP
#define HIMEC_TOPOLOGY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "himec/catalog.hpp"
#include "himec/money.hpp"

namespace himec {

enum class Tier { field = 0, shallow = 1, deep = 2 };

const char* tier_name(Tier t);

struct Cloudlet {
  std::string name;
  Tier tier = Tier::field;
  std::vector<int> pm_type_ids;   // indices into Catalog::pm_types
  std::vector<int> pm_counts;     // parallel to pm_type_ids
  Money electricity_per_kwh = 0;  // q_c
};

/// Three-tier edge hierarchy: every AP owns one co-located field cloudlet,
/// is attached to exactly one shallow cloudlet (PoP), and reaches the single
/// deep cloudlet over the shared backhaul. Cloudlets are kept in canonical
/// order: field cloudlets by AP, then shallow cloudlets, then the deep one.
///
/// Link ids follow the same canonical layout:
///   [0, num_aps)                         last-mile link of each AP
///   [num_aps, num_aps + num_shallow)     aggregation link of each PoP
///   num_aps + num_shallow                the backhaul link
struct Topology {
  std::vector<std::string> ap_names;
  std::vector<Cloudlet> cloudlets;
  std::vector<std::vector<int>> shallow_aps;  // per shallow cloudlet: attached AP ids

  std::vector<std::int64_t> last_mile_bps;    // per AP
  std::vector<std::int64_t> aggregation_bps;  // per shallow cloudlet
  std::int64_t backhaul_bps = 0;

  // QoS weights; non-field placements only, field placements carry none.
  std::vector<Money> xi_shallow;  // per AP, weight of (a, shallow(a))
  std::vector<Money> xi_deep;     // per AP, weight of (a, deep)

  std::int64_t pue_ppm = 1'000'000;  // facility power / IT power, parts per million
  std::int64_t frame_ms = 0;
  std::int64_t slot_ms = 0;

  int num_aps() const { return static_cast<int>(ap_names.size()); }
  int num_shallow() const { return static_cast<int>(shallow_aps.size()); }
  int num_cloudlets() const { return static_cast<int>(cloudlets.size()); }
  int num_links() const { return num_aps() + num_shallow() + 1; }

  int field_cloudlet(int ap) const { return ap; }
  int deep_cloudlet() const { return num_aps() + num_shallow(); }
  /// Shallow cloudlet of an AP, or -1 if the AP is unattached/multiply attached.
  int shallow_cloudlet(int ap) const;

  int last_mile_link(int ap) const { return ap; }
  int aggregation_link(int shallow_pos) const { return num_aps() + shallow_pos; }
  int backhaul_link() const { return num_aps() + num_shallow(); }
  std::int64_t link_capacity_bps(int link) const;
  std::string link_name(int link) const;

  Tier tier_of(int cloudlet) const { return cloudlets[cloudlet].tier; }
  bool reaches(int ap, int cloudlet) const;
  /// Position of a catalog PM type in a cloudlet's inventory, or -1.
  int pm_slot(int cloudlet, int pm_type) const;

  /// QoS weight for placing a bid from `ap` at `cloudlet`; zero for the field tier.
  Money xi(int ap, int cloudlet) const;

  double frame_seconds() const { return static_cast<double>(frame_ms) / 1000.0; }
  double slot_seconds() const { return static_cast<double>(slot_ms) / 1000.0; }
  double pue() const { return static_cast<double>(pue_ppm) / 1'000'000.0; }
};

struct ReachableCloudlet {
  int cloudlet;
  Tier tier;
};

/// Checks every structural invariant of the hierarchy and returns one message
/// per violation (empty means valid). Violations are data, not failures.
std::vector<std::string> validate(const Topology& topo, const Catalog& catalog);

/// The three cloudlets reachable from an AP, in field/shallow/deep order.
/// Throws std::out_of_range for an unknown AP.
std::vector<ReachableCloudlet> reachable_cloudlets(const Topology& topo, int ap);

/// Link ids traversed by traffic between an AP and a reachable cloudlet:
/// field -> none, shallow -> last mile, deep -> last mile + aggregation + backhaul.
/// Throws std::invalid_argument when the cloudlet is not reachable from the AP.
std::vector<int> links_on_path(const Topology& topo, int ap, int cloudlet);

}  // namespace himec

#endif  // HIMEC_TOPOLOGY_HPP
