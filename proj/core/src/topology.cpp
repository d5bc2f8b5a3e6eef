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

#include "himec/topology.hpp"

#include <stdexcept>

namespace himec {

const char* tier_name(Tier t) {
  switch (t) {
    case Tier::field: return "field";
    case Tier::shallow: return "shallow";
    case Tier::deep: return "deep";
  }
  return "?";
}

int Topology::shallow_cloudlet(int ap) const {
  int found = -1;
  for (int s = 0; s < num_shallow(); ++s) {
    for (int a : shallow_aps[s]) {
      if (a == ap) {
        if (found >= 0) return -1;  // multiply attached
        found = num_aps() + s;
      }
    }
  }
  return found;
}

std::int64_t Topology::link_capacity_bps(int link) const {
  if (link < num_aps()) return last_mile_bps[link];
  if (link < num_aps() + num_shallow()) return aggregation_bps[link - num_aps()];
  return backhaul_bps;
}

std::string Topology::link_name(int link) const {
  if (link < num_aps()) return "last_mile:" + ap_names[link];
  if (link < num_aps() + num_shallow())
    return "aggregation:" + cloudlets[link].name;  // cloudlet index == link index here
  return "backhaul";
}

bool Topology::reaches(int ap, int cloudlet) const {
  return cloudlet == field_cloudlet(ap) || cloudlet == shallow_cloudlet(ap) ||
         cloudlet == deep_cloudlet();
}

int Topology::pm_slot(int cloudlet, int pm_type) const {
  const auto& ids = cloudlets[cloudlet].pm_type_ids;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == pm_type) return static_cast<int>(i);
  return -1;
}

Money Topology::xi(int ap, int cloudlet) const {
  if (cloudlet == field_cloudlet(ap)) return 0;
  if (cloudlet == shallow_cloudlet(ap)) return xi_shallow[ap];
  if (cloudlet == deep_cloudlet()) return xi_deep[ap];
  throw std::invalid_argument("xi: cloudlet not reachable from AP");
}

std::vector<std::string> validate(const Topology& topo, const Catalog& catalog) {
  std::vector<std::string> out;
  const int a_count = topo.num_aps();
  const int s_count = topo.num_shallow();

  if (topo.num_cloudlets() != a_count + s_count + 1) {
    out.push_back("cloudlet list must hold one field cloudlet per AP, the shallow cloudlets and one deep cloudlet");
    return out;  // canonical layout broken, further indexing is meaningless
  }
  for (int c = 0; c < topo.num_cloudlets(); ++c) {
    Tier want = c < a_count ? Tier::field : (c < a_count + s_count ? Tier::shallow : Tier::deep);
    if (topo.cloudlets[c].tier != want)
      out.push_back("cloudlet '" + topo.cloudlets[c].name + "' is out of canonical tier order");
  }

  // A_{c_s} sets must partition the AP set.
  std::vector<int> attach_count(a_count, 0);
  for (int s = 0; s < s_count; ++s) {
    for (int a : topo.shallow_aps[s]) {
      if (a < 0 || a >= a_count) {
        out.push_back("shallow cloudlet '" + topo.cloudlets[a_count + s].name + "' lists an unknown AP");
        continue;
      }
      ++attach_count[a];
    }
  }
  for (int a = 0; a < a_count; ++a) {
    if (attach_count[a] == 0)
      out.push_back("AP '" + topo.ap_names[a] + "' is not attached to any shallow cloudlet");
    else if (attach_count[a] > 1)
      out.push_back("AP '" + topo.ap_names[a] + "' is attached to more than one shallow cloudlet");
  }

  if (static_cast<int>(topo.last_mile_bps.size()) != a_count)
    out.push_back("expected one last-mile capacity per AP");
  else
    for (int a = 0; a < a_count; ++a)
      if (topo.last_mile_bps[a] <= 0)
        out.push_back("last-mile link of AP '" + topo.ap_names[a] + "' has non-positive capacity");
  if (static_cast<int>(topo.aggregation_bps.size()) != s_count)
    out.push_back("expected one aggregation capacity per shallow cloudlet");
  else
    for (int s = 0; s < s_count; ++s)
      if (topo.aggregation_bps[s] <= 0)
        out.push_back("aggregation link of '" + topo.cloudlets[a_count + s].name + "' has non-positive capacity");
  if (topo.backhaul_bps <= 0) out.push_back("backhaul link has non-positive capacity");

  if (static_cast<int>(topo.xi_shallow.size()) != a_count ||
      static_cast<int>(topo.xi_deep.size()) != a_count)
    out.push_back("expected one shallow and one deep QoS weight per AP");
  else
    for (int a = 0; a < a_count; ++a)
      if (topo.xi_shallow[a] < 0 || topo.xi_deep[a] < 0)
        out.push_back("QoS weight of AP '" + topo.ap_names[a] + "' is negative");

  for (const Cloudlet& c : topo.cloudlets) {
    if (c.electricity_per_kwh < 0)
      out.push_back("cloudlet '" + c.name + "' has negative electricity price");
    if (c.pm_type_ids.size() != c.pm_counts.size()) {
      out.push_back("cloudlet '" + c.name + "' has mismatched PM inventory lists");
      continue;
    }
    for (std::size_t i = 0; i < c.pm_type_ids.size(); ++i) {
      if (c.pm_type_ids[i] < 0 || c.pm_type_ids[i] >= static_cast<int>(catalog.pm_types.size()))
        out.push_back("cloudlet '" + c.name + "' references an unknown PM type");
      if (c.pm_counts[i] < 0)
        out.push_back("cloudlet '" + c.name + "' has a negative PM count");
    }
  }

  if (topo.pue_ppm < 1'000'000) out.push_back("PUE must be at least 1");
  if (topo.frame_ms <= 0 || topo.slot_ms <= 0)
    out.push_back("frame and slot lengths must be positive");
  else if (topo.frame_ms % topo.slot_ms != 0)
    out.push_back("frame length must be an integer multiple of the slot length");

  for (const VmType& v : catalog.vm_types) {
    if (v.base_bandwidth_bps <= 0)
      out.push_back("VM type '" + v.name + "' has non-positive base bandwidth");
    if (v.max_data_bits < 0)
      out.push_back("VM type '" + v.name + "' has negative per-frame data cap");
    if (v.peak_power < 0) out.push_back("VM type '" + v.name + "' has negative peak power");
    if (v.demand.size() != catalog.resources.size())
      out.push_back("VM type '" + v.name + "' does not declare every resource kind");
  }
  for (const PmType& p : catalog.pm_types) {
    if (p.idle_power < 0) out.push_back("PM type '" + p.name + "' has negative idle power");
    if (p.supply.size() != catalog.resources.size())
      out.push_back("PM type '" + p.name + "' does not declare every resource kind");
    else
      for (std::size_t r = 0; r < p.supply.size(); ++r)
        if (p.supply[r] <= 0)
          out.push_back("PM type '" + p.name + "' has non-positive supply of " + catalog.resources[r]);
  }
  return out;
}

std::vector<ReachableCloudlet> reachable_cloudlets(const Topology& topo, int ap) {
  if (ap < 0 || ap >= topo.num_aps())
    throw std::out_of_range("reachable_cloudlets: unknown AP id");
  return {{topo.field_cloudlet(ap), Tier::field},
          {topo.shallow_cloudlet(ap), Tier::shallow},
          {topo.deep_cloudlet(), Tier::deep}};
}

std::vector<int> links_on_path(const Topology& topo, int ap, int cloudlet) {
  if (ap < 0 || ap >= topo.num_aps())
    throw std::out_of_range("links_on_path: unknown AP id");
  if (cloudlet == topo.field_cloudlet(ap)) return {};
  if (cloudlet == topo.shallow_cloudlet(ap)) return {topo.last_mile_link(ap)};
  if (cloudlet == topo.deep_cloudlet()) {
    int shallow = topo.shallow_cloudlet(ap);
    if (shallow < 0) throw std::invalid_argument("links_on_path: AP has no shallow attachment");
    return {topo.last_mile_link(ap), topo.aggregation_link(shallow - topo.num_aps()),
            topo.backhaul_link()};
  }
  throw std::invalid_argument("links_on_path: cloudlet not reachable from AP");
}

}  // namespace himec
