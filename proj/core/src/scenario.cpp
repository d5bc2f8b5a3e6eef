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

#include "himec/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace himec {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ScenarioError(where + ": " + what);
}

void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(where, "unknown key \"" + it.key() + "\"");
  }
}

const json& req(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

Money money_field(const json& v, const std::string& where) {
  if (v.is_string()) {
    try {
      return money_from_string(v.get<std::string>());
    } catch (const std::exception& e) {
      fail(where, e.what());
    }
  }
  if (v.is_number()) return money_from_double(v.get<double>());
  fail(where, "expected a decimal string or number");
}

std::int64_t int_field(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<std::int64_t>();
}

double num_field(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

std::string str_field(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

ResourceAmount resource_field(const json& v, const std::string& where) {
  return static_cast<ResourceAmount>(
      std::llround(num_field(v, where) * static_cast<double>(kResourceScale)));
}

MicroKw kw_field(const json& v, const std::string& where) {
  return static_cast<MicroKw>(std::llround(num_field(v, where) * 1e6));
}

// Scalar broadcasts over `n` entries; an array must have exactly `n`.
template <typename F>
auto broadcast(const json& v, const std::string& where, std::size_t n, F&& parse)
    -> std::vector<decltype(parse(v, where))> {
  std::vector<decltype(parse(v, where))> out;
  if (v.is_array()) {
    if (v.size() != n)
      fail(where, "expected " + std::to_string(n) + " entries, got " +
                      std::to_string(v.size()));
    for (std::size_t i = 0; i < n; ++i)
      out.push_back(parse(v[i], where + "[" + std::to_string(i) + "]"));
  } else {
    out.assign(n, parse(v, where));
  }
  return out;
}

Catalog parse_catalog(const json& root) {
  Catalog cat;
  const json& res = req(root, "scenario", "resources");
  if (!res.is_array() || res.empty()) fail("resources", "expected a non-empty array");
  for (std::size_t i = 0; i < res.size(); ++i)
    cat.resources.push_back(str_field(res[i], "resources[" + std::to_string(i) + "]"));

  const json& vms = req(root, "scenario", "vm_types");
  if (!vms.is_array() || vms.empty()) fail("vm_types", "expected a non-empty array");
  for (std::size_t i = 0; i < vms.size(); ++i) {
    const std::string where = "vm_types[" + std::to_string(i) + "]";
    const json& o = vms[i];
    if (!o.is_object()) fail(where, "expected an object");
    expect_keys(o, where,
                {"name", "demand", "base_bandwidth_bps", "max_data_bits", "peak_power_kw",
                 "price_cap"});
    VmType t;
    t.name = str_field(req(o, where, "name"), where + ".name");
    const json& dem = req(o, where, "demand");
    if (!dem.is_array() || dem.size() != cat.resources.size())
      fail(where + ".demand", "expected one entry per resource kind");
    for (std::size_t r = 0; r < dem.size(); ++r)
      t.demand.push_back(resource_field(dem[r], where + ".demand"));
    t.base_bandwidth_bps = int_field(req(o, where, "base_bandwidth_bps"), where);
    t.max_data_bits = int_field(req(o, where, "max_data_bits"), where);
    t.peak_power = kw_field(req(o, where, "peak_power_kw"), where);
    t.price_cap = money_field(req(o, where, "price_cap"), where + ".price_cap");
    cat.vm_types.push_back(std::move(t));
  }

  const json& pms = req(root, "scenario", "pm_types");
  if (!pms.is_array() || pms.empty()) fail("pm_types", "expected a non-empty array");
  for (std::size_t i = 0; i < pms.size(); ++i) {
    const std::string where = "pm_types[" + std::to_string(i) + "]";
    const json& o = pms[i];
    if (!o.is_object()) fail(where, "expected an object");
    expect_keys(o, where, {"name", "supply", "idle_power_kw"});
    PmType t;
    t.name = str_field(req(o, where, "name"), where + ".name");
    const json& sup = req(o, where, "supply");
    if (!sup.is_array() || sup.size() != cat.resources.size())
      fail(where + ".supply", "expected one entry per resource kind");
    for (std::size_t r = 0; r < sup.size(); ++r)
      t.supply.push_back(resource_field(sup[r], where + ".supply"));
    t.idle_power = kw_field(req(o, where, "idle_power_kw"), where);
    cat.pm_types.push_back(std::move(t));
  }
  return cat;
}

// {"pm name": count, ...} resolved against the catalog, in catalog order.
void parse_inventory(const json& o, const std::string& where, const Catalog& cat,
                     std::vector<int>& type_ids, std::vector<int>& counts) {
  if (!o.is_object()) fail(where, "expected an object of pm name -> count");
  for (int p = 0; p < static_cast<int>(cat.pm_types.size()); ++p) {
    auto it = o.find(cat.pm_types[p].name);
    if (it == o.end()) continue;
    type_ids.push_back(p);
    counts.push_back(static_cast<int>(int_field(*it, where)));
  }
  if (static_cast<std::size_t>(o.size()) != type_ids.size())
    fail(where, "references a pm type not in pm_types");
}

Topology parse_topology(const json& root, const Catalog& cat) {
  const json& t = req(root, "scenario", "topology");
  if (!t.is_object()) fail("topology", "expected an object");
  expect_keys(t, "topology",
              {"aps", "shallow", "field_pms", "shallow_pms", "deep_pms",
               "electricity_per_kwh", "last_mile_bps", "aggregation_bps", "backhaul_bps",
               "xi_shallow", "xi_deep", "pue", "frame_ms", "slot_ms"});
  Topology topo;

  const json& aps = req(t, "topology", "aps");
  if (!aps.is_array() || aps.empty()) fail("topology.aps", "expected a non-empty array");
  for (std::size_t i = 0; i < aps.size(); ++i)
    topo.ap_names.push_back(str_field(aps[i], "topology.aps"));

  const json& elec = req(t, "topology", "electricity_per_kwh");
  if (!elec.is_object()) fail("topology.electricity_per_kwh", "expected an object");
  expect_keys(elec, "topology.electricity_per_kwh", {"field", "shallow", "deep"});
  Money q_field = money_field(req(elec, "electricity_per_kwh", "field"),
                              "electricity_per_kwh.field");
  Money q_shallow = money_field(req(elec, "electricity_per_kwh", "shallow"),
                                "electricity_per_kwh.shallow");
  Money q_deep = money_field(req(elec, "electricity_per_kwh", "deep"),
                             "electricity_per_kwh.deep");

  std::vector<int> field_ids, field_counts, shallow_ids, shallow_counts, deep_ids,
      deep_counts;
  parse_inventory(req(t, "topology", "field_pms"), "topology.field_pms", cat, field_ids,
                  field_counts);
  parse_inventory(req(t, "topology", "shallow_pms"), "topology.shallow_pms", cat,
                  shallow_ids, shallow_counts);
  parse_inventory(req(t, "topology", "deep_pms"), "topology.deep_pms", cat, deep_ids,
                  deep_counts);

  for (const std::string& ap : topo.ap_names) {
    Cloudlet c;
    c.name = "field@" + ap;
    c.tier = Tier::field;
    c.pm_type_ids = field_ids;
    c.pm_counts = field_counts;
    c.electricity_per_kwh = q_field;
    topo.cloudlets.push_back(std::move(c));
  }

  const json& shallow = req(t, "topology", "shallow");
  if (!shallow.is_array() || shallow.empty())
    fail("topology.shallow", "expected a non-empty array");
  for (std::size_t s = 0; s < shallow.size(); ++s) {
    const std::string where = "topology.shallow[" + std::to_string(s) + "]";
    const json& o = shallow[s];
    if (!o.is_object()) fail(where, "expected an object");
    expect_keys(o, where, {"name", "aps"});
    Cloudlet c;
    c.name = str_field(req(o, where, "name"), where + ".name");
    c.tier = Tier::shallow;
    c.pm_type_ids = shallow_ids;
    c.pm_counts = shallow_counts;
    c.electricity_per_kwh = q_shallow;
    topo.cloudlets.push_back(std::move(c));

    const json& members = req(o, where, "aps");
    if (!members.is_array()) fail(where + ".aps", "expected an array");
    std::vector<int> ids;
    for (const json& m : members) {
      std::string name = str_field(m, where + ".aps");
      auto it = std::find(topo.ap_names.begin(), topo.ap_names.end(), name);
      if (it == topo.ap_names.end()) fail(where + ".aps", "unknown AP \"" + name + "\"");
      ids.push_back(static_cast<int>(it - topo.ap_names.begin()));
    }
    topo.shallow_aps.push_back(std::move(ids));
  }

  Cloudlet deep;
  deep.name = "deep";
  deep.tier = Tier::deep;
  deep.pm_type_ids = deep_ids;
  deep.pm_counts = deep_counts;
  deep.electricity_per_kwh = q_deep;
  topo.cloudlets.push_back(std::move(deep));

  const std::size_t n_ap = topo.ap_names.size();
  const std::size_t n_sh = topo.shallow_aps.size();
  topo.last_mile_bps = broadcast(req(t, "topology", "last_mile_bps"),
                                 "topology.last_mile_bps", n_ap, int_field);
  topo.aggregation_bps = broadcast(req(t, "topology", "aggregation_bps"),
                                   "topology.aggregation_bps", n_sh, int_field);
  topo.backhaul_bps = int_field(req(t, "topology", "backhaul_bps"), "topology.backhaul_bps");
  topo.xi_shallow =
      broadcast(req(t, "topology", "xi_shallow"), "topology.xi_shallow", n_ap, money_field);
  topo.xi_deep =
      broadcast(req(t, "topology", "xi_deep"), "topology.xi_deep", n_ap, money_field);

  topo.pue_ppm = static_cast<std::int64_t>(
      std::llround(num_field(req(t, "topology", "pue"), "topology.pue") * 1e6));
  topo.frame_ms = int_field(req(t, "topology", "frame_ms"), "topology.frame_ms");
  topo.slot_ms = int_field(req(t, "topology", "slot_ms"), "topology.slot_ms");
  return topo;
}

GeneratorConfig parse_generator(const json& root, const Catalog& cat) {
  GeneratorConfig g;
  auto it = root.find("generator");
  const std::size_t n_vm = cat.vm_types.size();
  g.mix.assign(n_vm, 1.0);
  g.price_min.assign(n_vm, 0);
  g.price_mode.clear();
  g.price_max.clear();
  for (const VmType& v : cat.vm_types) {
    g.price_mode.push_back(v.price_cap / 2);
    g.price_max.push_back(v.price_cap);
  }
  if (it == root.end()) return g;

  const json& o = *it;
  if (!o.is_object()) fail("generator", "expected an object");
  expect_keys(o, "generator",
              {"seed", "frames", "bids", "mix", "price_min", "price_mode", "price_max",
               "mobility", "load_fraction", "persistent_bids"});
  if (auto f = o.find("seed"); f != o.end())
    g.seed = static_cast<std::uint64_t>(int_field(*f, "generator.seed"));
  if (auto f = o.find("frames"); f != o.end()) {
    g.frames = static_cast<int>(int_field(*f, "generator.frames"));
    if (g.frames < 1) fail("generator.frames", "must be at least 1");
  }
  if (auto f = o.find("bids"); f != o.end()) {
    g.bid_schedule.clear();
    if (f->is_array()) {
      for (const json& v : *f)
        g.bid_schedule.push_back(static_cast<int>(int_field(v, "generator.bids")));
      if (g.bid_schedule.empty()) fail("generator.bids", "schedule must not be empty");
    } else {
      g.bid_schedule.push_back(static_cast<int>(int_field(*f, "generator.bids")));
    }
    for (int n : g.bid_schedule)
      if (n < 0) fail("generator.bids", "bid counts must be nonnegative");
  }
  if (auto f = o.find("mix"); f != o.end()) {
    g.mix = broadcast(*f, "generator.mix", n_vm, num_field);
    for (double m : g.mix)
      if (!(m > 0)) fail("generator.mix", "ratios must be positive");
  }
  if (auto f = o.find("price_min"); f != o.end())
    g.price_min = broadcast(*f, "generator.price_min", n_vm, money_field);
  if (auto f = o.find("price_mode"); f != o.end())
    g.price_mode = broadcast(*f, "generator.price_mode", n_vm, money_field);
  if (auto f = o.find("price_max"); f != o.end())
    g.price_max = broadcast(*f, "generator.price_max", n_vm, money_field);
  for (std::size_t v = 0; v < n_vm; ++v)
    if (g.price_min[v] < 0 || g.price_mode[v] < g.price_min[v] ||
        g.price_max[v] < g.price_mode[v])
      fail("generator", "price law of \"" + cat.vm_types[v].name +
                            "\" needs 0 <= min <= mode <= max");
  if (auto f = o.find("mobility"); f != o.end()) {
    g.mobility = num_field(*f, "generator.mobility");
    if (g.mobility < 0 || g.mobility > 1) fail("generator.mobility", "must be in [0,1]");
  }
  if (auto f = o.find("load_fraction"); f != o.end()) {
    g.load_fraction = num_field(*f, "generator.load_fraction");
    if (g.load_fraction < 0 || g.load_fraction > 1)
      fail("generator.load_fraction", "must be in [0,1]");
  }
  if (auto f = o.find("persistent_bids"); f != o.end()) {
    if (!f->is_boolean()) fail("generator.persistent_bids", "expected a boolean");
    g.persistent_bids = f->get<bool>();
  }
  return g;
}

BandwidthConfig parse_bandwidth(const json& root) {
  BandwidthConfig b;
  auto it = root.find("bandwidth");
  if (it == root.end()) return b;
  const json& o = *it;
  if (!o.is_object()) fail("bandwidth", "expected an object");
  expect_keys(o, "bandwidth",
              {"rate_floor_fraction", "feasibility_tol", "stationarity_tol",
               "comp_slack_tol", "max_iterations"});
  if (auto f = o.find("rate_floor_fraction"); f != o.end()) {
    b.rate_floor_fraction = num_field(*f, "bandwidth.rate_floor_fraction");
    if (!(b.rate_floor_fraction > 0) || b.rate_floor_fraction > 1)
      fail("bandwidth.rate_floor_fraction", "must be in (0,1]");
  }
  if (auto f = o.find("feasibility_tol"); f != o.end())
    b.tolerances.feasibility = num_field(*f, "bandwidth.feasibility_tol");
  if (auto f = o.find("stationarity_tol"); f != o.end())
    b.tolerances.stationarity = num_field(*f, "bandwidth.stationarity_tol");
  if (auto f = o.find("comp_slack_tol"); f != o.end())
    b.tolerances.comp_slack = num_field(*f, "bandwidth.comp_slack_tol");
  if (auto f = o.find("max_iterations"); f != o.end())
    b.tolerances.max_iterations = int_field(*f, "bandwidth.max_iterations");
  return b;
}

SolveLimits parse_limits(const json& root) {
  SolveLimits lim;
  auto it = root.find("solver");
  if (it == root.end()) return lim;
  const json& o = *it;
  if (!o.is_object()) fail("solver", "expected an object");
  expect_keys(o, "solver", {"node_budget", "time_budget_ms"});
  if (auto f = o.find("node_budget"); f != o.end())
    lim.node_budget = int_field(*f, "solver.node_budget");
  if (auto f = o.find("time_budget_ms"); f != o.end())
    lim.time_budget_ms = int_field(*f, "solver.time_budget_ms");
  if (lim.node_budget <= 0 || lim.time_budget_ms <= 0)
    fail("solver", "budgets must be positive");
  return lim;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("not valid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("scenario", "top level must be an object");
  expect_keys(root, "scenario",
              {"schema", "name", "resources", "vm_types", "pm_types", "topology",
               "generator", "bandwidth", "solver"});
  const std::string schema = str_field(req(root, "scenario", "schema"), "schema");
  if (schema != "himec-scenario/1")
    fail("schema", "unsupported schema \"" + schema + "\" (expected himec-scenario/1)");

  Scenario sc;
  sc.name = str_field(req(root, "scenario", "name"), "name");
  sc.catalog = parse_catalog(root);
  sc.topology = parse_topology(root, sc.catalog);
  sc.generator = parse_generator(root, sc.catalog);
  sc.bandwidth = parse_bandwidth(root);
  sc.limits = parse_limits(root);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw ScenarioError("cannot read scenario file: " + path);
  return parse_scenario(buf.str());
}

}  // namespace himec
