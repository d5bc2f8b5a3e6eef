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

#ifndef HIMEC_CATALOG_HPP
#define HIMEC_CATALOG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "himec/money.hpp"

namespace himec {

/// Resource quantities (CPU cores, GiB of memory, ...) are stored in integer
/// milli-units of whatever unit the scenario declares, so fractional demands
/// like 7.5 GiB stay exact and capacity checks are integer comparisons.
using ResourceAmount = std::int64_t;
inline constexpr ResourceAmount kResourceScale = 1000;

/// Power figures are stored in micro-kW (0.7 kW == 700000).
using MicroKw = std::int64_t;
inline constexpr std::int64_t kPowerScale = 1'000'000;

struct VmType {
  std::string name;
  std::vector<ResourceAmount> demand;  // per resource kind, milli-units
  std::int64_t base_bandwidth_bps = 0;
  std::int64_t max_data_bits = 0;  // cap on data transferred in one frame
  MicroKw peak_power = 0;
  Money price_cap = 0;  // ceiling used by the bid generator
};

struct PmType {
  std::string name;
  std::vector<ResourceAmount> supply;  // per resource kind, milli-units
  MicroKw idle_power = 0;
};

struct Catalog {
  std::vector<std::string> resources;
  std::vector<VmType> vm_types;
  std::vector<PmType> pm_types;

  int vm_index(const std::string& name) const;  // -1 if unknown
  int pm_index(const std::string& name) const;

  /// Componentwise demand <= supply.
  bool pm_can_host(int pm, int vm) const;
};

}  // namespace himec

#endif  // HIMEC_CATALOG_HPP
