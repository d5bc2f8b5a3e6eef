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

#include "himec/catalog.hpp"

namespace himec {

int Catalog::vm_index(const std::string& name) const {
  for (std::size_t i = 0; i < vm_types.size(); ++i)
    if (vm_types[i].name == name) return static_cast<int>(i);
  return -1;
}

int Catalog::pm_index(const std::string& name) const {
  for (std::size_t i = 0; i < pm_types.size(); ++i)
    if (pm_types[i].name == name) return static_cast<int>(i);
  return -1;
}

bool Catalog::pm_can_host(int pm, int vm) const {
  const auto& d = vm_types[vm].demand;
  const auto& s = pm_types[pm].supply;
  for (std::size_t r = 0; r < resources.size(); ++r)
    if (d[r] > s[r]) return false;
  return true;
}

}  // namespace himec
