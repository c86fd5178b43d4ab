// Copyright 2026 The sqm-variational Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "sqm/hamiltonian.hpp"

#include <algorithm>
#include <cctype>

namespace sqm {

SuperpotentialKind parse_superpotential_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "ho") return SuperpotentialKind::HO;
  if (lower == "aho") return SuperpotentialKind::AHO;
  if (lower == "dw") return SuperpotentialKind::DW;
  throw std::invalid_argument("unknown superpotential '" + std::string(name) + "' (expected ho, aho or dw)");
}

}  // namespace sqm
