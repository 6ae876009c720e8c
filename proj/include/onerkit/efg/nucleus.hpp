// Copyright 2026 The onerkit Authors
//
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

#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "onerkit/efg/tensor.hpp"

namespace onerkit::efg {

struct NucleusRecord {
  std::string name;
  int two_i = 0;
  double q_barn = 0.0;           // scalar quadrupole moment
  double gamma_mhz_per_t = 0.0;  // ordinary frequency per tesla

  double gamma_hz_per_t() const { return gamma_mhz_per_t * 1e6; }

  friend bool operator==(const NucleusRecord&, const NucleusRecord&) = default;
};

// gamma_n of 9Be is -1.17749 mu_N; the table carries its magnitude as a
// frequency per tesla. Spin-1/2 entries have no quadrupole moment.
inline const std::array<NucleusRecord, 5>& nucleus_table() {
  static const std::array<NucleusRecord, 5> table{{
      {"Be9", 3, 0.0529, 8.9755},
      {"H1", 1, 0.0, 42.577478},
      {"H2", 2, 0.00286, 6.5359},
      {"Li7", 3, -0.0400, 16.5471},
      {"N14", 2, 0.02044, 3.0777},
  }};
  return table;
}

inline std::optional<NucleusRecord> find_nucleus(std::string_view name) {
  const auto& table = nucleus_table();
  auto it = std::find_if(table.begin(), table.end(),
                         [&](const NucleusRecord& r) { return r.name == name; });
  if (it == table.end()) return std::nullopt;
  return *it;
}

/// Q_{mu nu} = e q Phi_{mu nu} / (2I(2I-1) h), returned in rad/s.
inline NqiTensor nqi_from_efg(const EfgTensor& phi, const NucleusRecord& nucleus) {
  if (nucleus.two_i < 2) {
    throw Error(ErrorKind::NoQuadrupole,
                nucleus.name + " has I = 1/2; only nuclei with I > 1/2 have a quadrupole tensor");
  }
  const EfgTensor si = efg_to_si(phi);
  const double factor = units::kElementaryCharge * nucleus.q_barn * units::kBarn /
                        (nucleus.two_i * (nucleus.two_i - 1) * units::kPlanck);
  return NqiTensor(units::kTwoPi * factor * si.matrix, phi.frame);
}

}  // namespace onerkit::efg
