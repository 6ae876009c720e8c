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

#include <numbers>

// Physical constants and unit conversions. This is the only place numeric
// conversion factors live.
namespace onerkit::units {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Electric field gradient: 1 a.u. = E_h / (e a0^3).
inline constexpr double kEfgAuToSi = 9.717e21;  // V/m^2

inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kBarn = 1e-28;                        // m^2

// Nuclear magneton expressed as a frequency per tesla.
inline constexpr double kNuclearMagnetonMHzPerT = 7.622593285;

inline constexpr double hz_to_rad(double hz) { return kTwoPi * hz; }
inline constexpr double rad_to_hz(double rad_s) { return rad_s / kTwoPi; }

}  // namespace onerkit::units
