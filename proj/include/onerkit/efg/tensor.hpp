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

#include <string>

#include "onerkit/spin/nqi_tensor.hpp"
#include "onerkit/units.hpp"

namespace onerkit::efg {

using spin::Frame;
using spin::NqiTensor;

enum class EfgUnit { AtomicUnits, VoltsPerSquareMeter };

/// Electric field gradient tensor Phi_{mu nu}: symmetric and traceless.
struct EfgTensor {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
  EfgUnit unit = EfgUnit::AtomicUnits;
  Frame frame = Frame::EField;

  EfgTensor() = default;
  EfgTensor(const Eigen::Matrix3d& m, EfgUnit u, Frame f) : matrix(m), unit(u), frame(f) {
    spin::detail::check_symmetric_traceless(matrix, "EFG tensor");
  }

  static EfgTensor axial(double zz, EfgUnit u, Frame f = Frame::Principal) {
    return EfgTensor(Eigen::Vector3d(-0.5 * zz, -0.5 * zz, zz).asDiagonal(), u, f);
  }
};

/// Atomic units -> V/m^2. Already-SI input is returned unchanged.
inline EfgTensor efg_to_si(const EfgTensor& phi) {
  if (phi.unit == EfgUnit::VoltsPerSquareMeter) return phi;
  return EfgTensor(phi.matrix * units::kEfgAuToSi, EfgUnit::VoltsPerSquareMeter, phi.frame);
}

inline EfgTensor efg_to_au(const EfgTensor& phi) {
  if (phi.unit == EfgUnit::AtomicUnits) return phi;
  return EfgTensor(phi.matrix / units::kEfgAuToSi, EfgUnit::AtomicUnits, phi.frame);
}

}  // namespace onerkit::efg
