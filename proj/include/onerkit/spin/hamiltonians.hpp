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

#include "onerkit/spin/nqi_tensor.hpp"
#include "onerkit/spin/spin_system.hpp"
#include "onerkit/units.hpp"

namespace onerkit::spin {

/// -gamma_n B0 I_z in rad/s; gamma_n given as ordinary frequency per tesla.
inline CMatrix zeeman_hamiltonian(double gamma_hz_per_t, double b0_tesla, const SpinSystem& s) {
  return -units::hz_to_rad(gamma_hz_per_t * b0_tesla) * s.iz();
}

/// sum_{mu nu} Q_{mu nu} I_mu I_nu.
inline CMatrix quadrupole_hamiltonian(const Eigen::Matrix3d& q, const SpinSystem& s) {
  if (max_abs(q - q.transpose()) > 1e-12 * std::max(max_abs(q), 1e-300)) {
    throw Error(ErrorKind::InvalidArgument, "quadrupole tensor is not symmetric");
  }
  CMatrix h = CMatrix::Zero(s.dim(), s.dim());
  for (int mu = 0; mu < 3; ++mu) {
    for (int nu = 0; nu < 3; ++nu) {
      if (q(mu, nu) != 0.0) h += q(mu, nu) * (s.op(mu) * s.op(nu));
    }
  }
  // Q symmetric makes h hermitian; drop the roundoff.
  return 0.5 * (h + h.adjoint());
}

inline CMatrix quadrupole_hamiltonian(const NqiTensor& q, const SpinSystem& s) {
  return quadrupole_hamiltonian(q.matrix, s);
}

}  // namespace onerkit::spin
