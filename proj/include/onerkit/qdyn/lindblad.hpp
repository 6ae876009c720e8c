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

#include <span>
#include <string>

#include "onerkit/qdyn/density.hpp"

namespace onerkit::qdyn {

namespace detail {

inline void require_dim(Index expected, Index actual, const std::string& what) {
  if (actual != expected) {
    throw Error(ErrorKind::DimensionMismatch,
                what + " has dimension " + std::to_string(actual) + ", expected " +
                    std::to_string(expected));
  }
}

}  // namespace detail

/// Right-hand side of the Lindblad master equation (hbar = 1):
///   -i[H, rho] + sum_a k_a (c rho c^+ - 1/2 {c^+ c, rho}).
inline CMatrix lindblad_rhs(const CMatrix& hamiltonian,
                            std::span<const CollapseChannel> channels,
                            const CMatrix& rho) {
  const Index dim = rho.rows();
  detail::require_dim(dim, rho.cols(), "rho (columns)");
  detail::require_dim(dim, hamiltonian.rows(), "hamiltonian");
  detail::require_dim(dim, hamiltonian.cols(), "hamiltonian (columns)");
  CMatrix out = -kI * (hamiltonian * rho - rho * hamiltonian);
  for (std::size_t a = 0; a < channels.size(); ++a) {
    const auto& ch = channels[a];
    detail::require_dim(dim, ch.op.rows(), "collapse operator " + std::to_string(a));
    if (ch.rate == 0.0) continue;
    const CMatrix cdc = ch.op.adjoint() * ch.op;
    out += ch.rate * (ch.op * rho * ch.op.adjoint() - 0.5 * (cdc * rho + rho * cdc));
  }
  return out;
}

inline CMatrix lindblad_rhs(const CMatrix& hamiltonian,
                            std::span<const CollapseChannel> channels,
                            const DensityOperator& rho) {
  return lindblad_rhs(hamiltonian, channels, rho.matrix());
}

}  // namespace onerkit::qdyn
