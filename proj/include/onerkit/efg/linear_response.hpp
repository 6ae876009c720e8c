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

#include <array>

#include "onerkit/efg/tensor.hpp"

namespace onerkit::efg {

/// Linearized EFG response Phi = Phi0 + S : strain + R . E with a rank-4
/// strain coupling and a rank-3 field coupling, both supplied by the user.
class LinearResponseModel {
 public:
  using StrainCoupling = std::array<double, 81>;  // S[mu][nu][alpha][beta], row-major
  using FieldCoupling = std::array<double, 27>;   // R[mu][nu][gamma], row-major

  LinearResponseModel(EfgTensor phi0, const StrainCoupling& s, const FieldCoupling& r)
      : phi0_(std::move(phi0)), s_(s), r_(r) {
    // Every (alpha, beta) and gamma slice must itself be a valid EFG shape,
    // which makes each evaluation symmetric and traceless.
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) spin::detail::check_symmetric_traceless(strain_slice(a, b), "strain coupling slice");
    for (int c = 0; c < 3; ++c) spin::detail::check_symmetric_traceless(field_slice(c), "field coupling slice");
  }

  static LinearResponseModel field_only(EfgTensor phi0, const FieldCoupling& r) {
    return LinearResponseModel(std::move(phi0), StrainCoupling{}, r);
  }

  const EfgTensor& phi0() const { return phi0_; }

  double s(int mu, int nu, int alpha, int beta) const {
    return s_[((mu * 3 + nu) * 3 + alpha) * 3 + beta];
  }
  double r(int mu, int nu, int gamma) const { return r_[(mu * 3 + nu) * 3 + gamma]; }

  Eigen::Matrix3d strain_slice(int alpha, int beta) const {
    Eigen::Matrix3d m;
    for (int mu = 0; mu < 3; ++mu)
      for (int nu = 0; nu < 3; ++nu) m(mu, nu) = s(mu, nu, alpha, beta);
    return m;
  }

  Eigen::Matrix3d field_slice(int gamma) const {
    Eigen::Matrix3d m;
    for (int mu = 0; mu < 3; ++mu)
      for (int nu = 0; nu < 3; ++nu) m(mu, nu) = r(mu, nu, gamma);
    return m;
  }

  /// strain: symmetric 3x3; field: 3-vector. Units follow phi0.
  EfgTensor evaluate(const Eigen::Matrix3d& strain, const Eigen::Vector3d& field) const {
    if (max_abs(strain - strain.transpose()) > 1e-12 * std::max(max_abs(strain), 1e-300)) {
      throw Error(ErrorKind::InvalidArgument, "strain tensor must be symmetric");
    }
    Eigen::Matrix3d phi = phi0_.matrix;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (strain(a, b) != 0.0) phi += strain(a, b) * strain_slice(a, b);
    for (int c = 0; c < 3; ++c)
      if (field(c) != 0.0) phi += field(c) * field_slice(c);
    return EfgTensor(phi, phi0_.unit, phi0_.frame);
  }

 private:
  EfgTensor phi0_;
  StrainCoupling s_;
  FieldCoupling r_;
};

}  // namespace onerkit::efg
