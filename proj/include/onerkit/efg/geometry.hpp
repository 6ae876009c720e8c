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
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "onerkit/efg/tensor.hpp"

namespace onerkit::efg {

/// Rotation by theta about the shared x axis.
inline Eigen::Matrix3d rotation_about_x(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix3d r;
  r << 1.0, 0.0, 0.0,
       0.0, c, -s,
       0.0, s, c;
  return r;
}

/// R(theta) T R(theta)^T, relabelled from the E-frame into the B-frame.
template <class Tensor>
Tensor rotate_about_x(const Tensor& t, double theta) {
  const Eigen::Matrix3d r = rotation_about_x(theta);
  Tensor out = t;
  out.matrix = r * t.matrix * r.transpose();
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();
  if (out.frame == Frame::EField) out.frame = Frame::BField;
  return out;
}

struct PrincipalAxes {
  // Eigenvalues ordered x', y', z' with |x'| <= |y'| <= |z'|.
  Eigen::Vector3d values;
  // Column k is the eigenvector of values(k).
  Eigen::Matrix3d vectors;
};

/// Principal axis system. Ties in |eigenvalue| are ordered by ascending
/// eigenvalue (so the larger eigenvalue becomes z'); eigenvectors are signed
/// so their first nonzero component is positive.
inline PrincipalAxes principal_axes(const Eigen::Matrix3d& phi) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(phi);
  const Eigen::Vector3d w = solver.eigenvalues();
  const Eigen::Matrix3d v = solver.eigenvectors();
  const double tie = 1e-12 * std::max(max_abs(phi), 1e-300);
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double da = std::abs(w(a)), db = std::abs(w(b));
    if (std::abs(da - db) > tie) return da < db;
    return w(a) < w(b);
  });
  PrincipalAxes axes;
  for (int k = 0; k < 3; ++k) {
    axes.values(k) = w(order[k]);
    Eigen::Vector3d col = v.col(order[k]);
    for (int c = 0; c < 3; ++c) {
      if (std::abs(col(c)) > 1e-12) {
        if (col(c) < 0.0) col = -col;
        break;
      }
    }
    axes.vectors.col(k) = col;
  }
  return axes;
}

/// eta = |Phi_y'y' - Phi_x'x'| / |Phi_z'z'|, z' carrying the largest |eigenvalue|.
inline double asymmetry(const Eigen::Matrix3d& phi) {
  const PrincipalAxes axes = principal_axes(phi);
  if (std::abs(axes.values(2)) == 0.0 || max_abs(phi) == 0.0) {
    throw Error(ErrorKind::UndefinedAsymmetry, "asymmetry of a zero tensor is undefined");
  }
  return std::abs(axes.values(1) - axes.values(0)) / std::abs(axes.values(2));
}

inline double asymmetry(const EfgTensor& phi) { return asymmetry(phi.matrix); }

struct MeshNode {
  double theta;
  double phi;
  double radius;  // s |g|
  int sign;       // sign of g; 0 on nodal lines
};

/// Surface r = s |g(theta, phi)| with g = rhat . Phi . rhat on a grid with
/// theta_i = pi i / (n_theta - 1) and phi_j = 2 pi j / n_phi. Rows run over phi
/// fastest.
inline std::vector<MeshNode> surface_mesh(const Eigen::Matrix3d& tensor, double scale, int n_theta,
                                          int n_phi) {
  if (n_theta < 8 || n_phi < 8) {
    throw Error(ErrorKind::InvalidArgument, "surface mesh needs n_theta, n_phi >= 8");
  }
  std::vector<MeshNode> mesh;
  mesh.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  const double zero = 1e-14 * std::max(max_abs(tensor), 1e-300);
  for (int i = 0; i < n_theta; ++i) {
    const double theta = std::numbers::pi * i / (n_theta - 1);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n_phi;
      const Eigen::Vector3d r(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                              std::cos(theta));
      const double g = r.dot(tensor * r);
      const int sign = std::abs(g) <= zero ? 0 : (g > 0.0 ? 1 : -1);
      mesh.push_back({theta, phi, scale * std::abs(g), sign});
    }
  }
  return mesh;
}

inline std::vector<MeshNode> surface_mesh(const EfgTensor& tensor, double scale, int n_theta,
                                          int n_phi) {
  return surface_mesh(tensor.matrix, scale, n_theta, n_phi);
}

}  // namespace onerkit::efg
