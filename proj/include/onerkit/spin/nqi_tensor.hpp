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

#include <cmath>
#include <sstream>
#include <string>

#include "onerkit/common.hpp"
#include "onerkit/units.hpp"

namespace onerkit::spin {

enum class Frame { EField, BField, Principal };

inline const char* to_string(Frame f) {
  switch (f) {
    case Frame::EField: return "E-frame";
    case Frame::BField: return "B-frame";
    case Frame::Principal: return "principal";
  }
  return "?";
}

namespace detail {

inline void check_symmetric_traceless(const Eigen::Matrix3d& m, const char* what) {
  const double scale = max_abs(m);
  if (!m.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " has non-finite entries");
  }
  if (max_abs(m - m.transpose()) > 1e-12 * std::max(scale, 1e-300)) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " is not symmetric");
  }
  if (std::abs(m.trace()) > 1e-10 * scale) {
    std::ostringstream os;
    os << what << " is not traceless (trace " << m.trace() << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

}  // namespace detail

/// Nuclear quadrupole interaction tensor Q_{mu nu}, symmetric and traceless,
/// in angular-frequency units (rad/s).
struct NqiTensor {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
  Frame frame = Frame::EField;

  NqiTensor() = default;
  NqiTensor(const Eigen::Matrix3d& m, Frame f) : matrix(m), frame(f) {
    detail::check_symmetric_traceless(matrix, "NQI tensor");
  }

  static NqiTensor from_hz(const Eigen::Matrix3d& m_hz, Frame f) {
    return NqiTensor(m_hz * units::kTwoPi, f);
  }

  double operator()(int i, int j) const { return matrix(i, j); }
  double max_norm() const { return max_abs(matrix); }

  static void same_frame(const NqiTensor& a, const NqiTensor& b) {
    if (a.frame != b.frame) {
      throw Error(ErrorKind::InvalidArgument, std::string("NQI tensors in different frames (") +
                                                  to_string(a.frame) + ", " + to_string(b.frame) + ")");
    }
  }

  friend NqiTensor operator+(const NqiTensor& a, const NqiTensor& b) {
    same_frame(a, b);
    return NqiTensor(a.matrix + b.matrix, a.frame);
  }
  friend NqiTensor operator-(const NqiTensor& a, const NqiTensor& b) {
    same_frame(a, b);
    return NqiTensor(a.matrix - b.matrix, a.frame);
  }
  friend NqiTensor operator*(double s, const NqiTensor& a) {
    return NqiTensor(s * a.matrix, a.frame);
  }
};

}  // namespace onerkit::spin
