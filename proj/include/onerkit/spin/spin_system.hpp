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
#include <string>

#include "onerkit/common.hpp"

namespace onerkit::spin {

/// Spin-I angular momentum operators (hbar = 1) in the |m> basis ordered by
/// descending m: index k holds m = I - k.
class SpinSystem {
 public:
  explicit SpinSystem(int two_i) : two_i_(two_i) {
    if (two_i < 1) {
      throw Error(ErrorKind::InvalidArgument, "spin requires two_I >= 1, got " + std::to_string(two_i));
    }
    const Index d = dim();
    const double i = spin();
    iz_ = CMatrix::Zero(d, d);
    CMatrix raise = CMatrix::Zero(d, d);
    for (Index k = 0; k < d; ++k) {
      const double m = m_at(k);
      iz_(k, k) = m;
      // <m+1| I+ |m> lives one row above |m>.
      if (k > 0) raise(k - 1, k) = std::sqrt(i * (i + 1.0) - m * (m + 1.0));
    }
    ix_ = 0.5 * (raise + raise.adjoint());
    iy_ = -0.5 * kI * (raise - raise.adjoint());
  }

  int two_i() const { return two_i_; }
  double spin() const { return 0.5 * two_i_; }
  Index dim() const { return two_i_ + 1; }

  double m_at(Index k) const { return spin() - static_cast<double>(k); }
  int two_m_at(Index k) const { return two_i_ - 2 * static_cast<int>(k); }

  bool has_level(int two_m) const {
    return std::abs(two_m) <= two_i_ && (two_i_ - two_m) % 2 == 0;
  }

  Index index_of(int two_m) const {
    if (!has_level(two_m)) {
      throw Error(ErrorKind::InvalidArgument,
                  "m = " + std::to_string(two_m) + "/2 is not a level of spin " +
                      std::to_string(two_i_) + "/2");
    }
    return (two_i_ - two_m) / 2;
  }

  const CMatrix& ix() const { return ix_; }
  const CMatrix& iy() const { return iy_; }
  const CMatrix& iz() const { return iz_; }

  /// Component by Cartesian index 0, 1, 2.
  const CMatrix& op(int axis) const {
    switch (axis) {
      case 0: return ix_;
      case 1: return iy_;
      default: return iz_;
    }
  }

 private:
  int two_i_;
  CMatrix ix_, iy_, iz_;
};

inline SpinSystem make_spin(int two_i) { return SpinSystem(two_i); }

/// "3/2", "-1/2", "1".
inline std::string format_m(int two_m) {
  if (two_m % 2 == 0) return std::to_string(two_m / 2);
  return std::to_string(two_m) + "/2";
}

}  // namespace onerkit::spin
