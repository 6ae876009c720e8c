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
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "onerkit/spin/nqi_tensor.hpp"
#include "onerkit/spin/spin_system.hpp"
#include "onerkit/units.hpp"

namespace onerkit::spin {

/// A spin-level transition m_from -> m_to, both stored as 2m.
struct Transition {
  int two_m_from = 0;
  int two_m_to = 0;

  int two_m_upper() const { return std::max(two_m_from, two_m_to); }
  int two_m_lower() const { return std::min(two_m_from, two_m_to); }
  int delta_m() const { return std::abs(two_m_from - two_m_to) / 2; }
  bool lowering() const { return two_m_to < two_m_from; }

  std::string label() const { return format_m(two_m_from) + "->" + format_m(two_m_to); }

  friend bool operator==(const Transition&, const Transition&) = default;
};

namespace detail {

inline void check_transition(const Transition& t, const SpinSystem& s) {
  s.index_of(t.two_m_from);
  s.index_of(t.two_m_to);
  const int d2 = std::abs(t.two_m_from - t.two_m_to);
  if (d2 != 2 && d2 != 4) {
    throw Error(ErrorKind::UnsupportedTransition,
                "transition " + t.label() +
                    ": the quadrupole interaction only couples levels with |dm| = 1 or 2");
  }
}

}  // namespace detail

struct LevelEnergy {
  int two_m;
  double energy;  // rad/s
};

struct LevelScheme {
  std::vector<LevelEnergy> levels;  // descending m
  std::optional<std::string> warning;
};

/// Perturbative regime is advisory: below this Zeeman/quadrupole ratio the
/// level scheme carries a warning.
inline constexpr double kPerturbativeRatio = 10.0;

/// First-order level energies -gamma B0 m + (3m^2/2 - I(I+1)/2) Q_zz (rad/s).
inline LevelScheme first_order_energies(double gamma_hz_per_t, double b0_tesla, double qzz,
                                        const SpinSystem& s) {
  const double zeeman = units::hz_to_rad(gamma_hz_per_t * b0_tesla);
  const double i = s.spin();
  LevelScheme scheme;
  for (Index k = 0; k < s.dim(); ++k) {
    const double m = s.m_at(k);
    scheme.levels.push_back(
        {s.two_m_at(k), -zeeman * m + (1.5 * m * m - 0.5 * i * (i + 1.0)) * qzz});
  }
  if (qzz != 0.0 && std::abs(zeeman) < kPerturbativeRatio * std::abs(qzz)) {
    std::ostringstream os;
    os << "Zeeman/quadrupole ratio " << std::abs(zeeman) / std::abs(qzz) << " is below "
       << kPerturbativeRatio << "; first-order energies may be inaccurate";
    scheme.warning = os.str();
  }
  return scheme;
}

/// Quadrupole part of the first-order transition energy E(m_upper) - E(m_lower).
inline double transition_correction(const Transition& t, double qzz, const SpinSystem& s) {
  detail::check_transition(t, s);
  const double m = 0.5 * t.two_m_upper();
  return t.delta_m() == 1 ? 1.5 * (2.0 * m - 1.0) * qzz : 1.5 * (4.0 * m - 4.0) * qzz;
}

/// First-order transition energy E(m_upper) - E(m_lower) in rad/s; independent
/// of the direction in which the transition is named.
inline double transition_energy(const Transition& t, double gamma_hz_per_t, double b0_tesla,
                                double qzz, const SpinSystem& s) {
  const double zeeman = units::hz_to_rad(gamma_hz_per_t * b0_tesla);
  return -zeeman * t.delta_m() + transition_correction(t, qzz, s);
}

/// alpha for m <-> m-1, m being the upper level.
inline double alpha_prefactor(int two_m_upper, const SpinSystem& s) {
  const double i = s.spin();
  const double m = 0.5 * two_m_upper;
  return 0.5 * std::abs(2.0 * m - 1.0) * std::sqrt(i * (i + 1.0) - m * (m - 1.0));
}

/// beta for m <-> m-2, m being the upper level.
inline double beta_prefactor(int two_m_upper, const SpinSystem& s) {
  const double i = s.spin();
  const double m = 0.5 * two_m_upper;
  return 0.25 * std::sqrt(i * (i + 1.0) - (m - 1.0) * (m - 2.0)) *
         std::sqrt(i * (i + 1.0) - m * (m - 1.0));
}

/// Transition amplitude g. For lowering transitions (m -> m-1, m -> m-2) this
/// is alpha (Q_xz + i Q_yz) or beta (Q_xx - Q_yy + 2i Q_yx). Its modulus is
/// |<m_to|H_Q|m_from>|; the two agree exactly except for |dm| = 1 with
/// 2m - 1 < 0, where the matrix element carries the opposite sign. Raising
/// transitions get the conjugate.
inline Complex transition_amplitude(const Transition& t, const Eigen::Matrix3d& q,
                                    const SpinSystem& s) {
  detail::check_transition(t, s);
  Complex g;
  if (t.delta_m() == 1) {
    g = alpha_prefactor(t.two_m_upper(), s) * Complex(q(0, 2), q(1, 2));
  } else {
    g = beta_prefactor(t.two_m_upper(), s) * Complex(q(0, 0) - q(1, 1), 2.0 * q(1, 0));
  }
  return t.lowering() ? g : std::conj(g);
}

inline Complex transition_amplitude(const Transition& t, const NqiTensor& q, const SpinSystem& s) {
  return transition_amplitude(t, q.matrix, s);
}

/// Every |dm| in {1, 2} transition of the spin, named from the upper level
/// down, ordered by |dm| and then by descending upper level.
inline std::vector<Transition> quadrupole_transitions(const SpinSystem& s) {
  std::vector<Transition> out;
  for (int dm = 1; dm <= 2; ++dm) {
    for (int two_m = s.two_i(); two_m - 2 * dm >= -s.two_i(); two_m -= 2) {
      out.push_back({two_m, two_m - 2 * dm});
    }
  }
  return out;
}

}  // namespace onerkit::spin
