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
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "onerkit/efg/geometry.hpp"
#include "onerkit/efg/nucleus.hpp"
#include "onerkit/oner/two_level.hpp"
#include "onerkit/spin/levels.hpp"

namespace onerkit::oner {

using spin::NqiTensor;
using spin::Transition;

/// NQI tensors of the electronic ground and excited states, plus an optional
/// real off-diagonal block <e|Q|g>.
struct StatePairNqi {
  NqiTensor ground;
  NqiTensor excited;
  std::optional<NqiTensor> coherence;

  StatePairNqi(NqiTensor g, NqiTensor e, std::optional<NqiTensor> eg = std::nullopt)
      : ground(std::move(g)), excited(std::move(e)), coherence(std::move(eg)) {
    NqiTensor::same_frame(ground, excited);
    if (coherence) NqiTensor::same_frame(ground, *coherence);
  }

  NqiTensor difference() const { return excited - ground; }

  StatePairNqi rotated(double theta) const {
    std::optional<NqiTensor> eg;
    if (coherence) eg = efg::rotate_about_x(*coherence, theta);
    return {efg::rotate_about_x(ground, theta), efg::rotate_about_x(excited, theta), eg};
  }
};

/// <Q>(t) from a two-level series. The coherences are rotating-frame values;
/// carrier (rad/s) restores the lab-frame phase e^{-i w t}.
inline std::vector<Eigen::Matrix3d> effective_nqi_series(std::span<const double> times,
                                                         std::span<const double> rho_ee,
                                                         std::span<const Complex> rho_eg,
                                                         const StatePairNqi& pair,
                                                         double carrier = 0.0) {
  if (times.size() != rho_ee.size() || (pair.coherence && rho_eg.size() != rho_ee.size())) {
    throw Error(ErrorKind::DimensionMismatch, "two-level series columns differ in length");
  }
  std::vector<Eigen::Matrix3d> out;
  out.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    Eigen::Matrix3d q = rho_ee[k] * pair.excited.matrix + (1.0 - rho_ee[k]) * pair.ground.matrix;
    if (pair.coherence) {
      const Complex lab = rho_eg[k] * std::exp(Complex(0.0, -carrier * times[k]));
      q += 2.0 * lab.real() * pair.coherence->matrix;
    }
    out.push_back(q);
  }
  return out;
}

struct EffectiveNqi {
  NqiTensor q0;
  NqiTensor q1;
};

/// Constant and harmonically modulated parts of the NQI under square pulses.
inline EffectiveNqi q0_q1(const StatePairNqi& pair, double rho_ee_inf) {
  if (!(rho_ee_inf >= 0.0 && rho_ee_inf <= 0.5 + 1e-9)) {
    throw Error(ErrorKind::InvalidArgument,
                "steady-state population must lie in [0, 1/2], got " + std::to_string(rho_ee_inf));
  }
  const NqiTensor dq = pair.difference();
  return {pair.ground + (0.5 * rho_ee_inf) * dq, (2.0 * rho_ee_inf / std::numbers::pi) * dq};
}

/// What the spin sees: H = H_B + I.Q0.I + sin(2 pi nu t) I.Q1.I with the
/// tensors in the B-frame (z along the static field).
struct SpinDrive {
  NqiTensor q0;
  NqiTensor q1;
  double repetition_rate_hz = 0.0;
};

struct OnerPlan {
  NqiTensor q0;  // B-frame, rad/s
  NqiTensor q1;  // B-frame, rad/s
  Transition transition;
  double rho_ee_inf = 0.0;
  double repetition_rate_hz = 0.0;
  double predicted_rabi_hz = 0.0;
  Complex amplitude;  // rad/s
  std::optional<std::string> warning;

  SpinDrive drive() const { return {q0, q1, repetition_rate_hz}; }
  double period() const { return 1.0 / repetition_rate_hz; }
};

namespace detail {

// With require_amplitude false a vanishing amplitude yields predicted_rabi 0
// and a warning instead of an error.
inline OnerPlan finish_plan(const EffectiveNqi& eff, double rho_ee_inf,
                            const efg::NucleusRecord& nucleus, double b0_tesla,
                            const Transition& t, bool require_amplitude = true) {
  const spin::SpinSystem s(nucleus.two_i);
  spin::detail::check_transition(t, s);
  OnerPlan p{eff.q0, eff.q1, t, rho_ee_inf};
  const double prefactor = t.delta_m() == 1 ? spin::alpha_prefactor(t.two_m_upper(), s)
                                            : spin::beta_prefactor(t.two_m_upper(), s);
  const double energy =
      spin::transition_energy(t, nucleus.gamma_hz_per_t(), b0_tesla, eff.q0(2, 2), s);
  p.repetition_rate_hz = units::rad_to_hz(std::abs(energy));
  p.warning = spin::first_order_energies(nucleus.gamma_hz_per_t(), b0_tesla, eff.q0(2, 2), s).warning;

  std::string reason;
  p.amplitude = spin::transition_amplitude(t, eff.q1, s);
  const double scale = prefactor * std::max(eff.q1.max_norm(), eff.q0.max_norm());
  if (prefactor == 0.0) {
    reason = "its spin prefactor vanishes";
  } else if (scale == 0.0 || !(std::abs(p.amplitude) > 1e-12 * scale)) {
    reason = "the modulated NQI has no matching off-diagonal components";
  }
  if (!reason.empty()) {
    const std::string msg = "transition " + t.label() + " has zero amplitude: " + reason;
    if (require_amplitude) throw Error(ErrorKind::ForbiddenTransition, msg);
    p.amplitude = 0.0;
    p.warning = msg;
    return p;
  }
  p.predicted_rabi_hz = units::rad_to_hz(std::abs(p.amplitude));
  return p;
}

}  // namespace detail

/// Plans a transition with the E-frame pair rotated by theta into the B-frame.
/// A transition without amplitude is an error unless require_amplitude is false.
inline OnerPlan plan(const StatePairNqi& pair, const efg::NucleusRecord& nucleus, double b0_tesla,
                     double theta, const TwoLevelParams& params, const Transition& transition,
                     bool require_amplitude = true) {
  const double rho = steady_state(params).rho_ee;
  return detail::finish_plan(q0_q1(pair.rotated(theta), rho), rho, nucleus, b0_tesla, transition,
                             require_amplitude);
}

/// Same as plan() for a static field along an arbitrary axis given in the
/// tensors' own frame.
inline OnerPlan plan_along(const StatePairNqi& pair, const efg::NucleusRecord& nucleus,
                           double b0_tesla, const Eigen::Vector3d& field_axis,
                           const TwoLevelParams& params, const Transition& transition) {
  if (!(field_axis.norm() > 0.0)) throw Error(ErrorKind::InvalidArgument, "zero field axis");
  const Eigen::Matrix3d r =
      Eigen::Quaterniond::FromTwoVectors(field_axis.normalized(), Eigen::Vector3d::UnitZ())
          .toRotationMatrix();
  auto to_b = [&](const NqiTensor& q) {
    const Eigen::Matrix3d m = r * q.matrix * r.transpose();
    return NqiTensor(0.5 * (m + m.transpose()), spin::Frame::BField);
  };
  std::optional<NqiTensor> eg;
  if (pair.coherence) eg = to_b(*pair.coherence);
  const StatePairNqi b_pair(to_b(pair.ground), to_b(pair.excited), eg);
  const double rho = steady_state(params).rho_ee;
  return detail::finish_plan(q0_q1(b_pair, rho), rho, nucleus, b0_tesla, transition);
}

}  // namespace onerkit::oner
