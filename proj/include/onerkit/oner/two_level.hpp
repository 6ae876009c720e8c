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
#include <vector>

#include "onerkit/oner/pulse_train.hpp"
#include "onerkit/qdyn/propagate.hpp"

namespace onerkit::oner {

/// Driven two-level system. Rates are angular frequencies (rad/s), the
/// period is in seconds.
struct TwoLevelParams {
  double omega_rabi = 0.0;
  double detuning = 0.0;
  double decay = 0.0;
  double dephasing = 0.0;
  double period = 1.0;
  double duty = 0.5;

  /// Omega * period and Gamma * period below this ratio are reported.
  static constexpr double kHierarchyRatio = 10.0;

  void validate() const {
    if (!std::isfinite(omega_rabi) || !std::isfinite(detuning) || !std::isfinite(decay) ||
        !std::isfinite(dephasing) || !std::isfinite(period)) {
      throw Error(ErrorKind::InvalidArgument, "two-level parameters must be finite");
    }
    if (decay < 0.0 || dephasing < 0.0) {
      throw Error(ErrorKind::InvalidArgument, "decay and dephasing rates must be >= 0");
    }
    if (!(period > 0.0)) throw Error(ErrorKind::InvalidArgument, "pulse period must be > 0");
    if (!(duty > 0.0 && duty < 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "duty must lie in (0, 1)");
    }
  }

  /// Notes for every violated timescale ordering (empty when fine).
  std::vector<std::string> hierarchy_warnings() const {
    std::vector<std::string> out;
    auto check = [&](double rate, const char* name) {
      if (rate * period < kHierarchyRatio) {
        std::ostringstream os;
        os << name << " * tau = " << rate * period << " is below " << kHierarchyRatio
           << "; the pulsed population will not settle within a half period";
        out.push_back(os.str());
      }
    };
    if (omega_rabi > 0.0) check(std::abs(omega_rabi), "Omega");
    check(decay, "Gamma");
    return out;
  }
};

struct SteadyState {
  double rho_ee = 0.0;
  Complex rho_eg;  // rotating frame
};

/// Closed-form steady state of the continuously driven two-level system.
inline SteadyState steady_state(const TwoLevelParams& p) {
  p.validate();
  if (!(p.decay > 0.0)) {
    throw Error(ErrorKind::NoSteadyState, "steady state requires Gamma > 0");
  }
  const double g_perp = 0.5 * p.decay + p.dephasing;
  const double om2 = p.omega_rabi * p.omega_rabi;
  const double denom = 1.0 + p.detuning * p.detuning / (g_perp * g_perp) + om2 / (g_perp * p.decay);
  SteadyState s;
  s.rho_ee = om2 / (2.0 * g_perp * p.decay) / denom;
  s.rho_eg = Complex(-p.omega_rabi * p.detuning, p.omega_rabi * g_perp) /
             (2.0 * g_perp * g_perp) / denom;
  return s;
}

/// Basis {|g>, |e>}: index 0 is g.
namespace two_level {

inline CMatrix sigma() {
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

inline CMatrix sigma_z() {
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 0) = -1.0;
  s(1, 1) = 1.0;
  return s;
}

inline CMatrix excited_projector() {
  CMatrix s = CMatrix::Zero(2, 2);
  s(1, 1) = 1.0;
  return s;
}

inline CMatrix ground_projector() {
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 0) = 1.0;
  return s;
}

/// Rotating-frame Hamiltonian -Delta |e><e| - (Omega/2)(sigma + sigma^dag)
/// with the drive on, -Delta |e><e| with it off.
inline CMatrix hamiltonian(const TwoLevelParams& p, bool drive_on) {
  CMatrix h = -p.detuning * excited_projector();
  if (drive_on) {
    const CMatrix s = sigma();
    h -= 0.5 * p.omega_rabi * (s + s.adjoint());
  }
  return h;
}

/// Spontaneous decay sigma at Gamma and pure dephasing sigma_z at gamma_c / 2.
inline std::vector<qdyn::CollapseChannel> channels(const TwoLevelParams& p) {
  std::vector<qdyn::CollapseChannel> out;
  out.emplace_back(sigma(), p.decay);
  out.emplace_back(sigma_z(), 0.5 * p.dephasing);
  return out;
}

}  // namespace two_level

struct TwoLevelSeries {
  std::vector<double> times;
  std::vector<double> rho_ee;
  std::vector<Complex> rho_eg;  // rotating frame
  qdyn::PropagationDiagnostics diagnostics;
  std::vector<std::string> warnings;
};

/// Square-pulse driven two-level system starting in |g>, sampled at
/// k tau / samples_per_period for k = 0 .. n_periods * samples_per_period.
inline TwoLevelSeries simulate_pulsed_two_level(const TwoLevelParams& p, int n_periods,
                                                int samples_per_period,
                                                const qdyn::PropagateOptions& options = {}) {
  p.validate();
  if (n_periods < 1 || samples_per_period < 2) {
    throw Error(ErrorKind::InvalidArgument, "need n_periods >= 1 and samples_per_period >= 2");
  }
  const auto ch = two_level::channels(p);
  const qdyn::TimeDependentHamiltonian h_on(two_level::hamiltonian(p, true));
  const qdyn::TimeDependentHamiltonian h_off(two_level::hamiltonian(p, false));
  const auto times = uniform_samples(n_periods, samples_per_period, p.period);
  const auto traj = propagate_pulsed(h_on, h_off, ch, qdyn::DensityOperator::basis_state(2, 0),
                                     PulseTrain{p.period, p.duty}, times, options);
  TwoLevelSeries out;
  out.times = traj.times;
  out.diagnostics = traj.diagnostics;
  out.warnings = p.hierarchy_warnings();
  for (const auto& rho : traj.states) {
    out.rho_ee.push_back(rho(1, 1).real());
    out.rho_eg.push_back(rho(1, 0));
  }
  return out;
}

/// Continuous drive from |g>, sampled on t_grid.
inline TwoLevelSeries simulate_continuous_two_level(const TwoLevelParams& p,
                                                    std::span<const double> t_grid,
                                                    const qdyn::PropagateOptions& options = {}) {
  p.validate();
  const auto ch = two_level::channels(p);
  const qdyn::TimeDependentHamiltonian h(two_level::hamiltonian(p, true));
  const auto traj = qdyn::propagate(h, ch, qdyn::DensityOperator::basis_state(2, 0), t_grid, options);
  TwoLevelSeries out;
  out.times = traj.times;
  out.diagnostics = traj.diagnostics;
  for (const auto& rho : traj.states) {
    out.rho_ee.push_back(rho(1, 1).real());
    out.rho_eg.push_back(rho(1, 0));
  }
  return out;
}

}  // namespace onerkit::oner
