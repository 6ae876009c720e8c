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
#include <optional>
#include <string>
#include <vector>

#include "onerkit/oner/effective.hpp"
#include "onerkit/oner/pulse_train.hpp"
#include "onerkit/qdyn/compose.hpp"
#include "onerkit/spin/hamiltonians.hpp"

namespace onerkit::oner {

struct SpinSeries {
  std::vector<double> times;
  std::vector<int> two_m;                        // level labels, descending m
  std::vector<std::vector<double>> populations;  // [time][level]
  qdyn::PropagationDiagnostics diagnostics;

  std::vector<double> population_of(int level_two_m) const {
    std::size_t k = 0;
    while (k < two_m.size() && two_m[k] != level_two_m) ++k;
    if (k == two_m.size()) {
      throw Error(ErrorKind::InvalidArgument, "no level 2m = " + std::to_string(level_two_m));
    }
    std::vector<double> out;
    out.reserve(populations.size());
    for (const auto& row : populations) out.push_back(row[k]);
    return out;
  }
};

struct SpinRunOptions {
  int samples_per_period = 16;
  qdyn::PropagateOptions propagate;
};

namespace detail {

inline std::vector<double> sample_grid(double duration, double period, int samples_per_period) {
  if (!(duration > 0.0) || !(period > 0.0) || samples_per_period < 2) {
    throw Error(ErrorKind::InvalidArgument,
                "need duration > 0, period > 0 and samples_per_period >= 2");
  }
  const double n = std::ceil(duration / period * samples_per_period - 1e-9);
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = period * static_cast<double>(k) / samples_per_period;
  }
  return t;
}

inline std::vector<int> level_labels(const spin::SpinSystem& s) {
  std::vector<int> out;
  for (Index k = 0; k < s.dim(); ++k) out.push_back(s.two_m_at(k));
  return out;
}

}  // namespace detail

/// Unitary spin evolution under the effective drive, starting from |m>.
inline SpinSeries simulate_spin_effective(const SpinDrive& drive, const efg::NucleusRecord& nucleus,
                                          double b0_tesla, int initial_two_m, double duration,
                                          const SpinRunOptions& options = {}) {
  if (!(drive.repetition_rate_hz > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "repetition rate must be > 0");
  }
  const spin::SpinSystem s(nucleus.two_i);
  const Index start = s.index_of(initial_two_m);
  const double w = units::hz_to_rad(drive.repetition_rate_hz);
  qdyn::TimeDependentHamiltonian h(spin::zeeman_hamiltonian(nucleus.gamma_hz_per_t(), b0_tesla, s) +
                                   spin::quadrupole_hamiltonian(drive.q0, s));
  h.add_term(spin::quadrupole_hamiltonian(drive.q1, s), [w](double t) { return std::sin(w * t); });
  const auto grid =
      detail::sample_grid(duration, 1.0 / drive.repetition_rate_hz, options.samples_per_period);
  const auto traj = qdyn::propagate(h, {}, qdyn::DensityOperator::basis_state(s.dim(), start), grid,
                                    options.propagate);
  SpinSeries out;
  out.times = traj.times;
  out.two_m = detail::level_labels(s);
  out.diagnostics = traj.diagnostics;
  for (const auto& rho : traj.states) {
    const Eigen::VectorXd pop = rho.populations();
    out.populations.emplace_back(pop.data(), pop.data() + pop.size());
  }
  return out;
}

struct CoupledOptions {
  int samples_per_period = 16;
  /// Overrides the planned repetition rate.
  std::optional<double> repetition_rate_hz;
  /// Optical carrier (rad/s); required when the pair has a coherence block.
  std::optional<double> carrier;
  qdyn::PropagateOptions propagate;
};

struct CoupledResult {
  OnerPlan plan;
  TwoLevelParams pulse;
  SpinSeries spin;
  std::vector<double> rho_ee;
  std::vector<Complex> rho_eg;  // rotating frame
  std::vector<std::string> warnings;
};

/// Two-level system and nuclear spin on the joint 2(2I+1) space, two-level
/// index outermost. The drive is applied in the optical rotating frame.
inline CoupledResult simulate_coupled(const StatePairNqi& pair, const efg::NucleusRecord& nucleus,
                                      double b0_tesla, double theta, const TwoLevelParams& params,
                                      const Transition& transition, double duration,
                                      const CoupledOptions& options = {}) {
  CoupledResult out{plan(pair, nucleus, b0_tesla, theta, params, transition, false), params};
  const double rep = options.repetition_rate_hz.value_or(out.plan.repetition_rate_hz);
  if (!(rep > 0.0)) throw Error(ErrorKind::InvalidArgument, "repetition rate must be > 0");
  out.pulse.period = 1.0 / rep;
  out.warnings = out.pulse.hierarchy_warnings();
  if (out.plan.warning) out.warnings.push_back(*out.plan.warning);

  const spin::SpinSystem s(nucleus.two_i);
  const Index n = s.dim();
  const CMatrix id_s = CMatrix::Identity(n, n);
  const CMatrix id_2 = CMatrix::Identity(2, 2);
  const StatePairNqi b_pair = pair.rotated(theta);

  const CMatrix static_part =
      qdyn::kron(id_2, spin::zeeman_hamiltonian(nucleus.gamma_hz_per_t(), b0_tesla, s)) +
      qdyn::kron(two_level::ground_projector(), spin::quadrupole_hamiltonian(b_pair.ground, s)) +
      qdyn::kron(two_level::excited_projector(), spin::quadrupole_hamiltonian(b_pair.excited, s));
  qdyn::TimeDependentHamiltonian h_on(
      qdyn::kron(two_level::hamiltonian(out.pulse, true), id_s) + static_part);
  qdyn::TimeDependentHamiltonian h_off(
      qdyn::kron(two_level::hamiltonian(out.pulse, false), id_s) + static_part);
  if (b_pair.coherence) {
    if (!options.carrier) {
      throw Error(ErrorKind::InvalidArgument, "a coherence NQI block needs the optical carrier");
    }
    const double w = *options.carrier;
    const CMatrix sg = two_level::sigma();
    const CMatrix hq = spin::quadrupole_hamiltonian(*b_pair.coherence, s);
    const CMatrix c_op = qdyn::kron(sg + sg.adjoint(), hq);
    const CMatrix s_op = qdyn::kron(Complex(0.0, 1.0) * (sg.adjoint() - sg), hq);
    for (auto* h : {&h_on, &h_off}) {
      h->add_term(c_op, [w](double t) { return std::cos(w * t); });
      h->add_term(s_op, [w](double t) { return std::sin(w * t); });
    }
  }
  std::vector<qdyn::CollapseChannel> channels;
  for (const auto& c : two_level::channels(out.pulse)) {
    channels.emplace_back(qdyn::kron(c.op, id_s), c.rate);
  }
  const auto rho0 = qdyn::DensityOperator::trusted(
      qdyn::kron(two_level::ground_projector(),
                 qdyn::DensityOperator::basis_state(n, s.index_of(transition.two_m_from)).matrix()));
  const auto grid = detail::sample_grid(duration, out.pulse.period, options.samples_per_period);

  qdyn::Trajectory traj;
  try {
    traj = propagate_pulsed(h_on, h_off, channels, rho0, PulseTrain{out.pulse.period, out.pulse.duty},
                            grid, options.propagate);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::IntegrationFailure) throw;
    throw Error(ErrorKind::IntegrationFailure,
                std::string(e.what()) + "; consider the scaled unit mode for the electronic tier");
  }
  out.spin.times = traj.times;
  out.spin.two_m = detail::level_labels(s);
  out.spin.diagnostics = traj.diagnostics;
  for (const auto& rho : traj.states) {
    const CMatrix& m = rho.matrix();
    out.spin.populations.emplace_back();
    const CMatrix spin_rho = qdyn::partial_trace(m, qdyn::Subsystem::B, 2, n);
    const CMatrix two_rho = qdyn::partial_trace(m, qdyn::Subsystem::A, 2, n);
    auto& row = out.spin.populations.back();
    for (Index k = 0; k < n; ++k) row.push_back(spin_rho(k, k).real());
    out.rho_ee.push_back(two_rho(1, 1).real());
    out.rho_eg.push_back(two_rho(1, 0));
  }
  return out;
}

/// Scaled-unit mode: the electronic tier is compressed so that
/// Gamma = ratio * 2 pi * repetition_rate, keeping Omega/Gamma, Delta/Gamma
/// and gamma_c/Gamma (hence the steady state and the plan) unchanged.
inline TwoLevelParams scale_electronic_tier(const TwoLevelParams& p, double repetition_rate_hz,
                                            double ratio) {
  p.validate();
  if (!(p.decay > 0.0) || !(ratio > 0.0) || !(repetition_rate_hz > 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "scaled mode needs Gamma > 0, ratio > 0 and a positive repetition rate");
  }
  const double f = ratio * units::hz_to_rad(repetition_rate_hz) / p.decay;
  TwoLevelParams out = p;
  out.omega_rabi *= f;
  out.detuning *= f;
  out.decay *= f;
  out.dephasing *= f;
  out.period = 1.0 / repetition_rate_hz;
  return out;
}

/// Note when the spin tier itself violates the ordering Zeeman >> |Q|.
inline std::optional<std::string> spin_tier_warning(const StatePairNqi& pair,
                                                    const efg::NucleusRecord& nucleus,
                                                    double b0_tesla, double ratio) {
  const double zeeman = std::abs(units::hz_to_rad(nucleus.gamma_hz_per_t() * b0_tesla));
  const double q = std::max(pair.ground.max_norm(), pair.excited.max_norm());
  if (q > 0.0 && zeeman < ratio * q) {
    return "Zeeman/|Q| = " + std::to_string(zeeman / q) + " is below the tier ratio " +
           std::to_string(ratio);
  }
  return std::nullopt;
}

}  // namespace onerkit::oner
