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
#include <cmath>
#include <span>
#include <vector>

#include "onerkit/qdyn/propagate.hpp"

namespace onerkit::oner {

/// Square envelope: drive on for t mod period in (0, duty * period).
struct PulseTrain {
  double period = 1.0;
  double duty = 0.5;

  bool on_at(double t) const {
    const double phase = t / period - std::floor(t / period);
    return phase > 0.0 && phase < duty;
  }
};

/// Times k * period / samples_per_period for k = 0 .. n_periods * samples_per_period.
inline std::vector<double> uniform_samples(int n_periods, int samples_per_period, double period) {
  const long n = static_cast<long>(n_periods) * samples_per_period;
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (long k = 0; k <= n; ++k) t[k] = period * static_cast<double>(k) / samples_per_period;
  return t;
}

/// Propagates through a square pulse train, switching between the drive-on
/// and drive-off Hamiltonians at every edge. Each constant-envelope segment
/// is integrated separately so no RK4 step straddles an edge. States are
/// returned at sample_times, whose first entry is the initial time.
inline qdyn::Trajectory propagate_pulsed(const qdyn::TimeDependentHamiltonian& h_on,
                                         const qdyn::TimeDependentHamiltonian& h_off,
                                         std::span<const qdyn::CollapseChannel> channels,
                                         const qdyn::DensityOperator& rho0, const PulseTrain& train,
                                         std::span<const double> sample_times,
                                         const qdyn::PropagateOptions& options = {}) {
  if (sample_times.empty()) throw Error(ErrorKind::InvalidArgument, "no sample times");
  if (!(train.period > 0.0) || !(train.duty > 0.0 && train.duty < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "pulse train needs period > 0 and 0 < duty < 1");
  }
  const double t0 = sample_times.front();
  const double t_end = sample_times.back();
  const double snap = 1e-9 * train.period;

  // Segment edges inside (t0, t_end).
  std::vector<double> edges;
  const long k_first = static_cast<long>(std::floor(t0 / train.period));
  for (long k = k_first;; ++k) {
    const double start = k * train.period;
    if (start > t_end) break;
    for (double e : {start, start + train.duty * train.period}) {
      if (e > t0 + snap && e < t_end - snap) edges.push_back(e);
    }
  }

  qdyn::Trajectory out;
  out.times.assign(sample_times.begin(), sample_times.end());
  out.states.reserve(sample_times.size());
  out.states.push_back(rho0);

  qdyn::DensityOperator rho = rho0;
  std::size_t next_sample = 1;
  double seg_start = t0;
  std::size_t next_edge = 0;
  std::vector<double> grid;
  while (next_sample < sample_times.size()) {
    const double seg_end = next_edge < edges.size() ? edges[next_edge] : t_end;
    grid.assign(1, seg_start);
    std::vector<std::size_t> recorded;
    while (next_sample < sample_times.size() && sample_times[next_sample] <= seg_end + snap) {
      const double ts = sample_times[next_sample];
      if (ts > grid.back() + snap) grid.push_back(ts);
      recorded.push_back(grid.size() - 1);
      ++next_sample;
    }
    if (seg_end > grid.back() + snap) grid.push_back(seg_end);

    const bool on = train.on_at(0.5 * (seg_start + seg_end));
    if (grid.size() > 1) {
      qdyn::Trajectory seg =
          qdyn::propagate(on ? h_on : h_off, channels, rho, grid, options);
      for (std::size_t idx : recorded) out.states.push_back(seg.states[idx]);
      rho = seg.states.back();
      out.diagnostics.merge(seg.diagnostics);
    } else {
      for (std::size_t i = 0; i < recorded.size(); ++i) out.states.push_back(rho);
    }
    seg_start = grid.back();
    ++next_edge;
  }
  return out;
}

}  // namespace onerkit::oner
