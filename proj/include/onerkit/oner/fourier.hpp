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
#include <span>
#include <string>
#include <vector>

#include "onerkit/common.hpp"
#include "onerkit/units.hpp"

namespace onerkit::oner {

/// Real Fourier series coefficients with rho(t) = a[0]/2 + sum a[n] cos + b[n] sin.
/// b[0] is always 0.
struct FourierCoefficients {
  std::vector<double> a;
  std::vector<double> b;
};

/// Coefficients over one period by trapezoidal quadrature. The samples are
/// either uniform over [t0, t0 + period) (periodic closure) or over
/// [t0, t0 + period] including the endpoint.
inline FourierCoefficients fourier_coefficients(std::span<const double> times,
                                                std::span<const double> values, double period,
                                                int n_max) {
  if (times.size() != values.size()) {
    throw Error(ErrorKind::DimensionMismatch, "times and values differ in length");
  }
  if (!(period > 0.0) || n_max < 0) {
    throw Error(ErrorKind::InvalidArgument, "need period > 0 and n_max >= 0");
  }
  if (times.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two samples");
  const double tol = 1e-9 * period;
  const std::size_t n_total = times.size();
  const bool closed = std::abs(times.back() - times.front() - period) <= tol;
  const std::size_t n = closed ? n_total - 1 : n_total;
  const double dt = period / static_cast<double>(n);
  for (std::size_t k = 0; k < n_total; ++k) {
    if (std::abs(times[k] - times.front() - dt * static_cast<double>(k)) > tol) {
      throw Error(ErrorKind::InvalidArgument,
                  "samples are not uniform over one period (sample " + std::to_string(k) + ")");
    }
  }
  if (n < static_cast<std::size_t>(2 * n_max + 1)) {
    throw Error(ErrorKind::InvalidArgument, "too few samples for the requested n_max");
  }
  FourierCoefficients out;
  out.a.assign(n_max + 1, 0.0);
  out.b.assign(n_max + 1, 0.0);
  for (int m = 0; m <= n_max; ++m) {
    const double w = units::kTwoPi * m / period;
    double sa = 0.0, sb = 0.0;
    for (std::size_t k = 0; k < n_total; ++k) {
      double weight = 1.0;
      if (closed && (k == 0 || k == n_total - 1)) weight = 0.5;
      sa += weight * values[k] * std::cos(w * times[k]);
      sb += weight * values[k] * std::sin(w * times[k]);
    }
    out.a[m] = 2.0 * sa * dt / period;
    out.b[m] = m == 0 ? 0.0 : 2.0 * sb * dt / period;
  }
  return out;
}

}  // namespace onerkit::oner
