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
#include <numbers>
#include <span>

#include "onerkit/common.hpp"

namespace onerkit::oner {

/// Least-squares fit of p(t) = A sin^2(pi nu t) + c.
struct RabiFit {
  bool oscillates = false;  // false: flat series, nu = A = 0
  double nu_hz = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double rss = 0.0;
};

namespace detail {

struct LinearPart {
  double a = 0.0, c = 0.0, rss = 0.0;
};

// Best A, c for fixed nu.
inline LinearPart project_rabi(std::span<const double> t, std::span<const double> p, double nu) {
  double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double s = std::sin(std::numbers::pi * nu * t[k]);
    const double f = s * s;
    s11 += f * f;
    s12 += f;
    s22 += 1.0;
    r1 += f * p[k];
    r2 += p[k];
  }
  LinearPart out;
  const double det = s11 * s22 - s12 * s12;
  if (std::abs(det) < 1e-14 * s11 * s22) {
    out.c = r2 / s22;
  } else {
    out.a = (r1 * s22 - r2 * s12) / det;
    out.c = (s11 * r2 - s12 * r1) / det;
  }
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double s = std::sin(std::numbers::pi * nu * t[k]);
    const double r = p[k] - out.a * s * s - out.c;
    out.rss += r * r;
  }
  return out;
}

}  // namespace detail

/// Fits over nu in [nu_min, nu_max]: a grid scan fine enough to resolve the
/// residual minimum followed by golden-section refinement.
inline RabiFit fit_rabi(std::span<const double> times, std::span<const double> population,
                        double nu_min, double nu_max) {
  if (times.size() != population.size() || times.size() < 4) {
    throw Error(ErrorKind::InvalidArgument, "rabi fit needs >= 4 matching samples");
  }
  if (!(nu_min > 0.0) || !(nu_max > nu_min)) {
    throw Error(ErrorKind::InvalidArgument, "rabi fit needs 0 < nu_min < nu_max");
  }
  const auto [lo_it, hi_it] = std::minmax_element(population.begin(), population.end());
  RabiFit fit;
  if (*hi_it - *lo_it < 1e-6) {
    fit.offset = 0.5 * (*hi_it + *lo_it);
    return fit;
  }
  const double span_t = times.back() - times.front();
  const double step = std::min(0.01 / span_t, 0.01 * nu_min);
  const int n_grid = std::max(100, static_cast<int>(std::ceil((nu_max - nu_min) / step)));
  const double dnu = (nu_max - nu_min) / n_grid;
  double best_nu = nu_min;
  double best_rss = detail::project_rabi(times, population, nu_min).rss;
  for (int i = 1; i <= n_grid; ++i) {
    const double nu = nu_min + dnu * i;
    const double r = detail::project_rabi(times, population, nu).rss;
    if (r < best_rss) {
      best_rss = r;
      best_nu = nu;
    }
  }
  double a = std::max(nu_min, best_nu - dnu), b = std::min(nu_max, best_nu + dnu);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = detail::project_rabi(times, population, x1).rss;
  double f2 = detail::project_rabi(times, population, x2).rss;
  for (int it = 0; it < 100 && (b - a) > 1e-12 * best_nu; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = detail::project_rabi(times, population, x1).rss;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = detail::project_rabi(times, population, x2).rss;
    }
  }
  fit.nu_hz = 0.5 * (a + b);
  const auto lin = detail::project_rabi(times, population, fit.nu_hz);
  fit.oscillates = true;
  fit.amplitude = lin.a;
  fit.offset = lin.c;
  fit.rss = lin.rss;
  return fit;
}

}  // namespace onerkit::oner
