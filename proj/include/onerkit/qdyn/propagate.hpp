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
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "onerkit/qdyn/density.hpp"

namespace onerkit::qdyn {

/// One control term f(t) * op of a time-dependent Hamiltonian. The operator
/// is hermitian and the coefficient real, so every H(t) is hermitian.
struct HamiltonianTerm {
  CMatrix op;
  std::function<double(double)> coeff;
  double coeff_bound = 1.0;  // sup_t |coeff(t)|
};

/// H(t) = H0 + sum_k f_k(t) H_k in angular-frequency units (hbar = 1).
class TimeDependentHamiltonian {
 public:
  explicit TimeDependentHamiltonian(CMatrix constant) : constant_(std::move(constant)) {
    check_hermitian(constant_, "constant part");
  }

  TimeDependentHamiltonian& add_term(CMatrix op, std::function<double(double)> coeff,
                                     double coeff_bound = 1.0) {
    if (op.rows() != constant_.rows() || op.cols() != constant_.cols()) {
      throw Error(ErrorKind::DimensionMismatch, "hamiltonian term dimension differs from H0");
    }
    check_hermitian(op, "control term");
    terms_.push_back({std::move(op), std::move(coeff), std::abs(coeff_bound)});
    return *this;
  }

  Index dim() const { return constant_.rows(); }
  const CMatrix& constant() const { return constant_; }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }

  CMatrix at(double t) const {
    CMatrix h = constant_;
    for (const auto& term : terms_) h += term.coeff(t) * term.op;
    return h;
  }

  /// Upper bound on the largest matrix element of H(t) over all t.
  double norm_bound() const {
    double bound = max_abs(constant_);
    for (const auto& term : terms_) bound += term.coeff_bound * max_abs(term.op);
    return bound;
  }

 private:
  static void check_hermitian(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols()) {
      throw Error(ErrorKind::InvalidArgument, std::string("hamiltonian ") + what + " not square");
    }
    const double scale = std::max(1.0, max_abs(m));
    if (hermiticity_residual(m) > 1e-12 * scale) {
      throw Error(ErrorKind::InvalidArgument, std::string("hamiltonian ") + what + " not hermitian");
    }
  }

  CMatrix constant_;
  std::vector<HamiltonianTerm> terms_;
};

struct PropagateOptions {
  /// Internal substep h satisfies h * max(Gamma_total, |H|_max) <= step_factor.
  double step_factor = 0.02;
  /// Pre-correction trace drift over one output interval that aborts the run.
  double max_trace_drift = 1e-6;
  /// Compute the minimum eigenvalue of every output state.
  bool track_positivity = true;
};

struct PropagationDiagnostics {
  std::size_t substeps = 0;
  double max_step_trace_drift = 0.0;
  double max_interval_trace_drift = 0.0;
  double max_hermiticity_residual = 0.0;
  double min_eigenvalue = std::numeric_limits<double>::infinity();

  void merge(const PropagationDiagnostics& other) {
    substeps += other.substeps;
    max_step_trace_drift = std::max(max_step_trace_drift, other.max_step_trace_drift);
    max_interval_trace_drift = std::max(max_interval_trace_drift, other.max_interval_trace_drift);
    max_hermiticity_residual = std::max(max_hermiticity_residual, other.max_hermiticity_residual);
    min_eigenvalue = std::min(min_eigenvalue, other.min_eigenvalue);
  }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityOperator> states;
  PropagationDiagnostics diagnostics;
};

/// Total dissipation scale sum_a k_a |c_a^+ c_a|_max.
inline double dissipation_scale(std::span<const CollapseChannel> channels) {
  double total = 0.0;
  for (const auto& ch : channels) total += ch.rate * max_abs(ch.op.adjoint() * ch.op);
  return total;
}

/// Number of RK4 substeps for an interval of length dt.
inline long substep_count(double dt, double rate, double step_factor) {
  if (rate <= 0.0) return 1;
  return std::max(1L, static_cast<long>(std::ceil(dt * rate / step_factor)));
}

namespace detail {

// Fixed-size kernels for the dimensions that dominate the workload (2, 4, 8); the
// generic path uses dynamic matrices.
template <int D>
class Rk4Kernel {
 public:
  using Mat = Eigen::Matrix<Complex, D, D>;

  Rk4Kernel(const TimeDependentHamiltonian& h, std::span<const CollapseChannel> channels) {
    const Index dim = h.dim();
    CMatrix k_sum = CMatrix::Zero(dim, dim);
    for (const auto& ch : channels) {
      if (ch.rate == 0.0) continue;
      std::vector<Entry> entries;
      for (Index i = 0; i < dim; ++i)
        for (Index k = 0; k < dim; ++k)
          if (ch.op(i, k) != Complex(0.0)) entries.push_back({i, k, ch.op(i, k)});
      if (static_cast<Index>(entries.size()) <= dim) {
        sparse_jumps_.push_back(std::move(entries));
        sparse_rates_.push_back(ch.rate);
      } else {
        jumps_.push_back(Mat(ch.op));
        jumps_adj_.push_back(Mat(ch.op.adjoint()));
        rates_.push_back(ch.rate);
      }
      k_sum += ch.rate * ch.op.adjoint() * ch.op;
    }
    // H_eff = H0 - i/2 K folds the anticommutator into a single product.
    base_ = Mat(h.constant() - 0.5 * kI * k_sum);
    for (const auto& term : h.terms()) {
      terms_.push_back(Mat(term.op));
      coeffs_.push_back(&term.coeff);
    }
  }

  bool closed() const { return jumps_.empty() && sparse_jumps_.empty(); }

  /// Advances rho over [t0, t0 + n h] in n classic RK4 substeps.
  void advance(Mat& rho, double t0, double h, long n, PropagationDiagnostics& diag) const {
    Mat k1, k2, k3, k4, tmp;
    Complex tr_prev = rho.trace();
    for (long s = 0; s < n; ++s) {
      const double t = t0 + static_cast<double>(s) * h;
      rhs(t, rho, k1);
      tmp = rho + (0.5 * h) * k1;
      rhs(t + 0.5 * h, tmp, k2);
      tmp = rho + (0.5 * h) * k2;
      rhs(t + 0.5 * h, tmp, k3);
      tmp = rho + h * k3;
      rhs(t + h, tmp, k4);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const Complex tr = rho.trace();
      diag.max_step_trace_drift = std::max(diag.max_step_trace_drift, std::abs(tr - tr_prev));
      tr_prev = tr;
    }
    diag.substeps += static_cast<std::size_t>(n);
  }

  using Amp = Eigen::Matrix<Complex, D, Eigen::Dynamic>;

  /// Closed systems: advances amplitudes a with rho = a a^+ under
  /// da/dt = -i H(t) a, same substeps.
  void advance_closed(Amp& a, double t0, double h, long n, PropagationDiagnostics& diag) const {
    Amp k1, k2, k3, k4;
    double tr_prev = a.squaredNorm();
    for (long s = 0; s < n; ++s) {
      const double t = t0 + static_cast<double>(s) * h;
      k1 = -kI * (hamiltonian(t) * a);
      k2 = -kI * (hamiltonian(t + 0.5 * h) * (a + (0.5 * h) * k1));
      k3 = -kI * (hamiltonian(t + 0.5 * h) * (a + (0.5 * h) * k2));
      k4 = -kI * (hamiltonian(t + h) * (a + h * k3));
      a += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const double tr = a.squaredNorm();
      diag.max_step_trace_drift = std::max(diag.max_step_trace_drift, std::abs(tr - tr_prev));
      tr_prev = tr;
    }
    diag.substeps += static_cast<std::size_t>(n);
  }

 private:
  Mat hamiltonian(double t) const {
    Mat h = base_;
    for (std::size_t k = 0; k < terms_.size(); ++k) h += (*coeffs_[k])(t) * terms_[k];
    return h;
  }

  // Uses rho = rho^+ so that rho H_eff^+ = (H_eff rho)^+.
  void rhs(double t, const Mat& rho, Mat& out) const {
    const Mat x = hamiltonian(t) * rho;
    out = -kI * x + kI * x.adjoint();
    for (std::size_t a = 0; a < jumps_.size(); ++a) {
      out.noalias() += rates_[a] * (jumps_[a] * rho) * jumps_adj_[a];
    }
    // (c rho c^+)_ij = sum c_ik rho_kl conj(c_jl) over stored entries.
    for (std::size_t a = 0; a < sparse_jumps_.size(); ++a) {
      for (const auto& p : sparse_jumps_[a]) {
        const Complex cp = sparse_rates_[a] * p.value;
        for (const auto& q : sparse_jumps_[a]) {
          out(p.row, q.row) += cp * rho(p.col, q.col) * std::conj(q.value);
        }
      }
    }
  }

  struct Entry {
    Index row;
    Index col;
    Complex value;
  };

  Mat base_;
  std::vector<Mat> terms_;
  std::vector<const std::function<double(double)>*> coeffs_;
  std::vector<Mat> jumps_;
  std::vector<Mat> jumps_adj_;
  std::vector<double> rates_;
  std::vector<std::vector<Entry>> sparse_jumps_;  // at most dim nonzeros
  std::vector<double> sparse_rates_;
};

template <int D>
Trajectory propagate_impl(const TimeDependentHamiltonian& hamiltonian,
                          std::span<const CollapseChannel> channels,
                          const DensityOperator& rho0, std::span<const double> t_grid,
                          const PropagateOptions& options) {
  using Mat = typename Rk4Kernel<D>::Mat;
  const Rk4Kernel<D> kernel(hamiltonian, channels);
  const double rate = std::max(dissipation_scale(channels), hamiltonian.norm_bound());

  Trajectory out;
  out.times.assign(t_grid.begin(), t_grid.end());
  out.states.reserve(t_grid.size());
  out.states.push_back(rho0);

  auto finish = [&](std::size_t i, Mat rho) {
    const Complex tr = rho.trace();
    const double drift = std::abs(tr - 1.0);
    if (drift > options.max_trace_drift) {
      std::ostringstream os;
      os << "trace drift " << drift << " over [" << t_grid[i - 1] << ", " << t_grid[i]
         << "] exceeds " << options.max_trace_drift << "; use a smaller step_factor";
      throw Error(ErrorKind::IntegrationFailure, os.str());
    }
    auto& diag = out.diagnostics;
    diag.max_interval_trace_drift = std::max(diag.max_interval_trace_drift, drift);
    diag.max_hermiticity_residual =
        std::max(diag.max_hermiticity_residual, hermiticity_residual(rho));

    rho = (0.5 * (rho + rho.adjoint())).eval();
    rho /= rho.trace().real();
    if (options.track_positivity) {
      diag.min_eigenvalue = std::min(diag.min_eigenvalue, min_eigenvalue(CMatrix(rho)));
    }
    out.states.push_back(DensityOperator::trusted(CMatrix(rho)));
  };

  if (kernel.closed()) {
    // rho0 = a a^+ with columns sqrt(p_k) psi_k.
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho0.matrix());
    std::vector<Index> keep;
    for (Index k = 0; k < es.eigenvalues().size(); ++k) {
      if (es.eigenvalues()(k) > 0.0) keep.push_back(k);
    }
    typename Rk4Kernel<D>::Amp a(rho0.dim(), static_cast<Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
      a.col(static_cast<Index>(c)) =
          std::sqrt(es.eigenvalues()(keep[c])) * es.eigenvectors().col(keep[c]);
    }
    a /= std::sqrt(a.squaredNorm());
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
      const double dt = t_grid[i] - t_grid[i - 1];
      const long n = substep_count(dt, rate, options.step_factor);
      kernel.advance_closed(a, t_grid[i - 1], dt / static_cast<double>(n), n, out.diagnostics);
      finish(i, Mat(a * a.adjoint()));
      a /= std::sqrt(a.squaredNorm());
    }
    return out;
  }

  Mat rho = Mat(rho0.matrix());
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const double dt = t_grid[i] - t_grid[i - 1];
    const long n = substep_count(dt, rate, options.step_factor);
    kernel.advance(rho, t_grid[i - 1], dt / static_cast<double>(n), n, out.diagnostics);
    finish(i, rho);
    rho = Mat(out.states.back().matrix());
  }
  return out;
}

}  // namespace detail

/// Fixed-step classic RK4 integration of the Lindblad equation, sampled on
/// t_grid. Each output is re-hermitized and trace-renormalized; the drift
/// removed by that correction is reported in the diagnostics. Without active
/// collapse channels the state is carried as rho = a a^+ and a is integrated
/// instead, with the same substep rule.
inline Trajectory propagate(const TimeDependentHamiltonian& hamiltonian,
                            std::span<const CollapseChannel> channels,
                            const DensityOperator& rho0, std::span<const double> t_grid,
                            const PropagateOptions& options = {}) {
  const Index dim = rho0.dim();
  if (hamiltonian.dim() != dim) {
    throw Error(ErrorKind::DimensionMismatch, "hamiltonian dimension " +
                                                  std::to_string(hamiltonian.dim()) +
                                                  " differs from rho dimension " +
                                                  std::to_string(dim));
  }
  for (std::size_t a = 0; a < channels.size(); ++a) {
    if (channels[a].op.rows() != dim) {
      throw Error(ErrorKind::DimensionMismatch,
                  "collapse operator " + std::to_string(a) + " dimension differs from rho");
    }
  }
  if (t_grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty time grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "time grid must be strictly increasing");
    }
  }
  if (!(options.step_factor > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "step_factor must be positive");
  }

  switch (dim) {
    case 2: return detail::propagate_impl<2>(hamiltonian, channels, rho0, t_grid, options);
    case 4: return detail::propagate_impl<4>(hamiltonian, channels, rho0, t_grid, options);
    case 8: return detail::propagate_impl<8>(hamiltonian, channels, rho0, t_grid, options);
    default:
      return detail::propagate_impl<Eigen::Dynamic>(hamiltonian, channels, rho0, t_grid,
                                                    options);
  }
}

}  // namespace onerkit::qdyn
