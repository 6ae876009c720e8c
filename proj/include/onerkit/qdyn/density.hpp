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

#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>

#include "onerkit/common.hpp"

namespace onerkit::qdyn {

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPositivityTol = 1e-10;

inline double min_eigenvalue(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

/// Hermitian, unit-trace, positive semidefinite matrix on a finite Hilbert
/// space. Immutable once constructed.
class DensityOperator {
 public:
  explicit DensityOperator(CMatrix matrix) : matrix_(std::move(matrix)) { validate(); }

  static DensityOperator basis_state(Index dim, Index k) {
    if (k < 0 || k >= dim) {
      throw Error(ErrorKind::InvalidArgument, "basis index out of range");
    }
    CMatrix m = CMatrix::Zero(dim, dim);
    m(k, k) = 1.0;
    return DensityOperator(std::move(m));
  }

  static DensityOperator pure(const CVector& psi) {
    const double norm = psi.norm();
    if (norm == 0.0) {
      throw Error(ErrorKind::InvalidArgument, "zero state vector");
    }
    const CVector u = psi / norm;
    return DensityOperator(u * u.adjoint());
  }

  static DensityOperator maximally_mixed(Index dim) {
    return DensityOperator(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  /// Skips validation. For propagator output whose invariants are tracked
  /// through diagnostics instead.
  static DensityOperator trusted(CMatrix matrix) {
    DensityOperator rho;
    rho.matrix_ = std::move(matrix);
    return rho;
  }

  Index dim() const { return matrix_.rows(); }
  const CMatrix& matrix() const { return matrix_; }
  double population(Index k) const { return matrix_(k, k).real(); }
  Complex operator()(Index i, Index j) const { return matrix_(i, j); }

  Eigen::VectorXd populations() const { return matrix_.diagonal().real(); }

  Complex expectation(const CMatrix& observable) const {
    return (matrix_ * observable).trace();
  }

 private:
  DensityOperator() = default;

  void validate() const {
    if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
      throw Error(ErrorKind::InvalidArgument, "density matrix must be square and non-empty");
    }
    const double herm = hermiticity_residual(matrix_);
    if (herm > kHermiticityTol) {
      std::ostringstream os;
      os << "density matrix not hermitian (residual " << herm << ")";
      throw Error(ErrorKind::InvalidArgument, os.str());
    }
    const Complex tr = matrix_.trace();
    if (std::abs(tr - 1.0) > kTraceTol) {
      std::ostringstream os;
      os << "density matrix trace " << tr.real() << " differs from 1";
      throw Error(ErrorKind::InvalidArgument, os.str());
    }
    const double lmin = min_eigenvalue(matrix_);
    if (lmin < -kPositivityTol) {
      std::ostringstream os;
      os << "density matrix has negative eigenvalue " << lmin;
      throw Error(ErrorKind::InvalidArgument, os.str());
    }
  }

  CMatrix matrix_;
};

/// Dissipator term k * L[c] of a master equation. Rate in rad/s.
struct CollapseChannel {
  CMatrix op;
  double rate = 0.0;

  CollapseChannel(CMatrix c, double k) : op(std::move(c)), rate(k) {
    if (!(rate >= 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "collapse rate must be nonnegative");
    }
    if (op.rows() != op.cols()) {
      throw Error(ErrorKind::InvalidArgument, "collapse operator must be square");
    }
  }
};

}  // namespace onerkit::qdyn
