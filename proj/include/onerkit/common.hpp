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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace onerkit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  IntegrationFailure,
  NoSteadyState,
  UnsupportedTransition,
  ForbiddenTransition,
  NoQuadrupole,
  UndefinedAsymmetry,
  Ingestion,
  Config,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::IntegrationFailure: return "integration failure";
    case ErrorKind::NoSteadyState: return "no steady state";
    case ErrorKind::UnsupportedTransition: return "unsupported transition";
    case ErrorKind::ForbiddenTransition: return "forbidden transition";
    case ErrorKind::NoQuadrupole: return "no quadrupole moment";
    case ErrorKind::UndefinedAsymmetry: return "undefined asymmetry";
    case ErrorKind::Ingestion: return "data ingestion";
    case ErrorKind::Config: return "configuration";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind; the
/// CLI maps kinds onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Largest absolute matrix element.
template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <class Derived>
double hermiticity_residual(const Eigen::MatrixBase<Derived>& m) {
  return max_abs(m - m.adjoint());
}

}  // namespace onerkit
