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

#include <utility>

#include "onerkit/qdyn/density.hpp"

namespace onerkit::qdyn {

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

enum class Subsystem { A, B };

/// Reduced matrix of an operator on A (x) B, A being the outer (slow) index.
inline CMatrix partial_trace(const CMatrix& m, Subsystem keep, Index dim_a, Index dim_b) {
  if (dim_a <= 0 || dim_b <= 0 || m.rows() != dim_a * dim_b || m.cols() != m.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "partial trace dims (" + std::to_string(dim_a) + ", " + std::to_string(dim_b) +
                    ") inconsistent with matrix dimension " + std::to_string(m.rows()));
  }
  if (keep == Subsystem::A) {
    CMatrix out = CMatrix::Zero(dim_a, dim_a);
    for (Index i = 0; i < dim_a; ++i)
      for (Index j = 0; j < dim_a; ++j)
        out(i, j) = m.block(i * dim_b, j * dim_b, dim_b, dim_b).trace();
    return out;
  }
  CMatrix out = CMatrix::Zero(dim_b, dim_b);
  for (Index i = 0; i < dim_a; ++i) out += m.block(i * dim_b, i * dim_b, dim_b, dim_b);
  return out;
}

inline DensityOperator partial_trace(const DensityOperator& rho, Subsystem keep, Index dim_a,
                                     Index dim_b) {
  CMatrix reduced = partial_trace(rho.matrix(), keep, dim_a, dim_b);
  // Exact for valid input; symmetrize away the last bits of roundoff.
  reduced = 0.5 * (reduced + reduced.adjoint()).eval();
  return DensityOperator(std::move(reduced));
}

inline DensityOperator kron(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(kron(a.matrix(), b.matrix()));
}

}  // namespace onerkit::qdyn
