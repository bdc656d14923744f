// Copyright 2026 The kerrconv Authors
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

#include "kerrconv/types.hpp"

namespace kerrconv {

/// A = unitary * positive with positive = (A^dagger A)^{1/2}.
struct PolarFactors {
  Eigen::MatrixXcd unitary;
  Eigen::MatrixXcd positive;
  double trace_norm = 0.0;  // Tr positive = sum of singular values
  cd det_phase{1.0};        // principal (det unitary)^{1/n}

  /// (unitary / det_phase) * (positive / trace_norm): unit determinant
  /// unitary part and unit trace positive part.
  Eigen::MatrixXcd normalized_representative() const;
};

/// Throws ConfigurationError for a zero or non-square matrix. For singular A
/// the unitary factor maps a canonical basis of ker A onto a canonical basis
/// of ker A^dagger, so it is the identity on a kernel shared by both.
PolarFactors polar_decompose(const Eigen::MatrixXcd& a);

/// Orthonormal basis of span(columns of `basis`), obtained by Gram-Schmidt
/// over the projections of the standard basis vectors in index order. The
/// result depends only on the subspace, not on the spanning set.
Eigen::MatrixXcd canonical_subspace_basis(const Eigen::MatrixXcd& basis);

}  // namespace kerrconv
