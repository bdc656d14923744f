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

#include <string>
#include <variant>
#include <vector>

#include "kerrconv/state.hpp"

namespace kerrconv {

/// Two-mode splitter. The single-photon matrix in (mode_b, mode_c) order is
/// [[T, R], [-conj(R), conj(T)]]: the b annihilator maps to T b + R c.
struct BeamSplitterElement {
  std::string mode_b;
  std::string mode_c;
  cd T{1.0};
  cd R{0.0};

  /// Throws ConfigurationError unless |T|^2 + |R|^2 = 1 within kNormTol.
  void validate() const;
  Eigen::Matrix2cd matrix() const;
};

/// exp(i kappa n_b n_a).
struct CrossKerrElement {
  std::string mode_b;
  std::string mode_a;
  double kappa = 0.0;

  /// kappa reduced to [0, 2 pi).
  double wrapped_kappa() const;
};

/// exp(i phase n).
struct PhaseShifterElement {
  std::string mode;
  double phase = 0.0;
};

/// Linear-optical array acting on the creation operators of `modes` by
/// b_l^dagger -> sum_k matrix(k, l) b_k^dagger. On the single-photon sector
/// its matrix is `matrix` itself.
struct MultiportUnitary {
  std::vector<std::string> modes;
  Eigen::MatrixXcd matrix;

  /// Throws ConfigurationError on a size mismatch and NotUnitary when
  /// matrix matrix^dagger differs from the identity by more than kUnitaryTol.
  void validate() const;
};

using CircuitElement =
    std::variant<BeamSplitterElement, CrossKerrElement, PhaseShifterElement, MultiportUnitary>;

/// Matrix of `elem` on `space`. Elements conserve photon number on their
/// modes, so the matrix is unitary whenever the space is closed under the
/// element (sector constraints or large enough cutoffs); otherwise it is the
/// compression of the element onto the space.
SparseOperator element_matrix(const CircuitElement& elem, const FockSpace& space);

/// Output occupations of prod_l (sum_k s(k,l) b_k^dagger)^{n_l} / sqrt(n_l!) |0>
/// for the input occupation n.
std::vector<std::pair<Occupation, cd>> multiport_action(const Eigen::MatrixXcd& s, const Occupation& in);

/// Induced multi-photon action of a multiport on `space`.
SparseOperator multiport_matrix(const MultiportUnitary& u, const FockSpace& space);

/// Product of elements applied in order (first element acts first).
SparseOperator circuit_matrix(const std::vector<CircuitElement>& circuit, const FockSpace& space);

/// <0_c| U_splitter |0_c> on a single mode: diag(T^n).
Eigen::MatrixXcd vacuum_projected_splitter(cd T, const FockSpace& single_mode);

/// Throws NotUnitary if ||U U^dagger - I||_max > tol.
void require_unitary(const Eigen::MatrixXcd& u, const std::string& what, double tol = kUnitaryTol);
double unitarity_defect(const Eigen::MatrixXcd& u);

/// W_kl = n^{-1/2} exp(-2 pi i k l / n).
Eigen::MatrixXcd dft_matrix(int n);

}  // namespace kerrconv
