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

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "kerrconv/fock_space.hpp"

namespace kerrconv {

enum class Normalization { Normalized, Unnormalized };

/// Complex amplitude vector over a FockSpace basis.
class StateVector {
 public:
  /// Throws ConfigurationError if `norm` is Normalized and the squared norm
  /// differs from one by more than kNormTol.
  StateVector(SpacePtr space, Eigen::VectorXcd amplitudes,
              Normalization norm = Normalization::Normalized);

  static StateVector basis(SpacePtr space, const Occupation& occ);
  static StateVector basis(SpacePtr space, std::size_t index);
  /// Rescales `amplitudes` to unit norm; throws on a zero vector.
  static StateVector normalized_from(SpacePtr space, Eigen::VectorXcd amplitudes);

  const SpacePtr& space() const { return space_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  bool is_normalized() const { return normalized_; }
  double squared_norm() const { return amplitudes_.squaredNorm(); }
  cd amplitude(const Occupation& occ) const;

  StateVector normalized() const;

 private:
  SpacePtr space_;
  Eigen::VectorXcd amplitudes_;
  bool normalized_;
};

/// Hermitian positive semidefinite matrix over a FockSpace basis.
class DensityOperator {
 public:
  /// Validates Hermiticity (kNormTol), positivity (kPsdTol) and, when
  /// Normalized, unit trace. The stored matrix is the Hermitian part.
  DensityOperator(SpacePtr space, Eigen::MatrixXcd matrix,
                  Normalization norm = Normalization::Normalized);

  static DensityOperator pure(const StateVector& psi);
  static DensityOperator maximally_mixed(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  bool is_normalized() const { return normalized_; }
  double trace() const { return matrix_.trace().real(); }
  double purity() const;

  DensityOperator normalized() const;

 private:
  SpacePtr space_;
  Eigen::MatrixXcd matrix_;
  bool normalized_;
};

/// Linear map between two Fock spaces, e.g. the effective operator Y(omega)
/// of a post-selected measurement outcome.
struct LinearMap {
  SpacePtr source;
  SpacePtr target;
  Eigen::MatrixXcd matrix;  // target.dimension() x source.dimension()

  StateVector apply(const StateVector& psi) const;
  /// Unnormalized Y rho Y^dagger.
  DensityOperator apply(const DensityOperator& rho) const;
  LinearMap adjoint() const;
  LinearMap then(const LinearMap& next) const;  // next * this
  Eigen::MatrixXcd gram() const { return matrix.adjoint() * matrix; }
};

/// Product state; mode labels must be disjoint.
StateVector tensor(const StateVector& first, const StateVector& second);
DensityOperator tensor(const DensityOperator& first, const DensityOperator& second);

/// Reduced operator on `keep` (ordered as in rho's space).
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& keep);
/// Reduced operator of a pure state, without forming the full projector.
DensityOperator partial_trace(const StateVector& psi, const std::vector<std::string>& keep);

/// Contracts the modes of `bra` (a state on a subset of psi's modes) with
/// <bra|, leaving an unnormalized state on the remaining modes.
StateVector project(const StateVector& psi, const StateVector& bra);

/// Same contraction applied to the output side of a linear map.
LinearMap project_output(const LinearMap& map, const StateVector& bra);

cd inner(const StateVector& bra, const StateVector& ket);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);
/// <psi|rho|psi> for a normalized pure reference.
double fidelity(const StateVector& psi, const DensityOperator& rho);
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// Action of an operator on a subset of modes: maps a local occupation to the
/// local output occupations with their amplitudes.
using LocalAction = std::function<std::vector<std::pair<Occupation, cd>>(const Occupation&)>;

/// Matrix of `action` on `space`, identity on all other modes. Output
/// occupations outside the space are dropped, so the result is the
/// compression of the exact operator onto the space.
SparseOperator local_operator(const FockSpace& space, const std::vector<std::string>& modes,
                              const LocalAction& action);

/// Diagonal operator with entries f(occupation).
SparseOperator diagonal_operator(const FockSpace& space,
                                 const std::function<cd(const Occupation&)>& entry);

}  // namespace kerrconv
