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
#include <vector>

#include "kerrconv/state.hpp"

namespace kerrconv {

/// Labels prefix0..prefixN.
std::vector<std::string> channel_labels(const std::string& prefix, int n);

/// Single mode with cutoff N.
SpacePtr source_space(int n, const std::string& label = "a");
/// N+1 modes prefix0..prefixN restricted to one photon in total.
SpacePtr sector_space(int n, const std::string& prefix = "b");

/// Embedding |k> -> |phi_k> of a single-mode space with cutoff N into a space
/// over N+1 modes. The target may be the single-photon sector itself or any
/// larger space containing it (e.g. cutoff 1 per mode without a sector).
struct IsomorphismMap {
  SpacePtr source;
  SpacePtr target;
  Eigen::MatrixXcd matrix;  // target.dimension() x (N+1), an isometry

  int order() const { return static_cast<int>(matrix.cols()) - 1; }
};

IsomorphismMap make_isomorphism(SpacePtr source, SpacePtr target);
/// Canonical map a -> sector_space(N, prefix).
IsomorphismMap make_isomorphism(int n, const std::string& a_label = "a",
                                const std::string& prefix = "b");

StateVector lift_state(const StateVector& psi_a, const IsomorphismMap& map);
DensityOperator lift_state(const DensityOperator& rho_a, const IsomorphismMap& map);
/// Throws SpaceMismatch if the state has weight outside the image of the map.
StateVector lower_state(const StateVector& psi_b, const IsomorphismMap& map);
DensityOperator lower_state(const DensityOperator& rho_b, const IsomorphismMap& map);

/// P O P^dagger.
Eigen::MatrixXcd lift_operator(const Eigen::MatrixXcd& op_a, const IsomorphismMap& map);
/// P^dagger O P.
Eigen::MatrixXcd lower_operator(const Eigen::MatrixXcd& op_b, const IsomorphismMap& map);

}  // namespace kerrconv
