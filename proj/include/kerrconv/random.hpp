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

#include <cstdint>
#include <random>

#include "kerrconv/state.hpp"

namespace kerrconv {

using Rng = std::mt19937_64;

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
Eigen::MatrixXcd random_unitary(int n, Rng& rng);
/// Entries with independent standard normal real and imaginary parts.
Eigen::MatrixXcd random_ginibre(int rows, int cols, Rng& rng);
Eigen::MatrixXcd random_hermitian(int n, Rng& rng);
StateVector random_state(SpacePtr space, Rng& rng);
/// Full-rank (rank = dimension) or reduced-rank Ginibre density operator.
DensityOperator random_density(SpacePtr space, Rng& rng, int rank = 0);

}  // namespace kerrconv
