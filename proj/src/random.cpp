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

#include "kerrconv/random.hpp"

namespace kerrconv {

Eigen::MatrixXcd random_ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cd(re, im);
    }
  return g;
}

Eigen::MatrixXcd random_unitary(int n, Rng& rng) {
  const Eigen::MatrixXcd g = random_ginibre(n, n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

Eigen::MatrixXcd random_hermitian(int n, Rng& rng) {
  const Eigen::MatrixXcd g = random_ginibre(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

StateVector random_state(SpacePtr space, Rng& rng) {
  const auto dim = static_cast<int>(space->dimension());
  Eigen::VectorXcd v = random_ginibre(dim, 1, rng).col(0);
  return StateVector::normalized_from(std::move(space), std::move(v));
}

DensityOperator random_density(SpacePtr space, Rng& rng, int rank) {
  const auto dim = static_cast<int>(space->dimension());
  if (rank <= 0 || rank > dim) rank = dim;
  const Eigen::MatrixXcd g = random_ginibre(dim, rank, rng);
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(std::move(space), std::move(rho));
}

}  // namespace kerrconv
