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

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "kerrconv/engineering.hpp"
#include "kerrconv/random.hpp"

namespace kerrconv::testing {

inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline Eigen::MatrixXcd dense(const SparseOperator& s) { return Eigen::MatrixXcd(s); }

/// Random transmittances in [0,1] with the largest equal to one.
inline std::vector<double> random_transmittances(int n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> t(static_cast<std::size_t>(n + 1));
  for (auto& x : t) x = u(rng);
  double top = 0.0;
  for (double x : t) top = std::max(top, x);
  for (auto& x : t) x /= top;
  return t;
}

inline EngineeringConfig random_engineering(int n, Rng& rng) {
  EngineeringConfig cfg = EngineeringConfig::identity(n);
  cfg.U = random_unitary(n + 1, rng);
  cfg.U_R = random_unitary(n + 1, rng);
  cfg.Tk = random_transmittances(n, rng);
  cfg.phi = std::uniform_real_distribution<double>(0.0, 2.0 * kPi)(rng);
  return cfg;
}

/// Pure inputs on even draws, mixed inputs of random rank on odd ones.
inline DensityOperator random_input(const SpacePtr& space, Rng& rng, int draw) {
  if (draw % 2 == 0) return DensityOperator::pure(random_state(space, rng));
  return random_density(space, rng);
}

/// Hermitian trace distance 1/2 ||a - b||_1 computed from eigenvalues.
inline double trace_norm_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const Eigen::MatrixXcd d = a - b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace kerrconv::testing
