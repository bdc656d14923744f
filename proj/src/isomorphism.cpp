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

#include "kerrconv/isomorphism.hpp"

namespace kerrconv {

namespace {

constexpr double kImageTol = 1e-12;

void require(const SpacePtr& got, const SpacePtr& want, const char* what) {
  if (!same_space(got, want)) {
    throw SpaceMismatch(std::string(what) + ": expected " + want->describe() + ", got " +
                        got->describe());
  }
}

}  // namespace

std::vector<std::string> channel_labels(const std::string& prefix, int n) {
  std::vector<std::string> labels;
  for (int k = 0; k <= n; ++k) labels.push_back(prefix + std::to_string(k));
  return labels;
}

SpacePtr source_space(int n, const std::string& label) {
  if (n < 0) throw ConfigurationError("source_space: N must be non-negative");
  return FockSpace::build({label}, n);
}

SpacePtr sector_space(int n, const std::string& prefix) {
  if (n < 0) throw ConfigurationError("sector_space: N must be non-negative");
  return FockSpace::build(channel_labels(prefix, n), 1, 1);
}

IsomorphismMap make_isomorphism(SpacePtr source, SpacePtr target) {
  if (source->num_modes() != 1) {
    throw ConfigurationError("make_isomorphism: source must be a single mode");
  }
  const int n = source->cutoffs()[0];
  if (target->num_modes() != static_cast<std::size_t>(n + 1)) {
    throw ConfigurationError("make_isomorphism: target needs N+1 modes");
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(target->dimension()), n + 1);
  for (int k = 0; k <= n; ++k) {
    Occupation occ(static_cast<std::size_t>(n + 1), 0);
    occ[static_cast<std::size_t>(k)] = 1;
    auto row = target->index_of(occ);
    if (!row) throw ConfigurationError("make_isomorphism: target lacks single-photon states");
    m(static_cast<Eigen::Index>(*row), k) = 1.0;
  }
  return {std::move(source), std::move(target), std::move(m)};
}

IsomorphismMap make_isomorphism(int n, const std::string& a_label, const std::string& prefix) {
  return make_isomorphism(source_space(n, a_label), sector_space(n, prefix));
}

StateVector lift_state(const StateVector& psi_a, const IsomorphismMap& map) {
  require(psi_a.space(), map.source, "lift_state");
  return StateVector(map.target, map.matrix * psi_a.amplitudes(),
                     psi_a.is_normalized() ? Normalization::Normalized : Normalization::Unnormalized);
}

DensityOperator lift_state(const DensityOperator& rho_a, const IsomorphismMap& map) {
  require(rho_a.space(), map.source, "lift_state");
  return DensityOperator(map.target, map.matrix * rho_a.matrix() * map.matrix.adjoint(),
                         rho_a.is_normalized() ? Normalization::Normalized : Normalization::Unnormalized);
}

StateVector lower_state(const StateVector& psi_b, const IsomorphismMap& map) {
  require(psi_b.space(), map.target, "lower_state");
  Eigen::VectorXcd v = map.matrix.adjoint() * psi_b.amplitudes();
  if ((psi_b.amplitudes() - map.matrix * v).norm() > kImageTol) {
    throw SpaceMismatch("lower_state: state has weight outside the single-photon sector");
  }
  return StateVector(map.source, std::move(v),
                     psi_b.is_normalized() ? Normalization::Normalized : Normalization::Unnormalized);
}

DensityOperator lower_state(const DensityOperator& rho_b, const IsomorphismMap& map) {
  require(rho_b.space(), map.target, "lower_state");
  Eigen::MatrixXcd m = map.matrix.adjoint() * rho_b.matrix() * map.matrix;
  if (std::abs(m.trace().real() - rho_b.trace()) > kImageTol) {
    throw SpaceMismatch("lower_state: operator has weight outside the single-photon sector");
  }
  return DensityOperator(map.source, std::move(m),
                         rho_b.is_normalized() ? Normalization::Normalized : Normalization::Unnormalized);
}

Eigen::MatrixXcd lift_operator(const Eigen::MatrixXcd& op_a, const IsomorphismMap& map) {
  if (op_a.rows() != map.matrix.cols() || op_a.cols() != map.matrix.cols()) {
    throw SpaceMismatch("lift_operator: operator size does not match the source space");
  }
  return map.matrix * op_a * map.matrix.adjoint();
}

Eigen::MatrixXcd lower_operator(const Eigen::MatrixXcd& op_b, const IsomorphismMap& map) {
  if (op_b.rows() != map.matrix.rows() || op_b.cols() != map.matrix.rows()) {
    throw SpaceMismatch("lower_operator: operator size does not match the target space");
  }
  return map.matrix.adjoint() * op_b * map.matrix;
}

}  // namespace kerrconv
