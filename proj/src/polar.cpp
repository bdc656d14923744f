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

#include "kerrconv/polar.hpp"

#include <cmath>

namespace kerrconv {

namespace {

// Singular values below this fraction of the largest one count as zero.
constexpr double kRankTol = 1e-12;

}  // namespace

Eigen::MatrixXcd canonical_subspace_basis(const Eigen::MatrixXcd& basis) {
  const auto n = basis.rows();
  const auto k = basis.cols();
  Eigen::MatrixXcd out(n, k);
  if (k == 0) return out;
  // Projector onto the subspace; `basis` is assumed orthonormal.
  const Eigen::MatrixXcd proj = basis * basis.adjoint();
  Eigen::Index found = 0;
  for (Eigen::Index i = 0; i < n && found < k; ++i) {
    Eigen::VectorXcd v = proj.col(i);
    for (Eigen::Index j = 0; j < found; ++j) v -= out.col(j).dot(v) * out.col(j);
    for (Eigen::Index j = 0; j < found; ++j) v -= out.col(j).dot(v) * out.col(j);
    const double len = v.norm();
    if (len < 1e-8) continue;
    out.col(found++) = v / len;
  }
  if (found != k) throw ConfigurationError("canonical_subspace_basis: rank deficit");
  return out;
}

Eigen::MatrixXcd PolarFactors::normalized_representative() const {
  return (unitary / det_phase) * (positive / trace_norm);
}

PolarFactors polar_decompose(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw ConfigurationError("polar_decompose: expected a non-empty square matrix");
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (sigma(0) == 0.0) throw ConfigurationError("polar_decompose: zero operator");

  const auto n = a.rows();
  Eigen::Index rank = 0;
  while (rank < n && sigma(rank) > kRankTol * sigma(0)) ++rank;

  const Eigen::MatrixXcd& left = svd.matrixU();
  const Eigen::MatrixXcd& right = svd.matrixV();
  PolarFactors f;
  f.unitary = left.leftCols(rank) * right.leftCols(rank).adjoint();
  if (rank < n) {
    const Eigen::MatrixXcd coker = canonical_subspace_basis(left.rightCols(n - rank));
    const Eigen::MatrixXcd ker = canonical_subspace_basis(right.rightCols(n - rank));
    f.unitary += coker * ker.adjoint();
  }
  f.positive = right * sigma.asDiagonal() * right.adjoint();
  f.positive = 0.5 * (f.positive + f.positive.adjoint()).eval();
  f.trace_norm = sigma.sum();
  const cd det = f.unitary.determinant();
  f.det_phase = std::polar(1.0, std::arg(det) / static_cast<double>(n));
  return f;
}

}  // namespace kerrconv
