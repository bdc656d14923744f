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

#include "kerrconv/optics.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace kerrconv {

void BeamSplitterElement::validate() const {
  if (std::abs(std::norm(T) + std::norm(R) - 1.0) > kNormTol) {
    throw ConfigurationError("beam splitter: |T|^2 + |R|^2 must equal 1");
  }
  if (mode_b == mode_c) throw ConfigurationError("beam splitter: modes must differ");
}

Eigen::Matrix2cd BeamSplitterElement::matrix() const {
  Eigen::Matrix2cd m;
  m << T, R, -std::conj(R), std::conj(T);
  return m;
}

double CrossKerrElement::wrapped_kappa() const {
  double k = std::fmod(kappa, 2.0 * kPi);
  if (k < 0.0) k += 2.0 * kPi;
  return k;
}

void MultiportUnitary::validate() const {
  const auto n = static_cast<Eigen::Index>(modes.size());
  if (matrix.rows() != n || matrix.cols() != n) {
    throw ConfigurationError("multiport: matrix size must equal the number of modes");
  }
  require_unitary(matrix, "multiport");
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const Eigen::MatrixXcd d = u * u.adjoint() - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return d.size() == 0 ? 0.0 : d.cwiseAbs().maxCoeff();
}

void require_unitary(const Eigen::MatrixXcd& u, const std::string& what, double tol) {
  if (u.rows() != u.cols()) throw NotUnitary(what + ": matrix is not square");
  if (unitarity_defect(u) > tol) throw NotUnitary(what + ": matrix is not unitary");
}

Eigen::MatrixXcd dft_matrix(int n) {
  if (n <= 0) throw ConfigurationError("dft_matrix: size must be positive");
  Eigen::MatrixXcd w(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      // Reduce k*l first so large sizes keep full phase accuracy.
      const int kl = (k * l) % n;
      w(k, l) = norm * std::polar(1.0, -2.0 * kPi * kl / n);
    }
  return w;
}

std::vector<std::pair<Occupation, cd>> multiport_action(const Eigen::MatrixXcd& s, const Occupation& in) {
  const std::size_t m = in.size();
  std::map<Occupation, cd> terms{{Occupation(m, 0), cd{1.0}}};
  double norm = 1.0;
  for (std::size_t l = 0; l < m; ++l) {
    for (int rep = 0; rep < in[l]; ++rep) {
      std::map<Occupation, cd> next;
      for (const auto& [occ, amp] : terms) {
        for (std::size_t k = 0; k < m; ++k) {
          const cd c = s(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
          if (c == cd{0.0}) continue;
          Occupation out = occ;
          out[k] += 1;
          next[out] += amp * c * std::sqrt(static_cast<double>(out[k]));
        }
      }
      terms = std::move(next);
      norm *= std::sqrt(static_cast<double>(rep + 1));
    }
  }
  std::vector<std::pair<Occupation, cd>> result;
  result.reserve(terms.size());
  for (const auto& [occ, amp] : terms) result.emplace_back(occ, amp / norm);
  return result;
}

namespace {

struct ElementVisitor {
  const FockSpace& space;

  SparseOperator operator()(const BeamSplitterElement& bs) const {
    bs.validate();
    const Eigen::MatrixXcd s = bs.matrix();
    return local_operator(space, {bs.mode_b, bs.mode_c},
                          [&](const Occupation& occ) { return multiport_action(s, occ); });
  }

  SparseOperator operator()(const CrossKerrElement& k) const {
    const std::size_t ib = space.mode_index(k.mode_b);
    const std::size_t ia = space.mode_index(k.mode_a);
    if (ib == ia) throw ConfigurationError("cross-Kerr: modes must differ");
    const double kappa = k.wrapped_kappa();
    return diagonal_operator(space, [&](const Occupation& occ) {
      return std::polar(1.0, kappa * occ[ib] * occ[ia]);
    });
  }

  SparseOperator operator()(const PhaseShifterElement& p) const {
    const std::size_t i = space.mode_index(p.mode);
    return diagonal_operator(space, [&](const Occupation& occ) { return std::polar(1.0, p.phase * occ[i]); });
  }

  SparseOperator operator()(const MultiportUnitary& u) const { return multiport_matrix(u, space); }
};

}  // namespace

SparseOperator element_matrix(const CircuitElement& elem, const FockSpace& space) {
  return std::visit(ElementVisitor{space}, elem);
}

SparseOperator multiport_matrix(const MultiportUnitary& u, const FockSpace& space) {
  u.validate();
  return local_operator(space, u.modes,
                        [&](const Occupation& occ) { return multiport_action(u.matrix, occ); });
}

SparseOperator circuit_matrix(const std::vector<CircuitElement>& circuit, const FockSpace& space) {
  const auto dim = static_cast<Eigen::Index>(space.dimension());
  SparseOperator total(dim, dim);
  total.setIdentity();
  for (const auto& elem : circuit) total = (element_matrix(elem, space) * total).pruned();
  return total;
}

Eigen::MatrixXcd vacuum_projected_splitter(cd T, const FockSpace& single_mode) {
  if (single_mode.num_modes() != 1) {
    throw ConfigurationError("vacuum_projected_splitter: expected a single-mode space");
  }
  if (std::abs(T) > 1.0 + kNormTol) {
    throw ConfigurationError("vacuum_projected_splitter: |T| must not exceed 1");
  }
  const auto dim = static_cast<Eigen::Index>(single_mode.dimension());
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    d(i, i) = std::pow(T, single_mode.occupation(static_cast<std::size_t>(i))[0]);
  }
  return d;
}

}  // namespace kerrconv
