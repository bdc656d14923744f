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

#include "kerrconv/mesh.hpp"

#include <cmath>

namespace kerrconv {

namespace {

Eigen::MatrixXcd embed(const MeshSplitter& s, std::size_t n) {
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const auto i = static_cast<Eigen::Index>(s.first);
  const auto j = static_cast<Eigen::Index>(s.second);
  b(i, i) = s.T;
  b(i, j) = s.R;
  b(j, i) = -std::conj(s.R);
  b(j, j) = std::conj(s.T);
  return b;
}

}  // namespace

Mesh synthesize_mesh(const Eigen::MatrixXcd& u) {
  require_unitary(u, "synthesize_mesh");
  const auto n = u.rows();
  Mesh mesh;
  mesh.size = static_cast<std::size_t>(n);
  Eigen::MatrixXcd w = u;
  // Null row r from the left by mixing neighbouring columns: w <- w B^dagger.
  for (Eigen::Index r = n - 1; r >= 1; --r) {
    for (Eigen::Index c = 0; c < r; ++c) {
      const cd uc = w(r, c);
      const cd un = w(r, c + 1);
      if (uc == cd{0.0}) continue;
      const double nu = std::hypot(std::abs(uc), std::abs(un));
      MeshSplitter s{static_cast<std::size_t>(c), static_cast<std::size_t>(c + 1),
                     std::conj(un / nu), std::conj(-uc / nu)};
      const Eigen::VectorXcd col_c = w.col(c);
      const Eigen::VectorXcd col_n = w.col(c + 1);
      // (w B^dagger)(:, c) = T* w_c + R* w_n, (:, c+1) = -R w_c + T w_n.
      w.col(c) = std::conj(s.T) * col_c + std::conj(s.R) * col_n;
      w.col(c + 1) = -s.R * col_c + s.T * col_n;
      w(r, c) = 0.0;
      mesh.splitters.push_back(s);
    }
  }
  mesh.phases.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) mesh.phases(k) = std::arg(w(k, k));
  return mesh;
}

Eigen::MatrixXcd compose_mesh(const Mesh& mesh) {
  const auto n = static_cast<Eigen::Index>(mesh.size);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  for (const auto& s : mesh.splitters) u = embed(s, mesh.size) * u;
  for (Eigen::Index k = 0; k < n; ++k) u.row(k) *= std::polar(1.0, mesh.phases(k));
  return u;
}

std::vector<CircuitElement> mesh_elements(const Mesh& mesh, const std::vector<std::string>& modes) {
  if (modes.size() != mesh.size) throw ConfigurationError("mesh_elements: wrong number of modes");
  std::vector<CircuitElement> out;
  for (const auto& s : mesh.splitters) {
    out.emplace_back(BeamSplitterElement{modes[s.first], modes[s.second], s.T, s.R});
  }
  for (std::size_t k = 0; k < mesh.size; ++k) {
    if (mesh.phases(static_cast<Eigen::Index>(k)) != 0.0) {
      out.emplace_back(PhaseShifterElement{modes[k], mesh.phases(static_cast<Eigen::Index>(k))});
    }
  }
  return out;
}

}  // namespace kerrconv
