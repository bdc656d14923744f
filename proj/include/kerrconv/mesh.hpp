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

#include <cstddef>
#include <string>
#include <vector>

#include "kerrconv/optics.hpp"

namespace kerrconv {

/// Splitter acting on array positions (first, second) with the convention
/// of BeamSplitterElement.
struct MeshSplitter {
  std::size_t first = 0;
  std::size_t second = 1;
  cd T{1.0};
  cd R{0.0};
};

/// Triangular array: splitters applied in order, followed by one phase per
/// output port. Recomposes to diag(exp(i phases)) * B_K ... B_1.
struct Mesh {
  std::size_t size = 0;
  std::vector<MeshSplitter> splitters;
  Eigen::VectorXd phases;
};

/// Throws NotUnitary for a non-unitary input.
Mesh synthesize_mesh(const Eigen::MatrixXcd& u);
Eigen::MatrixXcd compose_mesh(const Mesh& mesh);
/// Circuit elements realizing the mesh on the given port labels.
std::vector<CircuitElement> mesh_elements(const Mesh& mesh, const std::vector<std::string>& modes);

}  // namespace kerrconv
