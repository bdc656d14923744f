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

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace kerrconv {

using cd = std::complex<double>;
using SparseOperator = Eigen::SparseMatrix<cd>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cd kI{0.0, 1.0};

/// Tolerance on normalization and Hermiticity of states.
inline constexpr double kNormTol = 1e-12;
/// Smallest eigenvalue accepted for a density operator.
inline constexpr double kPsdTol = -1e-10;
/// Tolerance used when checking that an input matrix is unitary.
inline constexpr double kUnitaryTol = 1e-10;

// Error hierarchy. Everything thrown by the library derives from Error so
// callers can catch a single type at the boundary.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction parameters (cutoffs, sectors, transmittances...).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Operands live on incompatible Fock spaces.
class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

/// A mode label was not found in a space.
class UnknownMode : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be unitary is not.
class NotUnitary : public Error {
 public:
  using Error::Error;
};

}  // namespace kerrconv
