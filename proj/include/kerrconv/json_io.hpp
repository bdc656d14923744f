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

#include <json.hpp>

#include "kerrconv/mesh.hpp"
#include "kerrconv/outcome.hpp"

namespace kerrconv {

/// Ordered so that dumps keep the field order of their construction.
using Json = nlohmann::ordered_json;

/// Complex numbers serialize as [re, im]; plain numbers are accepted on input.
Json to_json(cd z);
cd complex_from_json(const Json& j);

Json to_json(const Eigen::VectorXcd& v);
Eigen::VectorXcd vector_from_json(const Json& j);
/// Row-major array of rows.
Json to_json(const Eigen::MatrixXcd& m);
/// Throws ConfigurationError on ragged or non-numeric input.
Eigen::MatrixXcd matrix_from_json(const Json& j);

/// {"modes", "cutoffs", "sector"}; sector is null unless one constraint
/// covers every mode.
Json to_json(const FockSpace& space);
/// Space fields plus "amplitudes" in basis order.
Json to_json(const StateVector& psi);
/// Space fields plus "matrix".
Json to_json(const DensityOperator& rho);
Json to_json(const LinearMap& map);
Json to_json(const Mesh& mesh);
Json to_json(const OutcomeRecord& rec);
Json to_json(const UnconditionalResult& res);

}  // namespace kerrconv
