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
#include <optional>
#include <stdexcept>
#include <string>

#include "kerrconv/engineering.hpp"
#include "kerrconv/json_io.hpp"
#include "kerrconv/random.hpp"

namespace kerrconv::cli {

enum class Protocol { Convert, Engineer, Measure, Reconstruct, Telemanip, IdentityCheck };

std::string to_string(Protocol p);

/// Malformed or schema-violating descriptor. `line` is 1-based, 0 when the
/// descriptor did not come from text.
class DescriptorError : public std::runtime_error {
 public:
  DescriptorError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// Validated experiment descriptor. `fields` holds every parameter of the
/// flat descriptor object, including "protocol".
struct ExperimentDescriptor {
  Protocol protocol = Protocol::Convert;
  Json fields;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_path;
  std::optional<std::string> output_format;

  /// True when the run draws random numbers (shots, sampling, random inputs).
  bool needs_seed() const;
};

/// Parses and validates JSON text against the protocol schemas.
ExperimentDescriptor parse_descriptor(const std::string& text);
/// Validates an already parsed object (presets).
ExperimentDescriptor make_descriptor(const Json& object);

// Builders shared by the runner. `rng` may be null when the descriptor does
// not request random inputs.

/// Input state spec: {"fock": n}, {"phase": phi}, {"amplitudes": [...]},
/// {"matrix": [[...]]}, {"fock_mixture": [p_0, ...]} or {"random": "pure"|"mixed"}.
DensityOperator build_state(const Json& spec, const SpacePtr& space, Rng* rng);
/// Matrix spec: a JSON matrix or one of "identity", "dft", "random" (Haar unitary).
Eigen::MatrixXcd build_matrix(const Json& spec, int dim, Rng* rng);
/// Engineering setup from either "A" (decomposed into arrays and splitters)
/// or "U", "Tk", "UR"; plus "phi" and "preparation".
EngineeringConfig build_engineering(const Json& fields, int n, Rng* rng, cd* realization_factor = nullptr);

}  // namespace kerrconv::cli
