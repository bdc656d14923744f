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

#include <optional>
#include <string>
#include <vector>

#include "kerrconv/state.hpp"

namespace kerrconv {

/// Structured measurement outcome. Unset fields were not part of the
/// outcome (e.g. no phase detector in the setup).
struct OutcomeLabel {
  std::optional<int> phase;      // index m of the detected phase-basis state
  std::optional<int> detection;  // index in the completed detection basis, 0 = target
  std::optional<int> b_click;    // b channel whose detector fired
  std::optional<int> c_click;    // c channel whose detector fired

  std::string to_string() const;
  bool operator==(const OutcomeLabel&) const = default;
};

/// Probabilities at or below this value are reported as impossible outcomes.
inline constexpr double kImpossibleTol = 1e-14;

struct OutcomeRecord {
  OutcomeLabel label;
  double probability = 0.0;
  /// Renormalized post-selected state; empty for an impossible outcome.
  std::optional<DensityOperator> post_state;
  LinearMap effective_operator;

  bool impossible() const { return !post_state.has_value(); }
};

struct KrausOutcome {
  OutcomeLabel label;
  LinearMap op;
};

/// Applies Y to rho: probability Tr(Y rho Y^dagger), renormalized post state.
OutcomeRecord make_record(const OutcomeLabel& label, const LinearMap& op, const DensityOperator& rho);

/// sum_w Y(w)^dagger Y(w) over a set of outcomes sharing one source space.
Eigen::MatrixXcd completeness_sum(const std::vector<KrausOutcome>& outcomes);
/// max |sum_w Y^dagger Y - I|.
double completeness_defect(const std::vector<KrausOutcome>& outcomes);

const KrausOutcome& find_outcome(const std::vector<KrausOutcome>& outcomes, const OutcomeLabel& label);

/// Result of a protocol with feed-forward: per-branch records and the
/// aggregated effect over the successful branches.
struct UnconditionalResult {
  std::vector<OutcomeRecord> branches;
  double probability = 0.0;
  /// Probability-weighted mixture of the successful branches.
  std::optional<DensityOperator> state;
  /// Effective operator when every successful branch realizes the same map.
  std::optional<LinearMap> effective_operator;
};

}  // namespace kerrconv
