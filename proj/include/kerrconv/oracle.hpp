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

#include <string>
#include <vector>

#include "kerrconv/converter.hpp"
#include "kerrconv/engineering.hpp"
#include "kerrconv/telemanip.hpp"

/// Brute-force reference implementations. Every setup is simulated on the
/// full multimode Fock space with each b-channel and loss channel c_k as an
/// explicit mode (cutoff 1), arrays realized as splitter meshes, and every
/// detector as an explicit projector. Outcome sets use the same labels as
/// the analytic implementations.
namespace kerrconv::oracle {

std::vector<KrausOutcome> a_to_b_outcomes(const ConverterConfig& cfg);
std::vector<KrausOutcome> b_to_a_outcomes(const ConverterConfig& cfg);
std::vector<KrausOutcome> engineering_outcomes(const EngineeringConfig& cfg);
std::vector<KrausOutcome> telemanip_outcomes(const TelemanipConfig& cfg);

/// Device matrix W^dagger K W on a_mode x (single-photon sector of the
/// b-modes), with W realized as a mesh. Modes are ordered (a, b_0..b_N).
Eigen::MatrixXcd device_matrix(const ConverterConfig& cfg);

/// Marginals of the engineering and interchanged wirings without phase
/// projection, from the full circuit state.
ReducedStates reduced_states_engineering(const DensityOperator& rho, const EngineeringConfig& cfg);
ReducedStates reduced_states_telemanip(const DensityOperator& rho, const TelemanipConfig& cfg);

/// <0_c| U |0_c> for a splitter (T, R) on two modes with the given cutoff,
/// where U = exp(i sum_kl H_kl x_k^dagger x_l) is built from the generator
/// H = -i log S of the single-photon matrix S.
Eigen::MatrixXcd vacuum_projected_splitter(cd T, cd R, int cutoff);

}  // namespace kerrconv::oracle
