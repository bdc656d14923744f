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

namespace kerrconv {

/// Input of the a'-mode of the backward converter: |0_P'> realizes state
/// engineering, the vacuum turns the setup into a measurement device.
enum class AuxiliaryPreparation { PhaseState, Vacuum };

/// Two converters joined by the arrays U_R, splitters T_k and U U_R^dagger
/// in the b-channels. The realized operator on the single-photon sector is
/// A_b = U R_b with R_b = U_R^dagger diag(T) U_R.
struct EngineeringConfig {
  int N = 0;
  Eigen::MatrixXcd U;
  Eigen::MatrixXcd U_R;
  std::vector<double> Tk;
  /// When false the splitter stage is absent, i.e. T_k = 1.
  bool include_Tk_stage = true;
  AuxiliaryPreparation preparation = AuxiliaryPreparation::PhaseState;
  /// Phase of the detected state |Phi_P> and of the array U_Phi.
  double phi = 0.0;
  std::string a_label = "a";
  std::string aux_label = "a'";
  std::string b_prefix = "b";
  std::string c_prefix = "c";

  /// U = U_R = identity, T_k = 1.
  static EngineeringConfig identity(int n);
  static EngineeringConfig unitary(const Eigen::MatrixXcd& u, double t = 1.0);
  /// T_k = delta_{kl}, U = identity.
  static EngineeringConfig projective(const Eigen::MatrixXcd& u_r, int l = 0);

  /// Throws ConfigurationError / NotUnitary on invalid parameters
  /// (T_k outside [0,1] or all T_k = 0).
  void validate() const;
  std::vector<double> effective_T() const;
  Eigen::MatrixXcd R_b() const;
  Eigen::MatrixXcd A_b() const;

  SpacePtr a_space() const;
  SpacePtr aux_space() const;
  SpacePtr b_space() const;
  ConverterConfig converter() const;
};

/// A_a = P^dagger U R P as an (N+1)x(N+1) matrix.
Eigen::MatrixXcd build_target_operator(const EngineeringConfig& cfg);

struct TargetDecomposition {
  EngineeringConfig config;
  /// A = scale * A_norm with scale = Tr(A^dagger A)^{1/2} (Det U)^{1/(N+1)}.
  cd scale{1.0};
  /// A = realization_factor * build_target_operator(config).
  cd realization_factor{1.0};
};

/// Polar decomposition of A with T_k the eigenvalues of the positive part
/// rescaled so that max T_k = 1, sorted in descending order. Throws
/// ConfigurationError for the zero operator.
TargetDecomposition decompose_target(const Eigen::MatrixXcd& a);

/// Complete outcome set (phase outcome m, click in b_k or c_k) of the
/// conditional setup; maps H_a into H_a'.
std::vector<KrausOutcome> engineering_outcomes(const EngineeringConfig& cfg);

OutcomeLabel engineering_success_label();
/// Y(w) for a single outcome of engineering_outcomes.
LinearMap engineering_operator(const EngineeringConfig& cfg, const OutcomeLabel& label);

/// Nominal outcome: photon in b_0 and phase Phi detected.
OutcomeRecord run_engineering(const DensityOperator& rho, const EngineeringConfig& cfg);

/// Feed-forward on the detected phase and repeat-until-success on the
/// b-clicks. Branches are labelled (m, k); the aggregate realizes
/// Upsilon = P'^dagger A_b P with probability <R^dagger R>.
UnconditionalResult run_engineering_unconditional(const DensityOperator& rho, const EngineeringConfig& cfg);
/// Same, with the conditional outcome set supplied by the caller.
UnconditionalResult run_engineering_unconditional(const DensityOperator& rho, const EngineeringConfig& cfg,
                                                  const std::vector<KrausOutcome>& outcomes);

}  // namespace kerrconv
