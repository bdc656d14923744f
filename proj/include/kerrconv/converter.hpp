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
#include <variant>
#include <vector>

#include "kerrconv/isomorphism.hpp"
#include "kerrconv/optics.hpp"
#include "kerrconv/outcome.hpp"
#include "kerrconv/random.hpp"

namespace kerrconv {

/// Detection (or preparation) of the phase state |Phi_P> on the a-mode,
/// modelled as a projective measurement in the shifted phase basis
/// Phi_m = phi + 2 pi m / (N+1); m = 0 is the nominal outcome.
struct PhaseDetection {
  double phi = 0.0;
};

using DetectionTarget = std::variant<PhaseDetection, StateVector>;

/// (N+1)^{-1/2} sum_k exp(i phi k) |k> on a single mode with cutoff N.
StateVector phase_state(SpacePtr single_mode, double phi);
/// Columns are the phase-basis states for phi + 2 pi m / (N+1).
Eigen::MatrixXcd phase_basis(int n, double phi);
/// U_Phi = exp(i phi sum_k k n_bk) on the single-photon sector: diag(exp(i k phi)).
Eigen::MatrixXcd phase_array(int n, double phi);
/// Cyclic shift |phi_k> -> |phi_{k+1 mod N+1}>.
Eigen::MatrixXcd cyclic_shift(int n);

struct ConverterConfig {
  int N = 0;
  std::vector<double> kappas;
  Eigen::MatrixXcd W;
  DetectionTarget detection = PhaseDetection{};
  std::string a_label = "a";
  std::string b_prefix = "b";
  std::string c_prefix = "c";

  /// kappa_k = -2 pi k/(N+1), W = DFT, phase-state detection at `phi`.
  static ConverterConfig canonical(int n, double phi = 0.0);
  /// Canonical device with detection of the normalized state `psi` on the a-mode.
  static ConverterConfig with_detection_state(int n, StateVector psi);

  /// Throws ConfigurationError for inconsistent sizes, a non-unitary W or a
  /// detection state with a vanishing Fock coefficient.
  void validate() const;

  /// <k|Psi> for k = 0..N.
  Eigen::VectorXcd detection_amplitudes() const;
  /// min_k |<k|Psi>|.
  double min_coefficient() const;
  /// T_k = <Psi|k>^{-1} min_k |<k|Psi>|.
  std::vector<cd> transmittances() const;
  /// R_k = sqrt(1 - |T_k|^2), chosen real and non-negative.
  std::vector<cd> reflectances() const;
  /// Orthonormal detection basis; column 0 is the detected state.
  Eigen::MatrixXcd detection_basis() const;
  bool phase_detection() const { return std::holds_alternative<PhaseDetection>(detection); }

  SpacePtr a_space() const;
  SpacePtr b_space() const;
  IsomorphismMap isomorphism() const;
  std::vector<std::string> b_labels() const;
  std::vector<std::string> c_labels() const;
};

/// V_b = sum_k exp(i kappa_k) W^dagger |phi_k><phi_k| W on the single-photon sector.
Eigen::MatrixXcd build_Vb(const ConverterConfig& cfg);

enum class DeviceRoute {
  Blockwise,  // V^{n_a} applied block by block
  Composed,   // W^dagger (prod K_k) W from element matrices
};

/// Device matrix on any space containing the a-mode and the b-modes.
SparseOperator build_M(const ConverterConfig& cfg, const FockSpace& space,
                       DeviceRoute route = DeviceRoute::Blockwise);

/// Complete outcome set of the a -> b converter: detection-basis outcome j
/// with all c-modes dark (map into the single-photon sector) or with a
/// photon lost to c_i (map onto the b vacuum).
std::vector<KrausOutcome> a_to_b_outcomes(const ConverterConfig& cfg);
/// Complete outcome set of the b -> a converter: click in b_j or c_j.
std::vector<KrausOutcome> b_to_a_outcomes(const ConverterConfig& cfg);

OutcomeLabel a_to_b_success_label(const ConverterConfig& cfg);
OutcomeLabel b_to_a_success_label();

/// Conditional conversion: nominal detection outcome with dark c-modes.
OutcomeRecord convert_a_to_b(const DensityOperator& rho_a, const ConverterConfig& cfg);
OutcomeRecord convert_b_to_a(const DensityOperator& rho_b, const ConverterConfig& cfg);

/// Phase-basis detection with feed-forward U_{Phi_m} on every outcome.
UnconditionalResult convert_unconditional_a_to_b(const DensityOperator& rho_a,
                                                 const ConverterConfig& cfg);
/// Same, with the conditional outcome set supplied by the caller.
UnconditionalResult convert_unconditional_a_to_b(const DensityOperator& rho_a, const ConverterConfig& cfg,
                                                 const std::vector<KrausOutcome>& outcomes);

/// One branch k of the backward converter with |0_P> preparation:
/// (N+1)^{-1/2} P^dagger V_b^{dagger k}.
LinearMap b_to_a_click_operator(const ConverterConfig& cfg, int k);

/// Repeat-until-success backward conversion in analytic form: per-channel
/// branches (each corrected by reconversion and V_b^k before the retry)
/// and the effective operator P^dagger with probability 1.
UnconditionalResult convert_unconditional_b_to_a(const DensityOperator& rho_b,
                                                 const ConverterConfig& cfg);
UnconditionalResult convert_unconditional_b_to_a(const DensityOperator& rho_b, const ConverterConfig& cfg,
                                                 const std::vector<KrausOutcome>& outcomes);

struct TrialStatistics {
  bool success = false;
  bool cap_exceeded = false;
  int trials = 0;
  std::vector<int> clicks;  // channel that fired in each trial
  /// Fidelity of the restored b-state with the original input after each
  /// failed trial's correction.
  std::vector<double> restore_fidelities;
  std::optional<DensityOperator> output;
};

/// Sampled repeat-until-success run; at most `max_trials` trials
/// (default 10 (N+1)).
TrialStatistics sample_unconditional_b_to_a(const DensityOperator& rho_b, const ConverterConfig& cfg,
                                            Rng& rng, int max_trials = 0);

struct TrialSummary {
  int runs = 0;
  int successes = 0;
  int cap_exceeded = 0;
  double mean_trials = 0.0;   // over successful runs
  double stddev_trials = 0.0;
  double min_restore_fidelity = 1.0;
};

TrialSummary summarize_trials(const DensityOperator& rho_b, const ConverterConfig& cfg, int runs,
                              std::uint64_t seed, int max_trials = 0);

}  // namespace kerrconv
