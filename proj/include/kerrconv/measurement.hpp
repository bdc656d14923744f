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

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "kerrconv/engineering.hpp"
#include "kerrconv/mesh.hpp"

namespace kerrconv {

enum class ProbeMode { Analytic, Shots };

/// Measurement access to an unknown single-mode state. The state is
/// converted into the b-channels once (phase-conditioned conversion); after
/// that only detector signals p(1_bk | Phi) behind a chosen array U are
/// observable.
class ProbeChannel {
 public:
  explicit ProbeChannel(const DensityOperator& rho);

  int order() const { return n_; }
  /// p(1_bk | Phi) = <phi_k| U sigma_b U^dagger |phi_k> for k = 0..N.
  Eigen::VectorXd signals(const Eigen::MatrixXcd& u) const;
  double signal(const Eigen::MatrixXcd& u, int k) const;
  /// Click counts of `shots` phase-conditioned events (multinomial).
  std::vector<long> sample_counts(const Eigen::MatrixXcd& u, long shots, Rng& rng) const;
  Eigen::VectorXd sampled_signals(const Eigen::MatrixXcd& u, long shots, Rng& rng) const;
  long evaluations() const { return evaluations_; }

 private:
  int n_;
  Eigen::MatrixXcd sigma_b_;
  mutable long evaluations_ = 0;
};

/// Joint probability p(1_bk, Phi) of the engineering setup with the a'-mode in
/// vacuum: (N+1)^{-1} <k| A_a rho A_a^dagger |k>.
double overlap_probe(const DensityOperator& rho, const EngineeringConfig& cfg, int k);
/// p(1_bk | Phi) = p(1_bk, Phi) / p(Phi).
double overlap_probe_conditional(const DensityOperator& rho, const EngineeringConfig& cfg, int k);

/// Z = Z_re + i Z_im with both parts Hermitian. basis[j] is U_{a,j}: its
/// adjoint maps |k> to the eigenvector of part j with eigenvalue values[j](k).
struct ObservableDecomposition {
  Eigen::MatrixXcd Z;
  std::array<Eigen::MatrixXcd, 2> parts;
  std::array<Eigen::VectorXd, 2> values;
  std::array<Eigen::MatrixXcd, 2> basis;
};

ObservableDecomposition decompose_observable(const Eigen::MatrixXcd& z);

/// <Z> = sum_j sum_k i^j lambda_jk p_j(k) from two measurement settings.
cd expectation(const Eigen::MatrixXcd& z, const ProbeChannel& probe);

/// Array U_j coupling channels n and m by a symmetric splitter:
/// U_j^dagger |phi_n> = (|phi_n> + i^j |phi_m>)/sqrt2,
/// U_j^dagger |phi_m> = (-i^{-j} |phi_n> + |phi_m>)/sqrt2.
Eigen::MatrixXcd symmetric_splitter(int n_order, int n, int m, int j);

struct ReconstructionSettings {
  ProbeMode mode = ProbeMode::Analytic;
  long shots = 1000000;  // phase-conditioned events per setting
  std::uint64_t seed = 0;
};

/// <m|rho|n> from the diagonal setting and the symmetric-splitter settings.
cd matrix_element(const ProbeChannel& probe, int m, int n);
Eigen::MatrixXcd reconstruct_fock_matrix(const ProbeChannel& probe, const ReconstructionSettings& settings = {});

enum class OptimizationDirection { Maximize, Minimize };
enum class TuningStatus { Converged, BudgetExhausted };

struct OptimizerSettings {
  OptimizationDirection direction = OptimizationDirection::Maximize;
  /// Stop a stage when a full cycle improves its signal by less than this.
  double tolerance = 1e-9;
  int max_cycles = 200;
  /// Grid points per angle period used to bracket the golden-section search.
  int grid_points = 8;
  /// Bracket width at which the golden-section search stops.
  double angle_tolerance = 1e-10;
  ProbeMode mode = ProbeMode::Analytic;
  long shots_per_evaluation = 100000;
  std::uint64_t seed = 0;
};

/// Snapshot of the tuning of one sub-array U_{k..N}. Each cycle sweeps a
/// splitter over every channel pair i < j within k..N and tunes its two
/// angles for maximal (or minimal) signal in channel i.
struct TuningState {
  int stage = 0;
  /// Splitters kept so far, in the order they act.
  std::vector<MeshSplitter> splitters;
  std::vector<double> angles;  // (theta, phi) of each kept splitter
  double best_signal = 0.0;
  int cycles = 0;
  TuningStatus status = TuningStatus::Converged;
  std::vector<double> history;  // stage signal after each cycle
};

struct DiagonalizationResult {
  TuningStatus status = TuningStatus::Converged;
  Eigen::MatrixXcd U;              // overall array U_{(N-1)N} ... U_{0..N}
  std::vector<Eigen::MatrixXcd> stages;  // sub-array U_{k..N} of each stage
  Eigen::VectorXd eigenvalues;     // tuned detector signals p(1_bk | Phi)
  std::vector<TuningState> tuning;
  long evaluations = 0;

  /// sum_k p_k U^dagger |k><k| U.
  Eigen::MatrixXcd reconstructed() const;
};

/// Splitter between channels i and j of an (N+1)-channel array with
/// T = cos(theta), R = sin(theta) exp(i phi).
Eigen::MatrixXcd channel_splitter(int n_order, int i, int j, double theta, double phi);

DiagonalizationResult diagonalize_experimentally(const ProbeChannel& probe, const OptimizerSettings& settings = {});

struct PurificationResult {
  TuningStatus status = TuningStatus::Converged;
  double fidelity_estimate = 0.0;  // optimized p(1_b0, Phi) (N+1)^2
  double probability = 0.0;
  Eigen::MatrixXcd U_R;
  Eigen::VectorXcd output_vector;  // U_R^dagger |0>
  std::optional<DensityOperator> output;
  TuningState tuning;
};

/// Tunes U_R of the projective setup T_k = delta_k0 for maximal success.
PurificationResult qnd_purify(const DensityOperator& rho, const OptimizerSettings& settings = {});

/// p(1_bk) = <k| A_a rho A_a^dagger |k> with phase feed-forward.
Eigen::VectorXd unconditional_probe(const DensityOperator& rho, const EngineeringConfig& cfg);

}  // namespace kerrconv
