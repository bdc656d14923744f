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

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "kerrconv/engineering.hpp"
#include "kerrconv/random.hpp"

namespace kerrconv {

/// Setup with the ports of the engineering scheme interchanged. Alice holds
/// mode a and the right converter; the source (left converter and the
/// arrays) sends mode a' to Bob. Under feed-forward Bob's corrected output
/// appears in mode a''.
struct TelemanipConfig {
  EngineeringConfig engineering;
  std::string corrected_label = "a''";

  /// Source consisting of the left converter only: plain teleportation.
  static TelemanipConfig bare(int n);
  static TelemanipConfig from(EngineeringConfig cfg);

  void validate() const;
  int N() const { return engineering.N; }
  /// Complex conjugate of A_b.
  Eigen::MatrixXcd A_conj() const;
  SpacePtr alice_space() const { return engineering.a_space(); }
  SpacePtr bob_space() const { return engineering.aux_space(); }
  SpacePtr corrected_space() const;
};

/// U_{k Phi~} = U_Phi V^k U_{Phi~}^dagger with Phi~ = Phi + 2 pi m / (N+1).
Eigen::MatrixXcd telemanip_correction(int n, double phi, int k, int m);

/// Complete outcome set of Alice's measurement, H_a -> H_a'.
std::vector<KrausOutcome> telemanip_outcomes(const TelemanipConfig& cfg);
LinearMap telemanip_operator(const TelemanipConfig& cfg, const OutcomeLabel& label);

/// Trigger outcome: photon in b_0 and phase Phi; Bob opens the shutter.
OutcomeRecord run_telemanip_conditional(const DensityOperator& rho, const TelemanipConfig& cfg);

/// Bob corrects every b-click branch (k, Phi~) with U_{k Phi~}^dagger.
/// Branch effective operators are U^dagger A_b^* U between H_a and H_a''.
UnconditionalResult run_telemanip_unconditional(const DensityOperator& rho, const TelemanipConfig& cfg);
/// Same, with Alice's outcome set supplied by the caller.
UnconditionalResult run_telemanip_unconditional(const DensityOperator& rho, const TelemanipConfig& cfg,
                                                const std::vector<KrausOutcome>& outcomes);

/// sum_k |k><k| rho |k><k|.
DensityOperator dephase(const DensityOperator& rho);

/// Single-mode marginals with the phase detector removed. rho_red lives on
/// Alice's side (mode a), rho_red_prime on the far side (mode a').
/// A state is empty when its conditioning event is impossible.
struct ReducedStates {
  std::optional<DensityOperator> rho_red;
  std::optional<DensityOperator> rho_red_prime;
  /// Probability of the b_0 click conditioning the respective state.
  double probability = 1.0;
};

/// Engineering wiring: rho_red is the dephased input; rho_red_prime is
/// conditioned on a b_0 click.
ReducedStates reduced_states_engineering(const DensityOperator& rho, const EngineeringConfig& cfg);
/// Interchanged wiring: rho_red is conditioned on a b_0 click; Bob's
/// marginal is white noise.
ReducedStates reduced_states_telemanip(const DensityOperator& rho, const TelemanipConfig& cfg);

// ---------------------------------------------------------------------------
// Party-level protocol

enum class MessageKind { Trigger, OutcomeReport };

struct ClassicalMessage {
  MessageKind kind = MessageKind::Trigger;
  std::optional<int> channel;
  std::optional<int> phase_index;
  std::optional<double> phase_value;
  long timestamp = 0;

  std::string to_string() const;
};

enum class PartyRole { Alice, Bob, Source };

struct PartyState {
  PartyRole role = PartyRole::Source;
  std::vector<std::string> modes;
  bool shutter_open = false;
  std::deque<Eigen::MatrixXcd> pending_corrections;
};

enum class TelemanipMode { Conditional, Unconditional };

struct TrialRecord {
  long trial = 0;
  OutcomeLabel alice_outcome;
  /// True when Bob received the engineered state (shutter opened or
  /// correction applied); otherwise bob_state is his unconditioned marginal.
  bool delivered = false;
  DensityOperator bob_state;
};

/// Alice, Bob and the source as state machines exchanging messages over a
/// lossless ordered classical channel. Alice's outcomes are sampled.
class TelemanipSession {
 public:
  TelemanipSession(TelemanipConfig cfg, TelemanipMode mode, std::uint64_t seed);

  TrialRecord run_trial(const DensityOperator& rho);

  const std::vector<ClassicalMessage>& transcript() const { return transcript_; }
  const PartyState& alice() const { return alice_; }
  const PartyState& bob() const { return bob_; }
  const PartyState& source() const { return source_; }

 private:
  TelemanipConfig cfg_;
  TelemanipMode mode_;
  Rng rng_;
  std::vector<KrausOutcome> outcomes_;
  std::deque<ClassicalMessage> channel_;
  std::vector<ClassicalMessage> transcript_;
  PartyState alice_;
  PartyState bob_;
  PartyState source_;
  long trials_ = 0;
};

}  // namespace kerrconv
