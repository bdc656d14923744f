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

#include "kerrconv/telemanip.hpp"

#include <cmath>
#include <sstream>

namespace kerrconv {

namespace {

constexpr double kBranchAgreementTol = 1e-12;

Eigen::MatrixXcd shift_power(int n, int k) {
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n + 1, n + 1);
  const Eigen::MatrixXcd s = cyclic_shift(n);
  for (int i = 0; i < k; ++i) v = s * v;
  return v;
}

double detected_phase(int n, double phi, int m) { return phi + 2.0 * kPi * m / (n + 1); }

}  // namespace

TelemanipConfig TelemanipConfig::bare(int n) { return from(EngineeringConfig::identity(n)); }

TelemanipConfig TelemanipConfig::from(EngineeringConfig cfg) {
  TelemanipConfig t;
  t.engineering = std::move(cfg);
  t.validate();
  return t;
}

void TelemanipConfig::validate() const {
  engineering.validate();
  if (engineering.preparation != AuxiliaryPreparation::PhaseState) {
    throw ConfigurationError("telemanipulation: the source requires the |0_P'> preparation");
  }
  if (corrected_label == engineering.a_label || corrected_label == engineering.aux_label) {
    throw ConfigurationError("telemanipulation: corrected mode label must be distinct");
  }
}

Eigen::MatrixXcd TelemanipConfig::A_conj() const { return engineering.A_b().conjugate(); }

SpacePtr TelemanipConfig::corrected_space() const { return source_space(N(), corrected_label); }

Eigen::MatrixXcd telemanip_correction(int n, double phi, int k, int m) {
  if (k < 0 || k > n || m < 0 || m > n) throw ConfigurationError("telemanipulation: branch index out of range");
  return phase_array(n, phi) * shift_power(n, k) * phase_array(n, detected_phase(n, phi, m)).adjoint();
}

LinearMap telemanip_operator(const TelemanipConfig& cfg, const OutcomeLabel& label) {
  cfg.validate();
  const int n = cfg.N();
  const auto& e = cfg.engineering;
  if (!label.phase || *label.phase < 0 || *label.phase > n || label.detection ||
      label.b_click.has_value() == label.c_click.has_value()) {
    throw ConfigurationError("telemanipulation: no outcome labelled " + label.to_string());
  }
  const int m = *label.phase;
  const double d = n + 1;
  if (label.b_click) {
    const Eigen::MatrixXcd y = cfg.A_conj() * telemanip_correction(n, e.phi, *label.b_click, m) / d;
    return {cfg.alice_space(), cfg.bob_space(), y};
  }
  const int j = *label.c_click;
  if (j < 0 || j > n) throw ConfigurationError("telemanipulation: loss channel out of range");
  const double t = e.effective_T()[static_cast<std::size_t>(j)];
  const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
  // The photon is lost through c_j: Bob keeps conj(U U_R^dagger)|j>, Alice
  // still projects onto the detected phase state.
  const Eigen::VectorXcd bob = (e.U * e.U_R.adjoint()).col(j).conjugate();
  const Eigen::VectorXcd alice = phase_basis(n, e.phi).col(m);
  return {cfg.alice_space(), cfg.bob_space(), r / std::sqrt(d) * bob * alice.adjoint()};
}

std::vector<KrausOutcome> telemanip_outcomes(const TelemanipConfig& cfg) {
  cfg.validate();
  const int n = cfg.N();
  const auto t = cfg.engineering.effective_T();
  std::vector<KrausOutcome> out;
  for (int m = 0; m <= n; ++m) {
    for (int k = 0; k <= n; ++k) {
      OutcomeLabel label;
      label.phase = m;
      label.b_click = k;
      out.push_back({label, telemanip_operator(cfg, label)});
    }
    for (int j = 0; j <= n; ++j) {
      if (t[static_cast<std::size_t>(j)] >= 1.0) continue;
      OutcomeLabel label;
      label.phase = m;
      label.c_click = j;
      out.push_back({label, telemanip_operator(cfg, label)});
    }
  }
  return out;
}

OutcomeRecord run_telemanip_conditional(const DensityOperator& rho, const TelemanipConfig& cfg) {
  const auto label = engineering_success_label();
  return make_record(label, telemanip_operator(cfg, label), rho);
}

UnconditionalResult run_telemanip_unconditional(const DensityOperator& rho, const TelemanipConfig& cfg) {
  return run_telemanip_unconditional(rho, cfg, telemanip_outcomes(cfg));
}

UnconditionalResult run_telemanip_unconditional(const DensityOperator& rho, const TelemanipConfig& cfg,
                                                const std::vector<KrausOutcome>& outcomes) {
  cfg.validate();
  const int n = cfg.N();
  const double phi = cfg.engineering.phi;
  const double d = n + 1;
  UnconditionalResult res;
  Eigen::MatrixXcd mixture = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  std::optional<Eigen::MatrixXcd> common;
  bool branch_independent = true;
  for (int m = 0; m <= n; ++m) {
    for (int k = 0; k <= n; ++k) {
      OutcomeLabel label;
      label.phase = m;
      label.b_click = k;
      const Eigen::MatrixXcd u = telemanip_correction(n, phi, k, m);
      // Bob applies U_{k Phi~}^dagger; the reconverters succeed with certainty.
      const Eigen::MatrixXcd y = u.adjoint() * find_outcome(outcomes, label).op.matrix;
      const Eigen::MatrixXcd upsilon = d * y;
      const LinearMap op{cfg.alice_space(), cfg.corrected_space(), y};
      auto rec = make_record(label, op, rho);
      res.probability += rec.probability;
      mixture += op.apply(rho).matrix();
      if (!common) {
        common = upsilon;
      } else if ((upsilon - *common).cwiseAbs().maxCoeff() > kBranchAgreementTol) {
        branch_independent = false;
      }
      res.branches.push_back(std::move(rec));
    }
  }
  if (res.probability > kImpossibleTol) {
    res.state = DensityOperator(cfg.corrected_space(), mixture / res.probability);
  }
  if (branch_independent) res.effective_operator = LinearMap{cfg.alice_space(), cfg.corrected_space(), *common};
  return res;
}

DensityOperator dephase(const DensityOperator& rho) {
  const Eigen::MatrixXcd diag = rho.matrix().diagonal().asDiagonal();
  return DensityOperator(rho.space(), diag, rho.is_normalized() ? Normalization::Normalized : Normalization::Unnormalized);
}

namespace {

void require_single_mode(const DensityOperator& rho, const SpacePtr& expected) {
  if (!same_space(rho.space(), expected)) {
    throw SpaceMismatch("reduced states: input must live on " + expected->describe());
  }
}

}  // namespace

ReducedStates reduced_states_engineering(const DensityOperator& rho, const EngineeringConfig& cfg) {
  cfg.validate();
  if (cfg.preparation != AuxiliaryPreparation::PhaseState) {
    throw ConfigurationError("reduced states: requires the |0_P'> preparation");
  }
  require_single_mode(rho, cfg.a_space());
  ReducedStates out;
  out.rho_red = dephase(rho);
  const double d = cfg.N + 1;
  const LinearMap y_red{cfg.a_space(), cfg.aux_space(), cfg.A_b() / std::sqrt(d)};
  const auto unnormalized = y_red.apply(*out.rho_red);
  out.probability = unnormalized.trace();
  if (out.probability > kImpossibleTol) out.rho_red_prime = unnormalized.normalized();
  return out;
}

ReducedStates reduced_states_telemanip(const DensityOperator& rho, const TelemanipConfig& cfg) {
  cfg.validate();
  const auto& e = cfg.engineering;
  require_single_mode(rho, cfg.alice_space());
  const int n = cfg.N();
  const double d = n + 1;
  // <m|R_a(Phi)^dagger R_a(Phi)|n> with R_a(Phi) = exp(i Phi n) R exp(-i Phi n).
  const Eigen::MatrixXcd rot = phase_array(n, e.phi);
  const Eigen::MatrixXcd r_phi = rot * e.R_b() * rot.adjoint();
  const Eigen::MatrixXcd weight = r_phi.adjoint() * r_phi / d;
  const Eigen::MatrixXcd unnormalized = weight.cwiseProduct(rho.matrix());
  ReducedStates out;
  out.probability = unnormalized.trace().real();
  if (out.probability > kImpossibleTol) {
    out.rho_red = DensityOperator(rho.space(), unnormalized / out.probability);
  }
  out.rho_red_prime = DensityOperator::maximally_mixed(cfg.bob_space());
  return out;
}

// ---------------------------------------------------------------------------
// Session

std::string ClassicalMessage::to_string() const {
  std::ostringstream os;
  os << "t=" << timestamp << ' ' << (kind == MessageKind::Trigger ? "trigger" : "report");
  if (channel) os << " k=" << *channel;
  if (phase_index) os << " m=" << *phase_index;
  if (phase_value) os << " phi=" << *phase_value;
  return os.str();
}

TelemanipSession::TelemanipSession(TelemanipConfig cfg, TelemanipMode mode, std::uint64_t seed)
    : cfg_(std::move(cfg)), mode_(mode), rng_(seed), outcomes_(telemanip_outcomes(cfg_)) {
  alice_.role = PartyRole::Alice;
  alice_.modes = {cfg_.engineering.a_label};
  bob_.role = PartyRole::Bob;
  bob_.modes = {cfg_.engineering.aux_label};
  if (mode_ == TelemanipMode::Unconditional) bob_.modes.push_back(cfg_.corrected_label);
  source_.role = PartyRole::Source;
  source_.modes = cfg_.engineering.converter().b_labels();
}

TrialRecord TelemanipSession::run_trial(const DensityOperator& rho) {
  const long t = trials_++;
  const int n = cfg_.N();
  bob_.shutter_open = false;

  // Alice measures; the outcome is drawn from the Kraus probabilities.
  std::vector<double> weights;
  weights.reserve(outcomes_.size());
  for (const auto& o : outcomes_) weights.push_back(std::max(0.0, o.op.apply(rho).trace()));
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  const KrausOutcome& outcome = outcomes_[pick(rng_)];

  if (mode_ == TelemanipMode::Conditional) {
    if (outcome.label == engineering_success_label()) {
      channel_.push_back({MessageKind::Trigger, std::nullopt, std::nullopt, std::nullopt, t});
    }
  } else if (outcome.label.b_click) {
    const int m = *outcome.label.phase;
    channel_.push_back({MessageKind::OutcomeReport, outcome.label.b_click, m,
                        detected_phase(n, cfg_.engineering.phi, m), t});
  }

  // Bob processes the channel in order.
  while (!channel_.empty()) {
    const ClassicalMessage msg = channel_.front();
    channel_.pop_front();
    transcript_.push_back(msg);
    if (msg.kind == MessageKind::Trigger) {
      bob_.shutter_open = true;
    } else {
      bob_.pending_corrections.push_back(
          telemanip_correction(n, cfg_.engineering.phi, *msg.channel, *msg.phase_index).adjoint());
    }
  }

  TrialRecord rec{t, outcome.label, false, DensityOperator::maximally_mixed(cfg_.bob_space())};
  const auto conditioned = outcome.op.apply(rho);
  if (bob_.shutter_open) {
    rec.delivered = true;
    rec.bob_state = conditioned.normalized();
  } else if (!bob_.pending_corrections.empty()) {
    const LinearMap fix{cfg_.bob_space(), cfg_.corrected_space(), bob_.pending_corrections.front()};
    bob_.pending_corrections.pop_front();
    rec.delivered = true;
    rec.bob_state = fix.apply(conditioned).normalized();
  }
  return rec;
}

}  // namespace kerrconv
