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

#include "kerrconv/converter.hpp"

#include <cmath>
#include <numeric>

#include "kerrconv/polar.hpp"

namespace kerrconv {

namespace {

constexpr double kSameOperatorTol = 1e-12;

SpacePtr b_vacuum_space(const ConverterConfig& cfg) {
  return FockSpace::build(cfg.b_labels(), 1, 0);
}

Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& m, int k) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out = m * out;
  return out;
}

int wrap(int k, int n) { return ((k % n) + n) % n; }

}  // namespace

StateVector phase_state(SpacePtr single_mode, double phi) {
  if (single_mode->num_modes() != 1) throw ConfigurationError("phase_state: expected a single mode");
  const auto dim = static_cast<Eigen::Index>(single_mode->dimension());
  Eigen::VectorXcd v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    v(k) = std::polar(1.0 / std::sqrt(static_cast<double>(dim)), phi * static_cast<double>(k));
  }
  return StateVector(std::move(single_mode), std::move(v));
}

Eigen::MatrixXcd phase_basis(int n, double phi) {
  const int d = n + 1;
  Eigen::MatrixXcd basis(d, d);
  for (int m = 0; m < d; ++m) {
    for (int k = 0; k < d; ++k) {
      // Phase reduced mod 2 pi via the integer product km.
      const double angle = phi * k + 2.0 * kPi * ((k * m) % d) / d;
      basis(k, m) = std::polar(1.0 / std::sqrt(static_cast<double>(d)), angle);
    }
  }
  return basis;
}

Eigen::MatrixXcd phase_array(int n, double phi) {
  Eigen::VectorXcd d(n + 1);
  for (int k = 0; k <= n; ++k) d(k) = std::polar(1.0, phi * k);
  return d.asDiagonal();
}

Eigen::MatrixXcd cyclic_shift(int n) {
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) v((k + 1) % (n + 1), k) = 1.0;
  return v;
}

// ---------------------------------------------------------------------------
// ConverterConfig

ConverterConfig ConverterConfig::canonical(int n, double phi) {
  if (n < 0) throw ConfigurationError("converter: N must be non-negative");
  ConverterConfig cfg;
  cfg.N = n;
  for (int k = 0; k <= n; ++k) cfg.kappas.push_back(-2.0 * kPi * k / (n + 1));
  cfg.W = dft_matrix(n + 1);
  cfg.detection = PhaseDetection{phi};
  return cfg;
}

ConverterConfig ConverterConfig::with_detection_state(int n, StateVector psi) {
  ConverterConfig cfg = canonical(n);
  cfg.detection = std::move(psi);
  cfg.validate();
  return cfg;
}

void ConverterConfig::validate() const {
  if (N < 0) throw ConfigurationError("converter: N must be non-negative");
  if (kappas.size() != static_cast<std::size_t>(N + 1)) {
    throw ConfigurationError("converter: expected N+1 Kerr strengths");
  }
  if (W.rows() != N + 1 || W.cols() != N + 1) throw ConfigurationError("converter: W must be (N+1)x(N+1)");
  require_unitary(W, "converter W");
  if (const auto* psi = std::get_if<StateVector>(&detection)) {
    if (!same_space(psi->space(), a_space())) {
      throw SpaceMismatch("converter: detection state must live on the a-mode with cutoff N");
    }
    if (!psi->is_normalized()) throw ConfigurationError("converter: detection state must be normalized");
    if (min_coefficient() <= 0.0) {
      throw ConfigurationError("converter: detection state has a vanishing Fock coefficient");
    }
  }
}

Eigen::VectorXcd ConverterConfig::detection_amplitudes() const {
  if (const auto* psi = std::get_if<StateVector>(&detection)) return psi->amplitudes();
  return phase_basis(N, std::get<PhaseDetection>(detection).phi).col(0);
}

double ConverterConfig::min_coefficient() const { return detection_amplitudes().cwiseAbs().minCoeff(); }

std::vector<cd> ConverterConfig::transmittances() const {
  const Eigen::VectorXcd amp = detection_amplitudes();
  const double m = amp.cwiseAbs().minCoeff();
  std::vector<cd> t;
  for (Eigen::Index k = 0; k < amp.size(); ++k) t.push_back(m / std::conj(amp(k)));
  return t;
}

std::vector<cd> ConverterConfig::reflectances() const {
  std::vector<cd> r;
  for (const cd& t : transmittances()) r.emplace_back(std::sqrt(std::max(0.0, 1.0 - std::norm(t))));
  return r;
}

Eigen::MatrixXcd ConverterConfig::detection_basis() const {
  if (const auto* p = std::get_if<PhaseDetection>(&detection)) return phase_basis(N, p->phi);
  const Eigen::VectorXcd psi = detection_amplitudes();
  const auto d = psi.size();
  Eigen::MatrixXcd basis(d, d);
  basis.col(0) = psi;
  if (d > 1) {
    // Orthonormal complement of psi, canonical so the result depends only on psi.
    const Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(d, d) - psi * psi.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(proj);
    basis.rightCols(d - 1) = canonical_subspace_basis(es.eigenvectors().rightCols(d - 1));
  }
  return basis;
}

SpacePtr ConverterConfig::a_space() const { return source_space(N, a_label); }
SpacePtr ConverterConfig::b_space() const { return sector_space(N, b_prefix); }
IsomorphismMap ConverterConfig::isomorphism() const { return make_isomorphism(a_space(), b_space()); }
std::vector<std::string> ConverterConfig::b_labels() const { return channel_labels(b_prefix, N); }
std::vector<std::string> ConverterConfig::c_labels() const { return channel_labels(c_prefix, N); }

// ---------------------------------------------------------------------------
// Device

Eigen::MatrixXcd build_Vb(const ConverterConfig& cfg) {
  cfg.validate();
  Eigen::VectorXcd phases(cfg.N + 1);
  for (int k = 0; k <= cfg.N; ++k) phases(k) = std::polar(1.0, cfg.kappas[static_cast<std::size_t>(k)]);
  return cfg.W.adjoint() * phases.asDiagonal() * cfg.W;
}

SparseOperator build_M(const ConverterConfig& cfg, const FockSpace& space, DeviceRoute route) {
  const auto b = cfg.b_labels();
  if (route == DeviceRoute::Blockwise) {
    const Eigen::MatrixXcd vb = build_Vb(cfg);
    std::vector<std::string> modes{cfg.a_label};
    modes.insert(modes.end(), b.begin(), b.end());
    std::vector<Eigen::MatrixXcd> powers{Eigen::MatrixXcd::Identity(cfg.N + 1, cfg.N + 1)};
    return local_operator(space, modes, [&](const Occupation& occ) {
      const auto na = static_cast<std::size_t>(occ[0]);
      while (powers.size() <= na) powers.push_back(vb * powers.back());
      const Occupation b_occ(occ.begin() + 1, occ.end());
      auto terms = multiport_action(powers[na], b_occ);
      std::vector<std::pair<Occupation, cd>> out;
      out.reserve(terms.size());
      for (auto& [o, amp] : terms) {
        Occupation full{occ[0]};
        full.insert(full.end(), o.begin(), o.end());
        out.emplace_back(std::move(full), amp);
      }
      return out;
    });
  }
  cfg.validate();
  std::vector<CircuitElement> circuit;
  circuit.emplace_back(MultiportUnitary{b, cfg.W});
  for (int k = 0; k <= cfg.N; ++k) {
    circuit.emplace_back(CrossKerrElement{b[static_cast<std::size_t>(k)], cfg.a_label,
                                          cfg.kappas[static_cast<std::size_t>(k)]});
  }
  circuit.emplace_back(MultiportUnitary{b, cfg.W.adjoint()});
  return circuit_matrix(circuit, space);
}

// ---------------------------------------------------------------------------
// Outcome sets

OutcomeLabel a_to_b_success_label(const ConverterConfig& cfg) {
  OutcomeLabel l;
  if (cfg.phase_detection()) {
    l.phase = 0;
  } else {
    l.detection = 0;
  }
  return l;
}

OutcomeLabel b_to_a_success_label() {
  OutcomeLabel l;
  l.b_click = 0;
  return l;
}

std::vector<KrausOutcome> a_to_b_outcomes(const ConverterConfig& cfg) {
  cfg.validate();
  const int d = cfg.N + 1;
  const auto t = cfg.transmittances();
  const auto r = cfg.reflectances();
  const Eigen::MatrixXcd basis = cfg.detection_basis();
  const auto a = cfg.a_space();
  const auto b = cfg.b_space();
  const auto vac = b_vacuum_space(cfg);
  std::vector<KrausOutcome> out;
  for (int j = 0; j < d; ++j) {
    OutcomeLabel label;
    if (cfg.phase_detection()) {
      label.phase = j;
    } else {
      label.detection = j;
    }
    // |k> -> T_k <d_j|k> |phi_k>
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 0; k < d; ++k) y(k, k) = t[static_cast<std::size_t>(k)] * std::conj(basis(k, j));
    out.push_back({label, {a, b, y}});
    for (int i = 0; i < d; ++i) {
      if (std::abs(r[static_cast<std::size_t>(i)]) == 0.0) continue;
      OutcomeLabel lost = label;
      lost.c_click = i;
      // The photon in b_i leaves through c_i with amplitude -conj(R_i).
      Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(1, d);
      z(0, i) = -std::conj(r[static_cast<std::size_t>(i)]) * std::conj(basis(i, j));
      out.push_back({lost, {a, vac, z}});
    }
  }
  return out;
}

std::vector<KrausOutcome> b_to_a_outcomes(const ConverterConfig& cfg) {
  cfg.validate();
  const int d = cfg.N + 1;
  const auto t = cfg.transmittances();
  const auto r = cfg.reflectances();
  const Eigen::VectorXcd psi = cfg.detection_amplitudes();
  const auto a = cfg.a_space();
  const auto b = cfg.b_space();
  std::vector<KrausOutcome> out;
  for (int j = 0; j < d; ++j) {
    OutcomeLabel label;
    label.b_click = j;
    // |phi_k> -> conj(T_k) <k-j|Psi> |k-j>
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 0; k < d; ++k) {
      const int i = wrap(k - j, d);
      y(i, k) = std::conj(t[static_cast<std::size_t>(k)]) * psi(i);
    }
    out.push_back({label, {b, a, y}});
  }
  for (int j = 0; j < d; ++j) {
    if (std::abs(r[static_cast<std::size_t>(j)]) == 0.0) continue;
    OutcomeLabel label;
    label.c_click = j;
    // The photon leaves through c_j; the a-mode keeps the prepared state.
    Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(d, d);
    z.col(j) = std::conj(r[static_cast<std::size_t>(j)]) * psi;
    out.push_back({label, {b, a, z}});
  }
  return out;
}

OutcomeRecord convert_a_to_b(const DensityOperator& rho_a, const ConverterConfig& cfg) {
  const auto outcomes = a_to_b_outcomes(cfg);
  return make_record(a_to_b_success_label(cfg), find_outcome(outcomes, a_to_b_success_label(cfg)).op, rho_a);
}

OutcomeRecord convert_b_to_a(const DensityOperator& rho_b, const ConverterConfig& cfg) {
  const auto outcomes = b_to_a_outcomes(cfg);
  return make_record(b_to_a_success_label(), find_outcome(outcomes, b_to_a_success_label()).op, rho_b);
}

// ---------------------------------------------------------------------------
// Unconditional operation

namespace {

bool all_equal(const std::vector<LinearMap>& ops) {
  for (const auto& op : ops) {
    if ((op.matrix - ops.front().matrix).cwiseAbs().maxCoeff() > kSameOperatorTol) return false;
  }
  return true;
}

UnconditionalResult aggregate(std::vector<OutcomeRecord> branches, const std::vector<LinearMap>& ops,
                              const DensityOperator& rho) {
  UnconditionalResult res;
  res.branches = std::move(branches);
  Eigen::MatrixXcd mix;
  SpacePtr space;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto out = ops[i].apply(rho);
    res.probability += out.trace();
    if (!space) {
      space = out.space();
      mix = out.matrix();
    } else {
      mix += out.matrix();
    }
  }
  if (res.probability > kImpossibleTol) res.state = DensityOperator(space, mix / res.probability);
  if (!ops.empty() && all_equal(ops)) {
    LinearMap eff = ops.front();
    eff.matrix *= std::sqrt(static_cast<double>(ops.size()));
    res.effective_operator = eff;
  }
  return res;
}

void require_phase_zero(const ConverterConfig& cfg, const char* what) {
  const auto* p = std::get_if<PhaseDetection>(&cfg.detection);
  if (!p || p->phi != 0.0) throw ConfigurationError(std::string(what) + ": requires |0_P> preparation");
}

}  // namespace

UnconditionalResult convert_unconditional_a_to_b(const DensityOperator& rho_a, const ConverterConfig& cfg) {
  if (!cfg.phase_detection()) {
    throw ConfigurationError("unconditional conversion requires phase-basis detection");
  }
  return convert_unconditional_a_to_b(rho_a, cfg, a_to_b_outcomes(cfg));
}

UnconditionalResult convert_unconditional_a_to_b(const DensityOperator& rho_a, const ConverterConfig& cfg,
                                                 const std::vector<KrausOutcome>& outcomes) {
  if (!cfg.phase_detection()) {
    throw ConfigurationError("unconditional conversion requires phase-basis detection");
  }
  const auto b = cfg.b_space();
  std::vector<OutcomeRecord> branches;
  std::vector<LinearMap> ops;
  for (int m = 0; m <= cfg.N; ++m) {
    OutcomeLabel label;
    label.phase = m;
    const auto& y = find_outcome(outcomes, label).op;
    // Feed-forward: phase array for the detected offset 2 pi m/(N+1).
    const LinearMap ff{b, b, phase_array(cfg.N, 2.0 * kPi * m / (cfg.N + 1))};
    ops.push_back(y.then(ff));
    branches.push_back(make_record(label, ops.back(), rho_a));
  }
  return aggregate(std::move(branches), ops, rho_a);
}

LinearMap b_to_a_click_operator(const ConverterConfig& cfg, int k) {
  require_phase_zero(cfg, "b_to_a_click_operator");
  OutcomeLabel label;
  label.b_click = k;
  return find_outcome(b_to_a_outcomes(cfg), label).op;
}

namespace {

// Reconversion into the b-modes followed by V_b^k.
LinearMap correction(const ConverterConfig& cfg, int k) {
  const auto iso = cfg.isomorphism();
  return {cfg.a_space(), cfg.b_space(), matrix_power(build_Vb(cfg), k) * iso.matrix};
}

}  // namespace

UnconditionalResult convert_unconditional_b_to_a(const DensityOperator& rho_b, const ConverterConfig& cfg) {
  require_phase_zero(cfg, "convert_unconditional_b_to_a");
  return convert_unconditional_b_to_a(rho_b, cfg, b_to_a_outcomes(cfg));
}

UnconditionalResult convert_unconditional_b_to_a(const DensityOperator& rho_b, const ConverterConfig& cfg,
                                                 const std::vector<KrausOutcome>& outcomes) {
  require_phase_zero(cfg, "convert_unconditional_b_to_a");
  std::vector<OutcomeRecord> branches;
  for (int k = 0; k <= cfg.N; ++k) {
    OutcomeLabel label;
    label.b_click = k;
    branches.push_back(make_record(label, find_outcome(outcomes, label).op, rho_b));
  }
  // Every failed trial is undone exactly, so the retried protocol realizes P^dagger.
  const auto iso = cfg.isomorphism();
  const LinearMap eff{cfg.b_space(), cfg.a_space(), iso.matrix.adjoint()};
  return aggregate(std::move(branches), {eff}, rho_b);
}

TrialStatistics sample_unconditional_b_to_a(const DensityOperator& rho_b, const ConverterConfig& cfg, Rng& rng,
                                            int max_trials) {
  require_phase_zero(cfg, "sample_unconditional_b_to_a");
  if (max_trials <= 0) max_trials = 10 * (cfg.N + 1);
  std::vector<LinearMap> clicks;
  for (int k = 0; k <= cfg.N; ++k) clicks.push_back(b_to_a_click_operator(cfg, k));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  TrialStatistics stats;
  DensityOperator current = rho_b;
  while (stats.trials < max_trials) {
    ++stats.trials;
    std::vector<DensityOperator> outs;
    double u = uniform(rng);
    int fired = cfg.N;
    for (int k = 0; k <= cfg.N; ++k) {
      outs.push_back(clicks[static_cast<std::size_t>(k)].apply(current));
      u -= outs.back().trace();
      if (u < 0.0) {
        fired = k;
        break;
      }
    }
    if (static_cast<int>(outs.size()) <= fired) outs.push_back(clicks[static_cast<std::size_t>(fired)].apply(current));
    stats.clicks.push_back(fired);
    const DensityOperator a_state = outs[static_cast<std::size_t>(fired)].normalized();
    if (fired == 0) {
      stats.success = true;
      stats.output = a_state;
      return stats;
    }
    current = correction(cfg, fired).apply(a_state).normalized();
    stats.restore_fidelities.push_back(fidelity(current, rho_b));
  }
  stats.cap_exceeded = true;
  return stats;
}

TrialSummary summarize_trials(const DensityOperator& rho_b, const ConverterConfig& cfg, int runs,
                              std::uint64_t seed, int max_trials) {
  Rng rng(seed);
  TrialSummary s;
  s.runs = runs;
  std::vector<int> counts;
  for (int i = 0; i < runs; ++i) {
    const auto t = sample_unconditional_b_to_a(rho_b, cfg, rng, max_trials);
    if (t.cap_exceeded) ++s.cap_exceeded;
    if (t.success) {
      ++s.successes;
      counts.push_back(t.trials);
    }
    for (double f : t.restore_fidelities) s.min_restore_fidelity = std::min(s.min_restore_fidelity, f);
  }
  if (!counts.empty()) {
    s.mean_trials = std::accumulate(counts.begin(), counts.end(), 0.0) / static_cast<double>(counts.size());
    double var = 0.0;
    for (int c : counts) var += (c - s.mean_trials) * (c - s.mean_trials);
    if (counts.size() > 1) s.stddev_trials = std::sqrt(var / static_cast<double>(counts.size() - 1));
  }
  return s;
}

}  // namespace kerrconv
