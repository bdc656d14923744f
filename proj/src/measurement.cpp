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

#include "kerrconv/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <tuple>

namespace kerrconv {

namespace {

constexpr double kGolden = 0.6180339887498949;

cd ipow(int j) { return j % 2 == 0 ? cd{j % 4 == 0 ? 1.0 : -1.0} : cd{0.0, (j % 4 == 1) ? 1.0 : -1.0}; }

void check_channel(int k, int n) {
  if (k < 0 || k > n) throw ConfigurationError("measurement: channel index out of range");
}

}  // namespace

// ---------------------------------------------------------------------------
// Probe channel

ProbeChannel::ProbeChannel(const DensityOperator& rho) {
  if (rho.space()->num_modes() != 1) throw SpaceMismatch("ProbeChannel: expected a single-mode state");
  n_ = rho.space()->cutoffs()[0];
  ConverterConfig cfg = ConverterConfig::canonical(n_);
  cfg.a_label = rho.space()->modes()[0];
  const auto rec = convert_a_to_b(rho, cfg);
  sigma_b_ = rec.post_state->matrix();
}

Eigen::VectorXd ProbeChannel::signals(const Eigen::MatrixXcd& u) const {
  ++evaluations_;
  const Eigen::MatrixXcd out = u * sigma_b_ * u.adjoint();
  return out.diagonal().real().cwiseMax(0.0);
}

double ProbeChannel::signal(const Eigen::MatrixXcd& u, int k) const {
  check_channel(k, n_);
  ++evaluations_;
  const Eigen::RowVectorXcd row = u.row(k);
  return std::max(0.0, (row * sigma_b_ * row.adjoint())(0, 0).real());
}

std::vector<long> ProbeChannel::sample_counts(const Eigen::MatrixXcd& u, long shots, Rng& rng) const {
  const Eigen::VectorXd p = signals(u);
  std::vector<long> counts(static_cast<std::size_t>(n_ + 1), 0);
  long remaining = shots;
  double rest = p.sum();
  for (int k = 0; k <= n_ && remaining > 0; ++k) {
    if (k == n_ || rest <= 0.0) {
      counts[static_cast<std::size_t>(k)] = remaining;
      break;
    }
    const double q = std::clamp(p(k) / rest, 0.0, 1.0);
    std::binomial_distribution<long> binom(remaining, q);
    const long c = binom(rng);
    counts[static_cast<std::size_t>(k)] = c;
    remaining -= c;
    rest -= p(k);
  }
  return counts;
}

Eigen::VectorXd ProbeChannel::sampled_signals(const Eigen::MatrixXcd& u, long shots, Rng& rng) const {
  const auto counts = sample_counts(u, shots, rng);
  Eigen::VectorXd f(n_ + 1);
  for (int k = 0; k <= n_; ++k) f(k) = static_cast<double>(counts[static_cast<std::size_t>(k)]) / shots;
  return f;
}

double overlap_probe(const DensityOperator& rho, const EngineeringConfig& cfg, int k) {
  check_channel(k, cfg.N);
  EngineeringConfig probe = cfg;
  probe.preparation = AuxiliaryPreparation::Vacuum;
  OutcomeLabel label;
  label.phase = 0;
  label.b_click = k;
  return make_record(label, engineering_operator(probe, label), rho).probability;
}

double overlap_probe_conditional(const DensityOperator& rho, const EngineeringConfig& cfg, int k) {
  EngineeringConfig probe = cfg;
  probe.preparation = AuxiliaryPreparation::Vacuum;
  double p_phi = 0.0;
  for (const auto& o : engineering_outcomes(probe)) {
    if (o.label.phase == 0) p_phi += o.op.apply(rho).trace();
  }
  return overlap_probe(rho, probe, k) / p_phi;
}

Eigen::VectorXd unconditional_probe(const DensityOperator& rho, const EngineeringConfig& cfg) {
  EngineeringConfig probe = cfg;
  probe.preparation = AuxiliaryPreparation::Vacuum;
  probe.validate();
  const int n = cfg.N;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n + 1);
  for (int m = 0; m <= n; ++m) {
    // U_{Phi~} feed-forward cancels the phase offset of outcome m.
    const Eigen::MatrixXcd ff = phase_array(n, 2.0 * kPi * m / (n + 1));
    for (int k = 0; k <= n; ++k) {
      OutcomeLabel label;
      label.phase = m;
      label.b_click = k;
      const LinearMap y = engineering_operator(probe, label);
      const LinearMap corrected{y.source, y.target, y.matrix * ff};
      p(k) += corrected.apply(rho).trace();
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Observables

ObservableDecomposition decompose_observable(const Eigen::MatrixXcd& z) {
  if (z.rows() != z.cols()) throw SpaceMismatch("decompose_observable: matrix must be square");
  ObservableDecomposition d;
  d.Z = z;
  d.parts[0] = 0.5 * (z + z.adjoint());
  d.parts[1] = (z - z.adjoint()) / cd(0.0, 2.0);
  for (int j = 0; j < 2; ++j) {
    const Eigen::MatrixXcd h = 0.5 * (d.parts[j] + d.parts[j].adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    d.values[j] = es.eigenvalues();
    d.basis[j] = es.eigenvectors().adjoint();
  }
  return d;
}

cd expectation(const Eigen::MatrixXcd& z, const ProbeChannel& probe) {
  if (z.rows() != probe.order() + 1 || z.cols() != probe.order() + 1) {
    throw SpaceMismatch("expectation: operator size does not match the probed state");
  }
  const auto d = decompose_observable(z);
  cd total{0.0};
  for (int j = 0; j < 2; ++j) {
    const Eigen::VectorXd p = probe.signals(d.basis[j]);
    total += ipow(j) * d.values[j].dot(p);
  }
  return total;
}

Eigen::MatrixXcd symmetric_splitter(int n_order, int n, int m, int j) {
  check_channel(n, n_order);
  check_channel(m, n_order);
  if (n == m) throw ConfigurationError("symmetric_splitter: channels must differ");
  Eigen::MatrixXcd udag = Eigen::MatrixXcd::Identity(n_order + 1, n_order + 1);
  const double s = 1.0 / std::sqrt(2.0);
  udag(n, n) = s;
  udag(m, m) = s;
  udag(m, n) = ipow(j) * s;
  udag(n, m) = -ipow(4 - j % 4) * s;
  return udag.adjoint();
}

namespace {

cd element_from_signals(const std::array<Eigen::VectorXd, 2>& p, int m, int n) {
  cd value{0.0};
  for (int j = 0; j < 2; ++j) value += ipow(j) * 0.5 * (p[j](n) - p[j](m));
  return value;
}

}  // namespace

cd matrix_element(const ProbeChannel& probe, int m, int n) {
  const int order = probe.order();
  check_channel(m, order);
  check_channel(n, order);
  if (m == n) return probe.signal(Eigen::MatrixXcd::Identity(order + 1, order + 1), n);
  std::array<Eigen::VectorXd, 2> p;
  for (int j = 0; j < 2; ++j) p[j] = probe.signals(symmetric_splitter(order, n, m, j));
  return element_from_signals(p, m, n);
}

Eigen::MatrixXcd reconstruct_fock_matrix(const ProbeChannel& probe, const ReconstructionSettings& settings) {
  const int order = probe.order();
  const int d = order + 1;
  Rng rng(settings.seed);
  auto measure = [&](const Eigen::MatrixXcd& u) {
    if (settings.mode == ProbeMode::Analytic) return probe.signals(u);
    return probe.sampled_signals(u, settings.shots, rng);
  };
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  const Eigen::VectorXd diag = measure(Eigen::MatrixXcd::Identity(d, d));
  for (int k = 0; k < d; ++k) rho(k, k) = diag(k);
  for (int n = 0; n < d; ++n) {
    for (int m = n + 1; m < d; ++m) {
      std::array<Eigen::VectorXd, 2> p;
      for (int j = 0; j < 2; ++j) p[j] = measure(symmetric_splitter(order, n, m, j));
      const cd value = element_from_signals(p, m, n);  // <m|rho|n>
      rho(m, n) = value;
      rho(n, m) = std::conj(value);
    }
  }
  return rho;
}

// ---------------------------------------------------------------------------
// Experimental diagonalization

Eigen::MatrixXcd channel_splitter(int n_order, int i, int j, double theta, double phi) {
  check_channel(i, n_order);
  check_channel(j, n_order);
  if (i == j) throw ConfigurationError("channel_splitter: channels must differ");
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(n_order + 1, n_order + 1);
  const cd t = std::cos(theta);
  const cd r = std::polar(std::sin(theta), phi);
  b(i, i) = t;
  b(i, j) = r;
  b(j, i) = -std::conj(r);
  b(j, j) = std::conj(t);
  return b;
}

namespace {

// Reads detector `channel` with the array `u` in place.
using SignalFn = std::function<double(const Eigen::MatrixXcd& u, int channel)>;

// Maximizes g over one angle: an equidistant grid over the period brackets
// the optimum, golden-section search refines it. Returns (x, g(x)); the
// start point is kept unless something strictly better is found.
std::pair<double, double> tune_angle(const std::function<double(double)>& g, double x0, double g0,
                                     const OptimizerSettings& settings) {
  const double period = 2.0 * kPi;
  const int grid = std::max(3, settings.grid_points);
  double best_x = x0;
  double best_g = g0;
  for (int j = 1; j < grid; ++j) {
    const double x = x0 + period * j / grid;
    const double v = g(x);
    if (v > best_g) {
      best_g = v;
      best_x = x;
    }
  }
  double lo = best_x - period / grid;
  double hi = best_x + period / grid;
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double g1 = g(x1);
  double g2 = g(x2);
  while (hi - lo > settings.angle_tolerance) {
    if (g1 < g2) {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + kGolden * (hi - lo);
      g2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - kGolden * (hi - lo);
      g1 = g(x1);
    }
  }
  if (g1 > best_g) {
    best_g = g1;
    best_x = x1;
  }
  if (g2 > best_g) {
    best_g = g2;
    best_x = x2;
  }
  best_x = std::fmod(best_x, period);
  if (best_x < 0.0) best_x += period;
  return {best_x, best_g};
}

// Tunes the sub-array acting on channels k..N in front of `frozen`.
TuningState tune_stage(int n, int k, const Eigen::MatrixXcd& frozen, const SignalFn& signal,
                       const OptimizerSettings& settings, double tolerance, Eigen::MatrixXcd& sub) {
  const double sign = settings.direction == OptimizationDirection::Maximize ? 1.0 : -1.0;
  TuningState st;
  st.stage = k;
  sub = Eigen::MatrixXcd::Identity(n + 1, n + 1);
  double stage_value = sign * signal(frozen, k);

  for (st.cycles = 0; st.cycles < settings.max_cycles;) {
    const double start = stage_value;
    for (int i = k; i < n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        const Eigen::MatrixXcd current = sub * frozen;
        double theta = 0.0;
        double phi = 0.0;
        double value = sign * signal(current, i);
        const double initial = value;
        // theta, phi, theta: phi has no effect until theta leaves zero.
        for (int pass = 0; pass < 3; ++pass) {
          if (pass % 2 == 0) {
            auto g = [&](double x) { return sign * signal(channel_splitter(n, i, j, x, phi) * current, i); };
            std::tie(theta, value) = tune_angle(g, theta, value, settings);
          } else {
            auto g = [&](double x) { return sign * signal(channel_splitter(n, i, j, theta, x) * current, i); };
            std::tie(phi, value) = tune_angle(g, phi, value, settings);
          }
        }
        if (value <= initial) continue;
        sub = channel_splitter(n, i, j, theta, phi) * sub;
        st.splitters.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), std::cos(theta),
                                std::polar(std::sin(theta), phi)});
        st.angles.push_back(theta);
        st.angles.push_back(phi);
        if (i == k) stage_value = value;
      }
    }
    ++st.cycles;
    st.history.push_back(sign * stage_value);
    if (stage_value - start < tolerance) {
      st.best_signal = sign * stage_value;
      st.status = TuningStatus::Converged;
      return st;
    }
  }
  st.best_signal = sign * stage_value;
  st.status = TuningStatus::BudgetExhausted;
  return st;
}

double shot_tolerance(const OptimizerSettings& settings) {
  if (settings.mode == ProbeMode::Analytic) return settings.tolerance;
  // Three standard deviations of a relative frequency at p = 1/2.
  return std::max(settings.tolerance, 3.0 * 0.5 / std::sqrt(static_cast<double>(settings.shots_per_evaluation)));
}

}  // namespace

Eigen::MatrixXcd DiagonalizationResult::reconstructed() const {
  return U.adjoint() * eigenvalues.cast<cd>().asDiagonal() * U;
}

DiagonalizationResult diagonalize_experimentally(const ProbeChannel& probe, const OptimizerSettings& settings) {
  const int n = probe.order();
  const long evals_before = probe.evaluations();
  Rng rng(settings.seed);
  const double tol = shot_tolerance(settings);
  DiagonalizationResult res;
  res.U = Eigen::MatrixXcd::Identity(n + 1, n + 1);
  res.eigenvalues = Eigen::VectorXd::Zero(n + 1);

  const SignalFn read = [&](const Eigen::MatrixXcd& u, int k) {
    if (settings.mode == ProbeMode::Analytic) return probe.signal(u, k);
    return probe.sampled_signals(u, settings.shots_per_evaluation, rng)(k);
  };

  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXcd sub;
    TuningState st = tune_stage(n, k, res.U, read, settings, tol, sub);
    res.stages.push_back(sub);
    res.U = sub * res.U;
    res.eigenvalues(k) = read(res.U, k);
    if (st.status == TuningStatus::BudgetExhausted) res.status = TuningStatus::BudgetExhausted;
    res.tuning.push_back(std::move(st));
  }
  // The last channel needs no tuning: its signal is read off directly.
  res.eigenvalues(n) = read(res.U, n);
  res.evaluations = probe.evaluations() - evals_before;
  return res;
}

PurificationResult qnd_purify(const DensityOperator& rho, const OptimizerSettings& settings) {
  if (rho.space()->num_modes() != 1) throw SpaceMismatch("qnd_purify: expected a single-mode state");
  const int n = rho.space()->cutoffs()[0];
  const double d = n + 1;
  Rng rng(settings.seed);
  auto config = [&](const Eigen::MatrixXcd& u_r) {
    EngineeringConfig cfg = EngineeringConfig::projective(u_r, 0);
    cfg.a_label = rho.space()->modes()[0];
    return cfg;
  };
  // With the phase detector at its nominal value, a b_0 click has
  // probability (N+1)^{-2} <0|U_R rho U_R^dagger|0> and a click in the loss
  // channel c_i has (N+1)^{-1} <i|U_R rho U_R^dagger|i>.
  const SignalFn read = [&](const Eigen::MatrixXcd& u_r, int i) {
    OutcomeLabel label;
    label.phase = 0;
    double scale = d;
    if (i == 0) {
      label.b_click = 0;
      scale = d * d;
    } else {
      label.c_click = i;
    }
    const double p = std::clamp(engineering_operator(config(u_r), label).apply(rho).trace(), 0.0, 1.0);
    if (settings.mode == ProbeMode::Analytic) return p * scale;
    std::binomial_distribution<long> binom(settings.shots_per_evaluation, p);
    return static_cast<double>(binom(rng)) / static_cast<double>(settings.shots_per_evaluation) * scale;
  };
  OptimizerSettings maximize = settings;
  maximize.direction = OptimizationDirection::Maximize;
  PurificationResult res;
  Eigen::MatrixXcd u_r;
  res.tuning = tune_stage(n, 0, Eigen::MatrixXcd::Identity(n + 1, n + 1), read, maximize, shot_tolerance(settings), u_r);
  res.status = res.tuning.status;
  const auto cfg = config(u_r);
  const auto rec = run_engineering(rho, cfg);
  res.U_R = u_r;
  res.probability = rec.probability;
  res.fidelity_estimate = rec.probability * d * d;
  res.output_vector = u_r.adjoint().col(0);
  res.output = rec.post_state;
  return res;
}

}  // namespace kerrconv
