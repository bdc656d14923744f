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

#include "kerrconv/engineering.hpp"

#include <algorithm>
#include <cmath>

#include "kerrconv/polar.hpp"

namespace kerrconv {

namespace {

// Relative gap below which eigenvalues of the positive factor count as degenerate.
constexpr double kDegeneracyTol = 1e-10;

Eigen::MatrixXcd shift_power_adjoint(int n, int k) {
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n + 1, n + 1);
  const Eigen::MatrixXcd s = cyclic_shift(n).adjoint();
  for (int i = 0; i < k; ++i) v = s * v;
  return v;
}

}  // namespace

EngineeringConfig EngineeringConfig::identity(int n) {
  if (n < 0) throw ConfigurationError("engineering: N must be non-negative");
  EngineeringConfig cfg;
  cfg.N = n;
  cfg.U = Eigen::MatrixXcd::Identity(n + 1, n + 1);
  cfg.U_R = cfg.U;
  cfg.Tk.assign(static_cast<std::size_t>(n + 1), 1.0);
  return cfg;
}

EngineeringConfig EngineeringConfig::unitary(const Eigen::MatrixXcd& u, double t) {
  EngineeringConfig cfg = identity(static_cast<int>(u.rows()) - 1);
  cfg.U = u;
  cfg.Tk.assign(cfg.Tk.size(), t);
  cfg.validate();
  return cfg;
}

EngineeringConfig EngineeringConfig::projective(const Eigen::MatrixXcd& u_r, int l) {
  EngineeringConfig cfg = identity(static_cast<int>(u_r.rows()) - 1);
  cfg.U_R = u_r;
  if (l < 0 || l > cfg.N) throw ConfigurationError("engineering: projection channel out of range");
  std::fill(cfg.Tk.begin(), cfg.Tk.end(), 0.0);
  cfg.Tk[static_cast<std::size_t>(l)] = 1.0;
  cfg.validate();
  return cfg;
}

void EngineeringConfig::validate() const {
  if (N < 0) throw ConfigurationError("engineering: N must be non-negative");
  const auto d = static_cast<Eigen::Index>(N + 1);
  if (U.rows() != d || U.cols() != d || U_R.rows() != d || U_R.cols() != d) {
    throw ConfigurationError("engineering: arrays must be (N+1)x(N+1)");
  }
  require_unitary(U, "engineering U");
  require_unitary(U_R, "engineering U_R");
  if (Tk.size() != static_cast<std::size_t>(N + 1)) {
    throw ConfigurationError("engineering: expected N+1 transmittances");
  }
  bool any = false;
  for (double t : Tk) {
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigurationError("engineering: T_k must lie in [0, 1]");
    any = any || t > 0.0;
  }
  if (include_Tk_stage && !any) throw ConfigurationError("engineering: all T_k vanish (A = 0)");
}

std::vector<double> EngineeringConfig::effective_T() const {
  if (!include_Tk_stage) return std::vector<double>(static_cast<std::size_t>(N + 1), 1.0);
  return Tk;
}

Eigen::MatrixXcd EngineeringConfig::R_b() const {
  const auto t = effective_T();
  Eigen::VectorXcd d(N + 1);
  for (int k = 0; k <= N; ++k) d(k) = t[static_cast<std::size_t>(k)];
  return U_R.adjoint() * d.asDiagonal() * U_R;
}

Eigen::MatrixXcd EngineeringConfig::A_b() const { return U * R_b(); }

SpacePtr EngineeringConfig::a_space() const { return source_space(N, a_label); }
SpacePtr EngineeringConfig::aux_space() const { return source_space(N, aux_label); }
SpacePtr EngineeringConfig::b_space() const { return sector_space(N, b_prefix); }

ConverterConfig EngineeringConfig::converter() const {
  ConverterConfig c = ConverterConfig::canonical(N, phi);
  c.a_label = a_label;
  c.b_prefix = b_prefix;
  c.c_prefix = c_prefix;
  return c;
}

Eigen::MatrixXcd build_target_operator(const EngineeringConfig& cfg) {
  cfg.validate();
  // P^dagger A_b P with the colexicographic bases is the same matrix.
  return cfg.A_b();
}

TargetDecomposition decompose_target(const Eigen::MatrixXcd& a) {
  const PolarFactors f = polar_decompose(a);
  const int n = static_cast<int>(a.rows()) - 1;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(f.positive);
  // Descending order; degenerate eigenspaces get a canonical basis.
  const Eigen::Index d = a.rows();
  Eigen::VectorXd vals = es.eigenvalues().reverse();
  Eigen::MatrixXcd vecs = es.eigenvectors().rowwise().reverse();
  const double top = vals(0);
  for (Eigen::Index start = 0; start < d;) {
    Eigen::Index end = start + 1;
    while (end < d && vals(start) - vals(end) <= kDegeneracyTol * top) ++end;
    if (end - start > 1) vecs.middleCols(start, end - start) = canonical_subspace_basis(vecs.middleCols(start, end - start));
    start = end;
  }

  TargetDecomposition out;
  out.config = EngineeringConfig::identity(n);
  out.config.U = f.unitary;
  bool scalar = (vals(0) - vals(d - 1)) <= kDegeneracyTol * top;
  out.config.U_R = scalar ? Eigen::MatrixXcd::Identity(d, d) : Eigen::MatrixXcd(vecs.adjoint());
  for (Eigen::Index k = 0; k < d; ++k) {
    out.config.Tk[static_cast<std::size_t>(k)] = scalar ? 1.0 : std::clamp(vals(k) / top, 0.0, 1.0);
  }
  out.scale = f.trace_norm * f.det_phase;
  out.realization_factor = top;
  out.config.validate();
  return out;
}

OutcomeLabel engineering_success_label() {
  OutcomeLabel l;
  l.phase = 0;
  l.b_click = 0;
  return l;
}

namespace {

Eigen::VectorXcd aux_preparation(const EngineeringConfig& cfg) {
  Eigen::VectorXcd prep = Eigen::VectorXcd::Zero(cfg.N + 1);
  if (cfg.preparation == AuxiliaryPreparation::PhaseState) {
    prep.setConstant(1.0 / std::sqrt(static_cast<double>(cfg.N + 1)));
  } else {
    prep(0) = 1.0;
  }
  return prep;
}

double reflectance(const EngineeringConfig& cfg, int j) {
  const double t = cfg.effective_T()[static_cast<std::size_t>(j)];
  return std::sqrt(std::max(0.0, 1.0 - t * t));
}

// Right converter with phase outcome m followed by U_Phi:
// (N+1)^{-1/2} U_{2 pi m/(N+1)}^dagger P.
Eigen::MatrixXcd right_converter(int n, int m) {
  const double d = n + 1;
  return phase_array(n, 2.0 * kPi * m / d).adjoint() / std::sqrt(d);
}

Eigen::MatrixXcd outcome_matrix(const EngineeringConfig& cfg, const OutcomeLabel& label) {
  const int n = cfg.N;
  if (!label.phase || *label.phase < 0 || *label.phase > n || label.detection ||
      label.b_click.has_value() == label.c_click.has_value()) {
    throw ConfigurationError("engineering: no outcome labelled " + label.to_string());
  }
  const Eigen::MatrixXcd right = right_converter(n, *label.phase);
  const Eigen::VectorXcd prep = aux_preparation(cfg);
  if (label.b_click) {
    const int k = *label.b_click;
    if (k < 0 || k > n) throw ConfigurationError("engineering: click channel out of range");
    const Eigen::MatrixXcd middle = cfg.A_b() * right;
    if (cfg.preparation == AuxiliaryPreparation::PhaseState) {
      // Backward converter with |0_P'>: (N+1)^{-1/2} P'^dagger V_b^{dagger k}.
      return shift_power_adjoint(n, k) * middle / std::sqrt(static_cast<double>(n + 1));
    }
    // With a' in vacuum the backward converter acts trivially.
    return prep * middle.row(k);
  }
  const int j = *label.c_click;
  if (j < 0 || j > n) throw ConfigurationError("engineering: loss channel out of range");
  // The photon leaves through c_j with amplitude -R_j; a' keeps its preparation.
  return -reflectance(cfg, j) * prep * (cfg.U_R * right).row(j);
}

}  // namespace

LinearMap engineering_operator(const EngineeringConfig& cfg, const OutcomeLabel& label) {
  cfg.validate();
  return {cfg.a_space(), cfg.aux_space(), outcome_matrix(cfg, label)};
}

std::vector<KrausOutcome> engineering_outcomes(const EngineeringConfig& cfg) {
  cfg.validate();
  std::vector<KrausOutcome> out;
  for (int m = 0; m <= cfg.N; ++m) {
    for (int k = 0; k <= cfg.N; ++k) {
      OutcomeLabel label;
      label.phase = m;
      label.b_click = k;
      out.push_back({label, {cfg.a_space(), cfg.aux_space(), outcome_matrix(cfg, label)}});
    }
    for (int j = 0; j <= cfg.N; ++j) {
      if (reflectance(cfg, j) == 0.0) continue;
      OutcomeLabel label;
      label.phase = m;
      label.c_click = j;
      out.push_back({label, {cfg.a_space(), cfg.aux_space(), outcome_matrix(cfg, label)}});
    }
  }
  return out;
}

OutcomeRecord run_engineering(const DensityOperator& rho, const EngineeringConfig& cfg) {
  const auto label = engineering_success_label();
  return make_record(label, engineering_operator(cfg, label), rho);
}

UnconditionalResult run_engineering_unconditional(const DensityOperator& rho, const EngineeringConfig& cfg) {
  return run_engineering_unconditional(rho, cfg, engineering_outcomes(cfg));
}

UnconditionalResult run_engineering_unconditional(const DensityOperator& rho, const EngineeringConfig& cfg,
                                                  const std::vector<KrausOutcome>& outcomes) {
  cfg.validate();
  if (cfg.preparation != AuxiliaryPreparation::PhaseState) {
    throw ConfigurationError("unconditional engineering requires |0_P'> preparation");
  }
  const int n = cfg.N;
  const Eigen::MatrixXcd shift = cyclic_shift(n);
  UnconditionalResult res;
  std::vector<LinearMap> ops;
  for (int m = 0; m <= n; ++m) {
    // Feed-forward: U_{Phi~} in place of U_Phi undoes the phase offset of outcome m.
    const Eigen::MatrixXcd ff = phase_array(n, 2.0 * kPi * m / (n + 1));
    Eigen::MatrixXcd undo = Eigen::MatrixXcd::Identity(n + 1, n + 1);
    for (int k = 0; k <= n; ++k) {
      OutcomeLabel label;
      label.phase = m;
      label.b_click = k;
      const auto& y = find_outcome(outcomes, label).op;
      // A click in b_k is undone by reconversion, V_b^k and a new backward trial.
      LinearMap op{y.source, y.target, undo * y.matrix * ff};
      res.branches.push_back(make_record(label, op, rho));
      res.probability += res.branches.back().probability;
      ops.push_back(std::move(op));
      undo = shift * undo;
    }
  }
  for (const auto& op : ops) {
    if ((op.matrix - ops.front().matrix).cwiseAbs().maxCoeff() > 1e-12) {
      throw Error("unconditional engineering: corrected branches disagree");
    }
  }
  const LinearMap upsilon{cfg.a_space(), cfg.aux_space(), cfg.A_b()};
  const auto out = upsilon.apply(rho);
  if (out.trace() > kImpossibleTol) res.state = out.normalized();
  res.effective_operator = upsilon;
  return res;
}

}  // namespace kerrconv
