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

#include "kerrconv/oracle.hpp"

#include <cmath>
#include <map>
#include <unsupported/Eigen/MatrixFunctions>

#include "kerrconv/mesh.hpp"

namespace kerrconv::oracle {

namespace {

constexpr double kLeakTol = 1e-12;

using LocalStates = std::map<std::string, Eigen::VectorXcd>;

Eigen::VectorXcd fock(int n, int cutoff) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cutoff + 1);
  v(n) = 1.0;
  return v;
}

// Full circuit on an explicit multimode space.
class DenseSetup {
 public:
  DenseSetup(std::vector<std::string> modes, std::vector<int> cutoffs)
      : space_(FockSpace::build(std::move(modes), std::move(cutoffs))) {}

  void add(const CircuitElement& e) { circuit_.push_back(e); }
  void add(const std::vector<CircuitElement>& es) { circuit_.insert(circuit_.end(), es.begin(), es.end()); }

  const SpacePtr& space() const { return space_; }

  // Product state; modes absent from `local` are in the vacuum.
  Eigen::VectorXcd product(const LocalStates& local) const {
    return product_on(*space_, local);
  }

  Eigen::VectorXcd run(const Eigen::VectorXcd& psi) {
    if (!built_) {
      g_ = circuit_matrix(circuit_, *space_);
      built_ = true;
    }
    return g_ * psi;
  }

  // Bra on a subset of modes given by per-mode vectors.
  StateVector bra(const LocalStates& local) const {
    std::vector<std::string> modes;
    std::vector<int> cutoffs;
    for (const auto& label : space_->modes()) {
      if (!local.count(label)) continue;
      modes.push_back(label);
      cutoffs.push_back(space_->cutoffs()[space_->mode_index(label)]);
    }
    auto sub = FockSpace::build(modes, cutoffs);
    return StateVector(sub, product_on(*sub, local), Normalization::Unnormalized);
  }

  static Eigen::VectorXcd product_on(const FockSpace& space, const LocalStates& local) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(space.dimension()));
    for (std::size_t i = 0; i < space.dimension(); ++i) {
      const auto& occ = space.occupation(i);
      cd amp{1.0};
      for (std::size_t m = 0; m < occ.size() && amp != cd{0.0}; ++m) {
        auto it = local.find(space.modes()[m]);
        if (it == local.end()) {
          if (occ[m] != 0) amp = 0.0;
        } else {
          amp *= it->second(occ[m]);
        }
      }
      v(static_cast<Eigen::Index>(i)) = amp;
    }
    return v;
  }

 private:
  SpacePtr space_;
  std::vector<CircuitElement> circuit_;
  SparseOperator g_;
  bool built_ = false;
};

// Re-indexes a vector on `from` (same modes as `to`) into `to`; weight on
// occupations outside `to` must vanish.
Eigen::VectorXcd reindex(const StateVector& v, const SpacePtr& to) {
  const auto& from = *v.space();
  if (from.modes() != to->modes()) throw SpaceMismatch("oracle: output modes " + from.describe());
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(to->dimension()));
  for (std::size_t i = 0; i < from.dimension(); ++i) {
    const cd a = v.amplitudes()(static_cast<Eigen::Index>(i));
    auto j = to->index_of(from.occupation(i));
    if (j) {
      out(static_cast<Eigen::Index>(*j)) = a;
    } else if (std::abs(a) > kLeakTol) {
      throw Error("oracle: output leaves the expected space");
    }
  }
  return out;
}

// Per-mode vectors of a basis state of `source`, embedded with the cutoffs of `dense`.
LocalStates basis_locals(const FockSpace& source, std::size_t index, const FockSpace& dense) {
  LocalStates local;
  const auto& occ = source.occupation(index);
  for (std::size_t m = 0; m < occ.size(); ++m) {
    const auto& label = source.modes()[m];
    local[label] = fock(occ[m], dense.cutoffs()[dense.mode_index(label)]);
  }
  return local;
}

LinearMap extract(DenseSetup& setup, const SpacePtr& source, const LocalStates& prep,
                  const LocalStates& measured, const SpacePtr& target) {
  const auto bra = setup.bra(measured);
  Eigen::MatrixXcd y(static_cast<Eigen::Index>(target->dimension()), static_cast<Eigen::Index>(source->dimension()));
  for (std::size_t n = 0; n < source->dimension(); ++n) {
    LocalStates local = prep;
    for (auto& [label, vec] : basis_locals(*source, n, *setup.space())) local[label] = vec;
    const StateVector out(setup.space(), setup.run(setup.product(local)), Normalization::Unnormalized);
    y.col(static_cast<Eigen::Index>(n)) = reindex(project(out, bra), target);
  }
  return {source, target, y};
}

// Unnormalized state on `keep` after the circuit for input rho (on `source`),
// optionally conditioned on the `measured` projection.
Eigen::MatrixXcd marginal(DenseSetup& setup, const DensityOperator& rho, const LocalStates& prep,
                          const LocalStates& measured, const std::string& keep) {
  const auto& source = *rho.space();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix());
  Eigen::MatrixXcd acc;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double w = es.eigenvalues()(i);
    if (w <= 0.0) continue;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(setup.space()->dimension()));
    for (std::size_t n = 0; n < source.dimension(); ++n) {
      LocalStates local = prep;
      for (auto& [label, vec] : basis_locals(source, n, *setup.space())) local[label] = vec;
      psi += es.eigenvectors()(static_cast<Eigen::Index>(n), i) * setup.product(local);
    }
    StateVector out(setup.space(), setup.run(psi), Normalization::Unnormalized);
    if (!measured.empty()) out = project(out, setup.bra(measured));
    const Eigen::MatrixXcd part = w * partial_trace(out, {keep}).matrix();
    if (acc.size() == 0) {
      acc = part;
    } else {
      acc += part;
    }
  }
  return acc;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<CircuitElement> array(const Eigen::MatrixXcd& u, const std::vector<std::string>& modes) {
  return mesh_elements(synthesize_mesh(u), modes);
}

// W^dagger prod_k exp(i sign kappa_k n_bk n_a) W with explicit meshes.
std::vector<CircuitElement> device(const ConverterConfig& cfg, const std::string& a_mode, double sign) {
  const auto b = cfg.b_labels();
  auto out = array(cfg.W, b);
  for (int k = 0; k <= cfg.N; ++k) {
    out.emplace_back(CrossKerrElement{b[static_cast<std::size_t>(k)], a_mode, sign * cfg.kappas[static_cast<std::size_t>(k)]});
  }
  const auto back = array(cfg.W.adjoint(), b);
  out.insert(out.end(), back.begin(), back.end());
  return out;
}

std::vector<CircuitElement> phase_shifters(int n, double phi, const std::vector<std::string>& b) {
  std::vector<CircuitElement> out;
  for (int k = 0; k <= n; ++k) out.emplace_back(PhaseShifterElement{b[static_cast<std::size_t>(k)], k * phi});
  return out;
}

// Splitter stage; `backward` traverses each splitter in reverse (S^dagger).
std::vector<CircuitElement> splitters(const std::vector<cd>& t, const std::vector<cd>& r,
                                      const std::vector<std::string>& b, const std::vector<std::string>& c,
                                      bool backward) {
  std::vector<CircuitElement> out;
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (backward) {
      out.emplace_back(BeamSplitterElement{b[k], c[k], std::conj(t[k]), -r[k]});
    } else {
      out.emplace_back(BeamSplitterElement{b[k], c[k], t[k], r[k]});
    }
  }
  return out;
}

// Channel occupation vectors: photon in channel k (k < 0: all dark).
LocalStates channels(const std::vector<std::string>& labels, int k) {
  LocalStates s;
  for (std::size_t i = 0; i < labels.size(); ++i) s[labels[i]] = fock(static_cast<int>(i) == k ? 1 : 0, 1);
  return s;
}

LocalStates merge(LocalStates a, const LocalStates& b) {
  for (const auto& [k, v] : b) a[k] = v;
  return a;
}

std::vector<int> cutoffs_for(int n, std::size_t single_modes, std::size_t channels) {
  std::vector<int> c(single_modes, n);
  c.insert(c.end(), channels, 1);
  return c;
}

struct EngineeringParts {
  std::vector<cd> t;
  std::vector<cd> r;
};

EngineeringParts engineering_parts(const EngineeringConfig& cfg) {
  EngineeringParts p;
  for (double t : cfg.effective_T()) {
    p.t.emplace_back(t);
    p.r.emplace_back(std::sqrt(std::max(0.0, 1.0 - t * t)));
  }
  return p;
}

Eigen::VectorXcd aux_state(const EngineeringConfig& cfg) {
  if (cfg.preparation == AuxiliaryPreparation::Vacuum) return fock(0, cfg.N);
  return Eigen::VectorXcd::Constant(cfg.N + 1, 1.0 / std::sqrt(static_cast<double>(cfg.N + 1)));
}

// Setup of the engineering wiring: right converter on a, arrays, left
// converter run backwards onto a'.
DenseSetup engineering_setup(const EngineeringConfig& cfg) {
  const auto conv = cfg.converter();
  const auto b = conv.b_labels();
  const auto c = conv.c_labels();
  DenseSetup s(concat(concat({cfg.a_label, cfg.aux_label}, b), c), cutoffs_for(cfg.N, 2, 2 * b.size()));
  const auto parts = engineering_parts(cfg);
  s.add(device(conv, cfg.a_label, 1.0));
  s.add(phase_shifters(cfg.N, cfg.phi, b));
  s.add(array(cfg.U_R, b));
  if (cfg.include_Tk_stage) s.add(splitters(parts.t, parts.r, b, c, false));
  s.add(array(cfg.U * cfg.U_R.adjoint(), b));
  s.add(device(conv, cfg.aux_label, -1.0));
  return s;
}

// Interchanged wiring: the left converter is the source, light runs
// backwards through the arrays and the right converter.
DenseSetup telemanip_setup(const TelemanipConfig& tcfg) {
  const auto& cfg = tcfg.engineering;
  const auto conv = cfg.converter();
  const auto b = conv.b_labels();
  const auto c = conv.c_labels();
  DenseSetup s(concat(concat({cfg.a_label, cfg.aux_label}, b), c), cutoffs_for(cfg.N, 2, 2 * b.size()));
  const auto parts = engineering_parts(cfg);
  s.add(device(conv, cfg.aux_label, 1.0));
  s.add(array(cfg.U.adjoint(), b));
  s.add(array(cfg.U_R, b));
  if (cfg.include_Tk_stage) s.add(splitters(parts.t, parts.r, b, c, true));
  s.add(array(cfg.U_R.adjoint(), b));
  s.add(phase_shifters(cfg.N, cfg.phi, b));
  s.add(device(conv, cfg.a_label, -1.0));
  return s;
}

template <typename Setup>
std::vector<KrausOutcome> two_converter_outcomes(Setup& s, const EngineeringConfig& cfg) {
  const auto conv = cfg.converter();
  const auto b = conv.b_labels();
  const auto c = conv.c_labels();
  const auto parts = engineering_parts(cfg);
  const LocalStates prep = merge({{cfg.aux_label, aux_state(cfg)}}, channels(b, 0));
  const Eigen::MatrixXcd pb = phase_basis(cfg.N, cfg.phi);
  std::vector<KrausOutcome> out;
  for (int m = 0; m <= cfg.N; ++m) {
    const LocalStates detect{{cfg.a_label, pb.col(m)}};
    for (int k = 0; k <= cfg.N; ++k) {
      OutcomeLabel label;
      label.phase = m;
      label.b_click = k;
      out.push_back({label, extract(s, cfg.a_space(), prep, merge(merge(detect, channels(b, k)), channels(c, -1)),
                                    cfg.aux_space())});
    }
    for (int j = 0; j <= cfg.N; ++j) {
      if (parts.r[static_cast<std::size_t>(j)] == cd{0.0}) continue;
      OutcomeLabel label;
      label.phase = m;
      label.c_click = j;
      out.push_back({label, extract(s, cfg.a_space(), prep, merge(merge(detect, channels(b, -1)), channels(c, j)),
                                    cfg.aux_space())});
    }
  }
  return out;
}

DensityOperator as_state(const SpacePtr& space, const Eigen::MatrixXcd& m) {
  return DensityOperator(space, m, Normalization::Unnormalized);
}

}  // namespace

std::vector<KrausOutcome> a_to_b_outcomes(const ConverterConfig& cfg) {
  cfg.validate();
  const auto b = cfg.b_labels();
  const auto c = cfg.c_labels();
  DenseSetup s(concat(concat({cfg.a_label}, b), c), cutoffs_for(cfg.N, 1, 2 * b.size()));
  s.add(device(cfg, cfg.a_label, 1.0));
  const auto t = cfg.transmittances();
  const auto r = cfg.reflectances();
  s.add(splitters(t, r, b, c, false));
  const Eigen::MatrixXcd basis = cfg.detection_basis();
  const auto vac = FockSpace::build(b, 1, 0);
  const LocalStates prep = channels(b, 0);
  std::vector<KrausOutcome> out;
  for (int j = 0; j <= cfg.N; ++j) {
    OutcomeLabel label;
    if (cfg.phase_detection()) {
      label.phase = j;
    } else {
      label.detection = j;
    }
    const LocalStates detect{{cfg.a_label, basis.col(j)}};
    out.push_back({label, extract(s, cfg.a_space(), prep, merge(detect, channels(c, -1)), cfg.b_space())});
    for (int i = 0; i <= cfg.N; ++i) {
      if (r[static_cast<std::size_t>(i)] == cd{0.0}) continue;
      OutcomeLabel lost = label;
      lost.c_click = i;
      out.push_back({lost, extract(s, cfg.a_space(), prep, merge(detect, channels(c, i)), vac)});
    }
  }
  return out;
}

std::vector<KrausOutcome> b_to_a_outcomes(const ConverterConfig& cfg) {
  cfg.validate();
  const auto b = cfg.b_labels();
  const auto c = cfg.c_labels();
  DenseSetup s(concat(concat({cfg.a_label}, b), c), cutoffs_for(cfg.N, 1, 2 * b.size()));
  const auto t = cfg.transmittances();
  const auto r = cfg.reflectances();
  s.add(splitters(t, r, b, c, true));
  s.add(device(cfg, cfg.a_label, -1.0));
  const LocalStates prep{{cfg.a_label, cfg.detection_amplitudes()}};
  std::vector<KrausOutcome> out;
  for (int j = 0; j <= cfg.N; ++j) {
    OutcomeLabel label;
    label.b_click = j;
    out.push_back({label, extract(s, cfg.b_space(), prep, merge(channels(b, j), channels(c, -1)), cfg.a_space())});
  }
  for (int j = 0; j <= cfg.N; ++j) {
    if (r[static_cast<std::size_t>(j)] == cd{0.0}) continue;
    OutcomeLabel label;
    label.c_click = j;
    out.push_back({label, extract(s, cfg.b_space(), prep, merge(channels(b, -1), channels(c, j)), cfg.a_space())});
  }
  return out;
}

std::vector<KrausOutcome> engineering_outcomes(const EngineeringConfig& cfg) {
  cfg.validate();
  auto s = engineering_setup(cfg);
  return two_converter_outcomes(s, cfg);
}

std::vector<KrausOutcome> telemanip_outcomes(const TelemanipConfig& cfg) {
  cfg.validate();
  auto s = telemanip_setup(cfg);
  return two_converter_outcomes(s, cfg.engineering);
}

Eigen::MatrixXcd device_matrix(const ConverterConfig& cfg) {
  cfg.validate();
  const auto b = cfg.b_labels();
  std::vector<std::size_t> b_idx(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) b_idx[k] = k + 1;
  const auto space = FockSpace::with_constraints(concat({cfg.a_label}, b), cutoffs_for(cfg.N, 1, b.size()),
                                                 {SectorConstraint{b_idx, 1}});
  return Eigen::MatrixXcd(circuit_matrix(device(cfg, cfg.a_label, 1.0), *space));
}

ReducedStates reduced_states_engineering(const DensityOperator& rho, const EngineeringConfig& cfg) {
  cfg.validate();
  auto s = engineering_setup(cfg);
  const auto b = cfg.converter().b_labels();
  const auto c = cfg.converter().c_labels();
  const LocalStates prep = merge({{cfg.aux_label, aux_state(cfg)}}, channels(b, 0));
  ReducedStates out;
  // Elements after the right converter do not touch a: its full marginal.
  out.rho_red = as_state(cfg.a_space(), marginal(s, rho, prep, {}, cfg.a_label));
  const auto cond = as_state(cfg.aux_space(), marginal(s, rho, prep, merge(channels(b, 0), channels(c, -1)), cfg.aux_label));
  out.probability = cond.trace();
  if (out.probability > kImpossibleTol) out.rho_red_prime = cond.normalized();
  return out;
}

ReducedStates reduced_states_telemanip(const DensityOperator& rho, const TelemanipConfig& tcfg) {
  tcfg.validate();
  const auto& cfg = tcfg.engineering;
  auto s = telemanip_setup(tcfg);
  const auto b = cfg.converter().b_labels();
  const auto c = cfg.converter().c_labels();
  const LocalStates prep = merge({{cfg.aux_label, aux_state(cfg)}}, channels(b, 0));
  ReducedStates out;
  const auto cond = as_state(cfg.a_space(), marginal(s, rho, prep, merge(channels(b, 0), channels(c, -1)), cfg.a_label));
  out.probability = cond.trace();
  if (out.probability > kImpossibleTol) out.rho_red = cond.normalized();
  // Bob's marginal with every outcome of Alice traced out.
  out.rho_red_prime = as_state(cfg.aux_space(), marginal(s, rho, prep, {}, cfg.aux_label));
  return out;
}

Eigen::MatrixXcd vacuum_projected_splitter(cd T, cd R, int cutoff) {
  if (cutoff < 0) throw ConfigurationError("oracle: negative cutoff");
  if (std::abs(std::norm(T) + std::norm(R) - 1.0) > kNormTol) throw ConfigurationError("oracle: |T|^2 + |R|^2 != 1");
  Eigen::Matrix2cd s;
  s << T, R, -std::conj(R), std::conj(T);
  const Eigen::Matrix2cd h = cd(0.0, -1.0) * s.log();

  // Two modes (x_0 = b, x_1 = c) with total photon number <= cutoff; the
  // generator conserves the total, so the truncation is exact.
  std::vector<std::pair<int, int>> basis;
  std::map<std::pair<int, int>, Eigen::Index> index;
  for (int total = 0; total <= cutoff; ++total) {
    for (int nb = total; nb >= 0; --nb) {
      index[{nb, total - nb}] = static_cast<Eigen::Index>(basis.size());
      basis.emplace_back(nb, total - nb);
    }
  }
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto [nb, nc] = basis[static_cast<std::size_t>(col)];
    const int occ[2] = {nb, nc};
    for (int k = 0; k < 2; ++k) {
      for (int l = 0; l < 2; ++l) {
        if (occ[l] == 0) continue;
        int out[2] = {occ[0], occ[1]};
        double amp = std::sqrt(static_cast<double>(out[l]));
        out[l] -= 1;
        amp *= std::sqrt(static_cast<double>(out[k] + 1));
        out[k] += 1;
        g(index.at({out[0], out[1]}), col) += h(k, l) * amp;
      }
    }
  }
  const Eigen::MatrixXcd u = (cd(0.0, 1.0) * g).exp();
  Eigen::MatrixXcd p(cutoff + 1, cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) {
    for (int m = 0; m <= cutoff; ++m) p(m, n) = u(index.at({m, 0}), index.at({n, 0}));
  }
  return p;
}

}  // namespace kerrconv::oracle
