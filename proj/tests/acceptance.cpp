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

// Standalone acceptance run: one PASS/FAIL line per criterion, nonzero exit
// status if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "kerrconv/converter.hpp"
#include "kerrconv/engineering.hpp"
#include "kerrconv/measurement.hpp"
#include "kerrconv/optics.hpp"
#include "kerrconv/oracle.hpp"
#include "kerrconv/telemanip.hpp"
#include "support.hpp"

namespace kerrconv {
namespace {

using testing::max_abs;
using testing::trace_norm_distance;

/// Tracks the worst deviation seen against a bound.
class Check {
 public:
  void near(double value, double expected, double tol, const std::string& what) {
    bound(std::abs(value - expected), tol, what);
  }
  void bound(double deviation, double tol, const std::string& what) {
    worst_ = std::max(worst_, deviation / tol);
    if (!(deviation <= tol) && failure_.empty()) {
      std::ostringstream s;
      s << what << " deviates by " << deviation << " (tol " << tol << ")";
      failure_ = s.str();
    }
  }
  void require(bool ok, const std::string& what) {
    if (!ok && failure_.empty()) failure_ = what;
  }
  bool passed() const { return failure_.empty(); }
  std::string summary() const {
    if (!passed()) return failure_;
    std::ostringstream s;
    s << "worst deviation " << worst_ << " of tolerance";
    return s.str();
  }

 private:
  double worst_ = 0.0;
  std::string failure_;
};

Eigen::VectorXd spectrum_descending(const Eigen::MatrixXcd& m) {
  Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m).eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
  return ev;
}

DensityOperator fock_diagonal(const SpacePtr& space, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd w(static_cast<Eigen::Index>(space->dimension()));
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = u(rng) + 1e-3;
  w /= w.sum();
  return DensityOperator(space, w.cast<cd>().asDiagonal().toDenseMatrix());
}

void conversion_probability(Check& c) {
  Rng rng(1001);
  for (int n = 1; n <= 4; ++n) {
    const auto cfg = ConverterConfig::canonical(n, 0.3 * n);
    const auto iso = cfg.isomorphism();
    for (int t = 0; t < 50; ++t) {
      const auto rho = testing::random_input(cfg.a_space(), rng, t);
      c.near(convert_a_to_b(rho, cfg).probability, 1.0 / (n + 1), 1e-12, "forward probability");
      c.near(convert_b_to_a(lift_state(rho, iso), cfg).probability, 1.0 / (n + 1), 1e-12, "backward probability");
    }
  }
}

void conversion_fidelity(Check& c) {
  Rng rng(1002);
  for (int n = 1; n <= 4; ++n) {
    const auto cfg = ConverterConfig::canonical(n);
    const auto iso = cfg.isomorphism();
    for (int t = 0; t < 50; ++t) {
      const auto psi = random_state(cfg.a_space(), rng);
      const auto rho = DensityOperator::pure(psi);
      const auto fwd = convert_a_to_b(rho, cfg);
      c.require(fwd.post_state.has_value(), "forward conversion impossible");
      c.near(fidelity(lift_state(psi, iso), *fwd.post_state), 1.0, 1e-12, "forward fidelity");
      const auto back = convert_b_to_a(*fwd.post_state, cfg);
      c.require(back.post_state.has_value(), "backward conversion impossible");
      c.near(fidelity(psi, *back.post_state), 1.0, 1e-12, "round-trip fidelity");
      const auto mixed = random_density(cfg.a_space(), rng);
      c.bound(max_abs(convert_a_to_b(mixed, cfg).post_state->matrix() - lift_state(mixed, iso).matrix()), 1e-12,
              "mixed forward image");
    }
  }
}

void appendix_identity(Check& c) {
  Rng rng(1003);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const int cutoff = t % 7;
    const cd tt = std::polar(u(rng), 2 * kPi * u(rng));
    const cd rr = std::polar(std::sqrt(1.0 - std::norm(tt)), 2 * kPi * u(rng));
    Eigen::VectorXcd powers(cutoff + 1);
    for (int k = 0; k <= cutoff; ++k) powers(k) = std::pow(tt, k);
    const Eigen::MatrixXcd closed = powers.asDiagonal();
    const auto single = FockSpace::build({"b"}, cutoff);
    c.bound(max_abs(vacuum_projected_splitter(tt, *single) - closed), 1e-12, "projected splitter");
    c.bound(max_abs(oracle::vacuum_projected_splitter(tt, rr, cutoff) - closed), 1e-12, "two-mode splitter");
  }
}

void unconditional_conversion(Check& c) {
  Rng rng(1004);
  for (int n = 1; n <= 4; ++n) {
    const auto cfg = ConverterConfig::canonical(n);
    for (int t = 0; t < 10; ++t) {
      const auto rho = testing::random_input(cfg.a_space(), rng, t);
      const auto fwd = convert_unconditional_a_to_b(rho, cfg);
      c.near(fwd.probability, 1.0, 1e-12, "forward aggregate probability");
      c.bound(max_abs(fwd.state->matrix() - lift_state(rho, cfg.isomorphism()).matrix()), 1e-12,
              "forward aggregate state");
      c.near(convert_unconditional_b_to_a(lift_state(rho, cfg.isomorphism()), cfg).probability, 1.0, 1e-12,
             "backward aggregate probability");
    }
    const auto rho_b = lift_state(random_density(cfg.a_space(), rng), cfg.isomorphism());
    const auto s = summarize_trials(rho_b, cfg, 10000, 2026 + static_cast<std::uint64_t>(n));
    c.require(s.cap_exceeded == 0 && s.successes == s.runs, "repeat-until-success hit its trial cap");
    const double se = s.stddev_trials / std::sqrt(double(s.successes));
    c.bound(std::abs(s.mean_trials - (n + 1)), 3 * se, "mean trial count");
  }
}

void engineering_probabilities(Check& c) {
  Rng rng(1005);
  for (int n = 1; n <= 4; ++n) {
    for (int t = 0; t < 10; ++t) {
      const double tr = 0.2 + 0.08 * t;
      const auto uni = EngineeringConfig::unitary(random_unitary(n + 1, rng), tr);
      const auto rho = testing::random_input(uni.a_space(), rng, t);
      const double p = run_engineering(rho, uni).probability;
      c.near(p, tr * tr / ((n + 1) * (n + 1)), 1e-12, "unitary probability");
      c.near(run_engineering_unconditional(rho, uni).probability, (n + 1) * (n + 1) * p, 1e-12,
             "unconditional gain, unitary");

      const Eigen::MatrixXcd ur = random_unitary(n + 1, rng);
      const int l = t % (n + 1);
      const auto proj = EngineeringConfig::projective(ur, l);
      const double overlap = (ur * rho.matrix() * ur.adjoint())(l, l).real();
      c.near(run_engineering(rho, proj).probability, overlap / ((n + 1) * (n + 1)), 1e-12, "projective probability");

      const auto gen = testing::random_engineering(n, rng);
      const double pg = run_engineering(rho, gen).probability;
      c.near(run_engineering_unconditional(rho, gen).probability, (n + 1) * (n + 1) * pg, 1e-12,
             "unconditional gain, general");
      auto full = gen;
      full.Tk.assign(static_cast<std::size_t>(n + 1), 1.0);
      c.near(run_engineering_unconditional(rho, full).probability, 1.0, 1e-12, "unconditional, full transmission");
    }
  }
}

void compare_outcomes(Check& c, const std::vector<KrausOutcome>& fast, const std::vector<KrausOutcome>& slow,
                      const std::string& what) {
  c.require(fast.size() == slow.size(), what + ": outcome sets differ in size");
  for (const auto& o : fast) {
    const auto& other = find_outcome(slow, o.label);
    c.bound(max_abs(o.op.matrix - other.op.matrix), 1e-10, what + " " + o.label.to_string());
  }
}

void oracle_equivalence(Check& c) {
  Rng rng(1006);
  for (int n = 1; n <= 3; ++n) {
    const auto conv = ConverterConfig::canonical(n, 0.7);
    compare_outcomes(c, a_to_b_outcomes(conv), oracle::a_to_b_outcomes(conv), "forward conversion");
    compare_outcomes(c, b_to_a_outcomes(conv), oracle::b_to_a_outcomes(conv), "backward conversion");
    const auto rho_a = random_density(conv.a_space(), rng);
    const auto rho_b = lift_state(rho_a, conv.isomorphism());
    c.bound(max_abs(convert_unconditional_a_to_b(rho_a, conv).state->matrix() -
                    convert_unconditional_a_to_b(rho_a, conv, oracle::a_to_b_outcomes(conv)).state->matrix()),
            1e-10, "unconditional forward");
    // The retry loop undoes failures with V^k, which presumes the |0_P> preparation.
    const auto zero = ConverterConfig::canonical(n);
    c.bound(max_abs(convert_unconditional_b_to_a(rho_b, zero).state->matrix() -
                    convert_unconditional_b_to_a(rho_b, zero, oracle::b_to_a_outcomes(zero)).state->matrix()),
            1e-10, "unconditional backward");

    for (auto prep : {AuxiliaryPreparation::PhaseState, AuxiliaryPreparation::Vacuum}) {
      auto eng = testing::random_engineering(n, rng);
      eng.preparation = prep;
      const auto slow = oracle::engineering_outcomes(eng);
      compare_outcomes(c, engineering_outcomes(eng), slow, "engineering");
      const auto rho = random_density(eng.a_space(), rng);
      if (prep == AuxiliaryPreparation::PhaseState) {
        c.bound(std::abs(run_engineering_unconditional(rho, eng).probability -
                         run_engineering_unconditional(rho, eng, slow).probability),
                1e-10, "unconditional engineering");
      }
      // Probes are engineering outcomes read out at one b channel.
      if (prep == AuxiliaryPreparation::Vacuum) {
        for (int k = 0; k <= n; ++k) {
          OutcomeLabel lbl;
          lbl.phase = 0;
          lbl.b_click = k;
          const Eigen::MatrixXcd y = find_outcome(slow, lbl).op.matrix;
          const double p = (y * rho.matrix() * y.adjoint()).trace().real();
          c.near(overlap_probe(rho, eng, k), p, 1e-10, "overlap probe");
        }
      }
    }
    const auto eng = testing::random_engineering(n, rng);
    const auto rho = random_density(eng.a_space(), rng);
    const auto fast_rs = reduced_states_engineering(rho, eng);
    const auto slow_rs = oracle::reduced_states_engineering(rho, eng);
    c.bound(max_abs(fast_rs.rho_red->matrix() - slow_rs.rho_red->matrix()), 1e-10, "engineering reduced state");
    c.bound(max_abs(fast_rs.rho_red_prime->matrix() - slow_rs.rho_red_prime->matrix()), 1e-10,
            "engineering reduced state (aux)");

    const auto tel = TelemanipConfig::from(testing::random_engineering(n, rng));
    const auto tslow = oracle::telemanip_outcomes(tel);
    compare_outcomes(c, telemanip_outcomes(tel), tslow, "telemanipulation");
    const auto rho_t = random_density(tel.alice_space(), rng);
    c.bound(max_abs(run_telemanip_unconditional(rho_t, tel).state->matrix() -
                    run_telemanip_unconditional(rho_t, tel, tslow).state->matrix()),
            1e-10, "unconditional telemanipulation");
    const auto tf = reduced_states_telemanip(rho_t, tel);
    const auto ts = oracle::reduced_states_telemanip(rho_t, tel);
    c.bound(max_abs(tf.rho_red->matrix() - ts.rho_red->matrix()), 1e-10, "telemanipulation reduced state");
    c.bound(max_abs(tf.rho_red_prime->matrix() - ts.rho_red_prime->matrix()), 1e-10,
            "telemanipulation reduced state (Bob)");
  }
}

void reconstruction(Check& c) {
  Rng rng(1007);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 3;
    const auto rho = random_density(EngineeringConfig::identity(n).a_space(), rng);
    const auto res = diagonalize_experimentally(ProbeChannel(rho));
    c.require(res.status == TuningStatus::Converged, "tuning did not converge");
    const Eigen::VectorXd exact = spectrum_descending(rho.matrix());
    c.bound((res.eigenvalues - exact).cwiseAbs().maxCoeff(), 1e-6, "spectrum");
    for (int k = 1; k <= n; ++k) c.require(res.eigenvalues(k) <= res.eigenvalues(k - 1) + 1e-12, "spectrum order");
    c.bound(trace_norm_distance(res.reconstructed(), rho.matrix()), 1e-6, "reconstructed state");
  }
  for (int n = 1; n <= 3; ++n) {
    const auto psi = random_state(EngineeringConfig::identity(n).a_space(), rng);
    const auto res = diagonalize_experimentally(ProbeChannel(DensityOperator::pure(psi)));
    c.near(res.eigenvalues(0), 1.0, 1e-6, "pure-state first stage");
  }
  for (int n = 1; n <= 4; ++n) {
    auto eng = testing::random_engineering(n, rng);
    eng.preparation = AuxiliaryPreparation::Vacuum;
    const auto rho = random_density(eng.a_space(), rng);
    const Eigen::VectorXd un = unconditional_probe(rho, eng);
    for (int k = 0; k <= n; ++k) {
      c.near(un(k), (n + 1) * overlap_probe(rho, eng, k), 1e-14, "unconditional probe factor");
    }
  }
}

void telemanipulation(Check& c) {
  Rng rng(1008);
  const auto white = [](int n) { return Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(n + 1, n + 1) / double(n + 1)); };
  for (int n = 1; n <= 4; ++n) {
    for (int t = 0; t < 10; ++t) {
      const auto eng = testing::random_engineering(n, rng);
      const auto tel = TelemanipConfig::from(eng);
      const auto rho = testing::random_input(tel.alice_space(), rng, t);
      c.bound(max_abs(reduced_states_telemanip(rho, tel).rho_red_prime->matrix() - white(n)), 1e-12, "Bob marginal");

      auto conj = eng;
      conj.U = eng.U.conjugate().eval();
      conj.U_R = eng.U_R.conjugate().eval();
      const auto remote = run_telemanip_conditional(rho, tel);
      const auto local = run_engineering(rho, conj);
      c.near(remote.probability, local.probability, 1e-10, "conjugated engineering probability");
      c.bound(max_abs(remote.post_state->matrix() - local.post_state->matrix()), 1e-10, "conjugated engineering state");

      const auto bare = TelemanipConfig::bare(n);
      const auto psi = random_state(bare.alice_space(), rng);
      const auto cond = run_telemanip_conditional(DensityOperator::pure(psi), bare);
      c.near(fidelity(StateVector(cond.post_state->space(), psi.amplitudes()), *cond.post_state), 1.0, 1e-12,
             "conditional teleportation fidelity");
      for (const auto& b : run_telemanip_unconditional(DensityOperator::pure(psi), bare).branches) {
        if (b.impossible()) continue;
        c.near(fidelity(StateVector(b.post_state->space(), psi.amplitudes()), *b.post_state), 1.0, 1e-12,
               "corrected teleportation fidelity");
      }

      const auto diag = fock_diagonal(tel.alice_space(), rng);
      auto full = eng;
      full.Tk.assign(static_cast<std::size_t>(n + 1), 1.0);
      const auto rs = reduced_states_telemanip(diag, TelemanipConfig::from(full));
      c.bound(max_abs(rs.rho_red->matrix() - dephase(diag).matrix()), 1e-12, "dephased transit state");
      c.bound(max_abs(rs.rho_red->matrix() - diag.matrix()), 1e-12, "Fock-diagonal transit state");
      const auto clone = reduced_states_engineering(diag, EngineeringConfig::identity(n));
      c.bound(max_abs(clone.rho_red->matrix() - diag.matrix()), 1e-12, "clone copy");
      c.bound(max_abs(clone.rho_red_prime->matrix() - diag.matrix()), 1e-12, "clone second copy");
    }
  }
}

void completeness(Check& c) {
  Rng rng(1009);
  for (int n = 1; n <= 4; ++n) {
    const auto conv = ConverterConfig::canonical(n, 0.2);
    c.bound(completeness_defect(a_to_b_outcomes(conv)), 1e-10, "forward conversion");
    c.bound(completeness_defect(b_to_a_outcomes(conv)), 1e-10, "backward conversion");
    for (auto prep : {AuxiliaryPreparation::PhaseState, AuxiliaryPreparation::Vacuum}) {
      auto eng = testing::random_engineering(n, rng);
      eng.preparation = prep;
      c.bound(completeness_defect(engineering_outcomes(eng)), 1e-10, "engineering");
      if (n <= 3) c.bound(completeness_defect(oracle::engineering_outcomes(eng)), 1e-10, "engineering (dense)");
    }
    const auto tel = TelemanipConfig::from(testing::random_engineering(n, rng));
    c.bound(completeness_defect(telemanip_outcomes(tel)), 1e-10, "telemanipulation");
    if (n <= 3) {
      c.bound(completeness_defect(oracle::a_to_b_outcomes(conv)), 1e-10, "forward conversion (dense)");
      c.bound(completeness_defect(oracle::b_to_a_outcomes(conv)), 1e-10, "backward conversion (dense)");
      c.bound(completeness_defect(oracle::telemanip_outcomes(tel)), 1e-10, "telemanipulation (dense)");
    }
  }
}

}  // namespace
}  // namespace kerrconv

int main() {
  using Criterion = std::pair<const char*, void (*)(kerrconv::Check&)>;
  const std::vector<Criterion> criteria = {
      {"conversion probability", kerrconv::conversion_probability},
      {"converted-state fidelity", kerrconv::conversion_fidelity},
      {"vacuum-projected splitter identity", kerrconv::appendix_identity},
      {"unconditional conversion", kerrconv::unconditional_conversion},
      {"engineering probabilities", kerrconv::engineering_probabilities},
      {"dense-circuit equivalence", kerrconv::oracle_equivalence},
      {"reconstruction", kerrconv::reconstruction},
      {"telemanipulation", kerrconv::telemanipulation},
      {"completeness", kerrconv::completeness},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    kerrconv::Check check;
    try {
      fn(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %d %s: %s\n", check.passed() ? "PASS" : "FAIL", ++index, name, check.summary().c_str());
    if (!check.passed()) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
