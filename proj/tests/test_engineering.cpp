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

#include <gtest/gtest.h>

#include <algorithm>

#include "kerrconv/engineering.hpp"
#include "kerrconv/oracle.hpp"
#include "kerrconv/telemanip.hpp"
#include "support.hpp"

namespace kerrconv {
namespace {

using testing::max_abs;

Eigen::MatrixXcd normalized(const Eigen::MatrixXcd& m) { return m / m.trace().real(); }

TEST(TargetOperator, IdentityConfigurationGivesIdentity) {
  EXPECT_LT(max_abs(build_target_operator(EngineeringConfig::identity(3)) - Eigen::MatrixXcd::Identity(4, 4)), 1e-15);
}

TEST(TargetOperator, ProjectiveConfigurationProjectsOntoRotatedFockState) {
  Rng rng(41);
  const Eigen::MatrixXcd ur = random_unitary(3, rng);
  for (int l = 0; l < 3; ++l) {
    const Eigen::MatrixXcd expect = ur.adjoint().col(l) * ur.row(l);
    EXPECT_LT(max_abs(build_target_operator(EngineeringConfig::projective(ur, l)) - expect), 1e-12);
  }
}

TEST(TargetOperator, UniformTransmittanceScalesTheUnitary) {
  Rng rng(42);
  const Eigen::MatrixXcd u = random_unitary(4, rng);
  EXPECT_LT(max_abs(build_target_operator(EngineeringConfig::unitary(u, 0.7)) - 0.7 * u), 1e-12);
}

TEST(TargetOperator, RejectsInvalidParameters) {
  EngineeringConfig cfg = EngineeringConfig::identity(2);
  cfg.Tk = {0.0, 0.0, 0.0};
  EXPECT_THROW(cfg.validate(), ConfigurationError);
  cfg.Tk = {1.2, 0.0, 0.0};
  EXPECT_THROW(cfg.validate(), ConfigurationError);
  cfg = EngineeringConfig::identity(2);
  cfg.U = Eigen::MatrixXcd::Ones(3, 3);
  EXPECT_THROW(cfg.validate(), NotUnitary);
}

TEST(Decomposition, UnitaryTargetHasFullTransmission) {
  Rng rng(43);
  const Eigen::MatrixXcd u = random_unitary(3, rng);
  const auto dec = decompose_target(2.5 * u);
  for (double t : dec.config.Tk) EXPECT_NEAR(t, 1.0, 1e-12);
  EXPECT_LT(max_abs(dec.config.U_R - Eigen::MatrixXcd::Identity(3, 3)), 1e-12);
  EXPECT_LT(max_abs(dec.realization_factor * build_target_operator(dec.config) - 2.5 * u), 1e-10);
}

TEST(Decomposition, RankOneProjectorHasOneOpenChannel) {
  Eigen::Matrix3cd p = Eigen::Matrix3cd::Zero();
  p(0, 0) = 1.0;
  const auto dec = decompose_target(p);
  int open = 0;
  for (double t : dec.config.Tk) {
    EXPECT_TRUE(std::abs(t) < 1e-12 || std::abs(t - 1.0) < 1e-12);
    if (t > 0.5) ++open;
  }
  EXPECT_EQ(open, 1);
  EXPECT_LT(max_abs(dec.realization_factor * build_target_operator(dec.config) - Eigen::MatrixXcd(p)), 1e-12);
}

TEST(Decomposition, RandomTargetsRoundTrip) {
  Rng rng(44);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 4;
    const Eigen::MatrixXcd a = random_ginibre(n + 1, n + 1, rng);
    const auto dec = decompose_target(a);
    EXPECT_LT(max_abs(dec.realization_factor * build_target_operator(dec.config) - a), 1e-10);
    EXPECT_NEAR(*std::max_element(dec.config.Tk.begin(), dec.config.Tk.end()), 1.0, 1e-12);
    EXPECT_THROW(decompose_target(Eigen::MatrixXcd::Zero(n + 1, n + 1)), ConfigurationError);
  }
}

TEST(ConditionalEngineering, UnitaryCaseIsInputIndependent) {
  Rng rng(45);
  for (int n = 1; n <= 4; ++n) {
    const double t = 0.3 + 0.15 * n;
    const auto cfg = EngineeringConfig::unitary(random_unitary(n + 1, rng), t);
    const Eigen::MatrixXcd u = cfg.U;
    for (int i = 0; i < 50; ++i) {
      const auto rho = testing::random_input(cfg.a_space(), rng, i);
      const auto rec = run_engineering(rho, cfg);
      EXPECT_NEAR(rec.probability, t * t / ((n + 1) * (n + 1)), 1e-12);
      EXPECT_NEAR(fidelity(*rec.post_state, DensityOperator(rec.post_state->space(), u * rho.matrix() * u.adjoint())),
                  1.0, 1e-12);
    }
  }
  const auto cfg = EngineeringConfig::unitary(random_unitary(3, rng), 1.0);
  const auto rec = run_engineering(DensityOperator::pure(random_state(cfg.a_space(), rng)), cfg);
  EXPECT_NEAR(rec.probability, 1.0 / 9.0, 1e-12);
}

TEST(ConditionalEngineering, ProjectiveCaseProbabilityAndInputIndependence) {
  Rng rng(46);
  for (int n = 1; n <= 3; ++n) {
    const Eigen::MatrixXcd ur = random_unitary(n + 1, rng);
    const int l = n % (n + 1);
    const auto cfg = EngineeringConfig::projective(ur, l);
    std::optional<DensityOperator> first;
    for (int i = 0; i < 10; ++i) {
      const auto rho = testing::random_input(cfg.a_space(), rng, i);
      const auto rec = run_engineering(rho, cfg);
      const double overlap = (ur * rho.matrix() * ur.adjoint())(l, l).real();
      EXPECT_NEAR(rec.probability, overlap / ((n + 1) * (n + 1)), 1e-12);
      ASSERT_TRUE(rec.post_state.has_value());
      if (!first) first = rec.post_state;
      EXPECT_LT(trace_distance(*first, *rec.post_state), 1e-12);
    }
  }
}

TEST(ConditionalEngineering, OrthogonalProjectionIsImpossibleOutcome) {
  const auto cfg = EngineeringConfig::projective(Eigen::MatrixXcd::Identity(3, 3), 0);
  const auto rec = run_engineering(DensityOperator::pure(StateVector::basis(cfg.a_space(), 1)), cfg);
  EXPECT_NEAR(rec.probability, 0.0, 1e-15);
  EXPECT_TRUE(rec.impossible());
}

TEST(ConditionalEngineering, GeneralProbabilityIsRExpectation) {
  Rng rng(47);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 4;
    const auto cfg = testing::random_engineering(n, rng);
    const auto rho = testing::random_input(cfg.a_space(), rng, t);
    const auto rec = run_engineering(rho, cfg);
    const Eigen::MatrixXcd r = cfg.R_b();
    const double expect = (r.adjoint() * r * rho.matrix()).trace().real() / ((n + 1) * (n + 1));
    EXPECT_NEAR(rec.probability, expect, 1e-12);
    const Eigen::MatrixXcd a = cfg.A_b();
    EXPECT_LT(max_abs(rec.post_state->matrix() - normalized(a * rho.matrix() * a.adjoint())), 1e-10);
  }
}

TEST(ConditionalEngineering, ScalingTheTargetOnlyScalesTheProbability) {
  Rng rng(48);
  auto cfg = testing::random_engineering(3, rng);
  const auto rho = DensityOperator::pure(random_state(cfg.a_space(), rng));
  const auto base = run_engineering(rho, cfg);
  const double c = 0.6;
  for (auto& t : cfg.Tk) t *= c;
  const auto scaled = run_engineering(rho, cfg);
  EXPECT_NEAR(scaled.probability, c * c * base.probability, 1e-14);
  EXPECT_LT(trace_distance(*scaled.post_state, *base.post_state), 1e-12);
}

TEST(ConditionalEngineering, OmittedSplitterStageActsAsFullTransmission) {
  Rng rng(49);
  auto cfg = testing::random_engineering(2, rng);
  cfg.include_Tk_stage = false;
  cfg.Tk = {0.0, 0.0, 0.0};
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_LT(max_abs(build_target_operator(cfg) - cfg.U), 1e-12);
}

TEST(Completeness, EngineeringOutcomesResolveTheIdentity) {
  Rng rng(50);
  for (int n = 0; n <= 4; ++n) {
    auto cfg = testing::random_engineering(n, rng);
    EXPECT_LT(completeness_defect(engineering_outcomes(cfg)), 1e-10);
    cfg.preparation = AuxiliaryPreparation::Vacuum;
    EXPECT_LT(completeness_defect(engineering_outcomes(cfg)), 1e-10);
  }
}

TEST(OracleEquivalence, EngineeringOutcomesMatchDenseCircuit) {
  Rng rng(51);
  for (int n = 1; n <= 3; ++n) {
    for (int prep = 0; prep < 2; ++prep) {
      auto cfg = testing::random_engineering(n, rng);
      if (n == 2) cfg.Tk[1] = 1.0;
      if (prep == 1) cfg.preparation = AuxiliaryPreparation::Vacuum;
      const auto fast = engineering_outcomes(cfg);
      const auto slow = oracle::engineering_outcomes(cfg);
      for (const auto& o : fast) {
        EXPECT_LT(max_abs(o.op.matrix - find_outcome(slow, o.label).op.matrix), 1e-10) << o.label.to_string();
      }
      // Outcomes the fast path drops (c_j with R_j = 0) must vanish in the circuit.
      for (const auto& o : slow) {
        const bool present = std::any_of(fast.begin(), fast.end(), [&](const KrausOutcome& f) { return f.label == o.label; });
        if (!present) EXPECT_LT(max_abs(o.op.matrix), 1e-10);
      }
    }
  }
}

TEST(UnconditionalEngineering, FullTransmissionAlwaysSucceeds) {
  Rng rng(52);
  for (int n = 1; n <= 4; ++n) {
    const auto cfg = EngineeringConfig::unitary(random_unitary(n + 1, rng));
    const auto rho = testing::random_input(cfg.a_space(), rng, n);
    const auto res = run_engineering_unconditional(rho, cfg);
    EXPECT_NEAR(res.probability, 1.0, 1e-12);
    EXPECT_NEAR(fidelity(*res.state, DensityOperator(res.state->space(), cfg.U * rho.matrix() * cfg.U.adjoint())), 1.0,
                1e-12);
  }
}

TEST(UnconditionalEngineering, GainIsSquareOfChannelCount) {
  Rng rng(53);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 4;
    const auto cfg = testing::random_engineering(n, rng);
    const auto rho = testing::random_input(cfg.a_space(), rng, t);
    const auto res = run_engineering_unconditional(rho, cfg);
    const double p_cond = run_engineering(rho, cfg).probability;
    EXPECT_NEAR(res.probability, (n + 1) * (n + 1) * p_cond, 1e-12);
    const Eigen::MatrixXcd r = cfg.R_b();
    EXPECT_NEAR(res.probability, (r.adjoint() * r * rho.matrix()).trace().real(), 1e-12);
    ASSERT_TRUE(res.effective_operator.has_value());
    const double via_operator = (res.effective_operator->gram() * rho.matrix()).trace().real();
    EXPECT_NEAR(via_operator, res.probability, 1e-10);
  }
}

TEST(UnconditionalEngineering, OracleOutcomesGiveTheSameResult) {
  Rng rng(54);
  for (int n = 1; n <= 3; ++n) {
    const auto cfg = testing::random_engineering(n, rng);
    const auto rho = testing::random_input(cfg.a_space(), rng, n);
    const auto fast = run_engineering_unconditional(rho, cfg);
    const auto slow = run_engineering_unconditional(rho, cfg, oracle::engineering_outcomes(cfg));
    EXPECT_NEAR(fast.probability, slow.probability, 1e-10);
    EXPECT_LT(max_abs(fast.state->matrix() - slow.state->matrix()), 1e-10);
  }
}

TEST(ReducedStates, RightConverterOutputIsDephasedInput) {
  const auto cfg = EngineeringConfig::identity(2);
  const auto plus = StateVector::normalized_from(cfg.a_space(), Eigen::Vector3cd(1.0, 1.0, 1.0));
  const auto rs = reduced_states_engineering(DensityOperator::pure(plus), cfg);
  ASSERT_TRUE(rs.rho_red.has_value());
  EXPECT_LT(max_abs(rs.rho_red->matrix() - Eigen::MatrixXcd::Identity(3, 3) / 3.0), 1e-12);
}

TEST(ReducedStates, FockDiagonalInputIsClonedByBareSource) {
  const auto cfg = EngineeringConfig::identity(3);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m.diagonal() << 0.4, 0.3, 0.2, 0.1;
  const DensityOperator rho(cfg.a_space(), m);
  const auto rs = reduced_states_engineering(rho, cfg);
  EXPECT_LT(max_abs(rs.rho_red->matrix() - m), 1e-12);
  EXPECT_LT(max_abs(rs.rho_red_prime->matrix() - m), 1e-12);
}

TEST(ReducedStates, EngineeringFormulasMatchDenseCircuit) {
  Rng rng(55);
  for (int n = 1; n <= 3; ++n) {
    const auto cfg = testing::random_engineering(n, rng);
    const auto rho = random_density(cfg.a_space(), rng);
    const auto fast = reduced_states_engineering(rho, cfg);
    const auto slow = oracle::reduced_states_engineering(rho, cfg);
    EXPECT_LT(max_abs(fast.rho_red->matrix() - slow.rho_red->matrix()), 1e-10);
    EXPECT_LT(max_abs(fast.rho_red_prime->matrix() - slow.rho_red_prime->matrix()), 1e-10);
    EXPECT_NEAR(fast.probability, slow.probability, 1e-10);
  }
}

TEST(Dephasing, IdempotentAndTracePreserving) {
  Rng rng(56);
  const auto s = source_space(3);
  for (int t = 0; t < 10; ++t) {
    const auto rho = random_density(s, rng);
    const auto d = dephase(rho);
    EXPECT_NEAR(d.trace(), 1.0, 1e-12);
    EXPECT_LT(max_abs(dephase(d).matrix() - d.matrix()), 1e-15);
    EXPECT_LT(max_abs(d.matrix().diagonal() - rho.matrix().diagonal()), 1e-15);
  }
}

}  // namespace
}  // namespace kerrconv
