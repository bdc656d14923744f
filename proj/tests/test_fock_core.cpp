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
#include <set>

#include "kerrconv/isomorphism.hpp"
#include "kerrconv/json_io.hpp"
#include "kerrconv/random.hpp"
#include "support.hpp"

namespace kerrconv {
namespace {

using testing::max_abs;

TEST(FockSpace, SingleModeDimensionCountsOccupations) {
  const auto s = FockSpace::build({"a"}, 3);
  EXPECT_EQ(s->dimension(), 4u);
  for (std::size_t n = 0; n < 4; ++n) EXPECT_EQ(s->occupation(n), (Occupation{static_cast<int>(n)}));
}

TEST(FockSpace, SinglePhotonSectorHoldsOneBasisStatePerMode) {
  const auto s = FockSpace::build({"b0", "b1", "b2", "b3"}, 1, 1);
  ASSERT_EQ(s->dimension(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    Occupation occ(4, 0);
    occ[k] = 1;
    EXPECT_EQ(s->occupation(k), occ) << "index k must hold the photon in mode k";
  }
}

TEST(FockSpace, TwoPhotonSectorOfTwoModes) {
  const auto s = FockSpace::build({"x", "y"}, 2, 2);
  std::set<Occupation> got;
  for (std::size_t i = 0; i < s->dimension(); ++i) got.insert(s->occupation(i));
  EXPECT_EQ(got, (std::set<Occupation>{{2, 0}, {1, 1}, {0, 2}}));
}

TEST(FockSpace, IndexRoundTripAndColexOrder) {
  const auto s = FockSpace::build({"x", "y", "z"}, std::vector<int>{2, 1, 3});
  EXPECT_EQ(s->dimension(), 3u * 2u * 4u);
  for (std::size_t i = 0; i < s->dimension(); ++i) {
    const auto& occ = s->occupation(i);
    EXPECT_EQ(s->index_of(occ), i);
    EXPECT_EQ(static_cast<std::size_t>(occ[0] + 3 * occ[1] + 6 * occ[2]), i);
  }
  EXPECT_FALSE(s->index_of({3, 0, 0}).has_value());
}

TEST(FockSpace, RejectsInvalidConfigurations) {
  EXPECT_THROW(FockSpace::build({}, 1), ConfigurationError);
  EXPECT_THROW(FockSpace::build({"a", "a"}, 1), ConfigurationError);
  EXPECT_THROW(FockSpace::build({"a", "b"}, 1, 5), ConfigurationError);
  EXPECT_THROW(FockSpace::build({"a"}, -1), ConfigurationError);
}

TEST(FockSpace, UnknownModeLabel) {
  const auto s = FockSpace::build({"a"}, 2);
  EXPECT_THROW(s->mode_index("q"), UnknownMode);
}

TEST(StateVector, NormalizationIsEnforced) {
  const auto s = FockSpace::build({"a"}, 1);
  EXPECT_THROW(StateVector(s, Eigen::Vector2cd(1.0, 1.0)), ConfigurationError);
  EXPECT_NO_THROW(StateVector(s, Eigen::Vector2cd(1.0, 1.0), Normalization::Unnormalized));
  EXPECT_THROW(StateVector::normalized_from(s, Eigen::Vector2cd::Zero()), Error);
}

TEST(DensityOperator, RejectsNonPhysicalMatrices) {
  const auto s = FockSpace::build({"a"}, 1);
  Eigen::Matrix2cd m;
  m << 1.5, 0.0, 0.0, -0.5;
  EXPECT_THROW(DensityOperator(s, m), Error);
  m << 0.5, 1.0, 0.0, 0.5;
  EXPECT_THROW(DensityOperator(s, m), Error);
}

TEST(Tensor, ProductOfBasisStates) {
  const auto a = FockSpace::build({"a"}, 1);
  const auto b = FockSpace::build({"b"}, 1);
  const auto prod = tensor(StateVector::basis(a, 1), StateVector::basis(b, 0));
  EXPECT_NEAR(std::abs(prod.amplitude({1, 0}) - 1.0), 0.0, 1e-15);
  const StateVector plus(a, Eigen::Vector2cd(1.0, 1.0) / std::sqrt(2.0));
  const auto p2 = tensor(plus, StateVector::basis(b, 0));
  EXPECT_NEAR(std::abs(p2.amplitude({0, 0}) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p2.amplitude({1, 0}) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p2.amplitude({0, 1})), 0.0, 1e-15);
}

TEST(PartialTrace, ProductStateReturnsFactor) {
  Rng rng(1);
  const auto a = FockSpace::build({"a"}, 2);
  const auto b = FockSpace::build({"b"}, 3);
  const auto ra = random_density(a, rng);
  const auto rb = random_density(b, rng);
  const auto joint = tensor(ra, rb);
  EXPECT_LT(max_abs(partial_trace(joint, {"a"}).matrix() - ra.matrix()), 1e-14);
  EXPECT_LT(max_abs(partial_trace(joint, {"b"}).matrix() - rb.matrix()), 1e-14);
}

TEST(PartialTrace, MaximallyEntangledSectorPairGivesMixedMarginal) {
  // (|10,10> + |01,01>)/sqrt2 over two single-photon pairs.
  const auto s = FockSpace::with_constraints({"x0", "x1", "y0", "y1"}, {1, 1, 1, 1},
                                             {SectorConstraint{{0, 1}, 1}, SectorConstraint{{2, 3}, 1}});
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(s->dimension()));
  v(static_cast<Eigen::Index>(*s->index_of({1, 0, 1, 0}))) = 1.0;
  v(static_cast<Eigen::Index>(*s->index_of({0, 1, 0, 1}))) = 1.0;
  const auto psi = StateVector::normalized_from(s, v);
  const auto red = partial_trace(psi, {"x0", "x1"});
  ASSERT_EQ(red.matrix().rows(), 2);
  EXPECT_LT(max_abs(red.matrix() - Eigen::Matrix2cd::Identity() / 2.0), 1e-15);
  EXPECT_LT(max_abs(partial_trace(DensityOperator::pure(psi), {"x0", "x1"}).matrix() - red.matrix()), 1e-15);
}

TEST(Isomorphism, FockStatesMapToSinglePhotonChannels) {
  for (int n = 0; n <= 4; ++n) {
    const auto iso = make_isomorphism(n);
    EXPECT_LT(max_abs(iso.matrix.adjoint() * iso.matrix - Eigen::MatrixXcd::Identity(n + 1, n + 1)), 1e-15);
    for (int k = 0; k <= n; ++k) {
      const auto lifted = lift_state(StateVector::basis(iso.source, static_cast<std::size_t>(k)), iso);
      Occupation occ(static_cast<std::size_t>(n + 1), 0);
      occ[static_cast<std::size_t>(k)] = 1;
      EXPECT_NEAR(std::abs(lifted.amplitude(occ)), 1.0, 1e-15);
    }
  }
}

TEST(Isomorphism, Superposition) {
  const auto iso = make_isomorphism(2);
  Eigen::Vector3cd v(1.0, 0.0, 1.0);
  const auto out = lift_state(StateVector::normalized_from(iso.source, v), iso);
  EXPECT_NEAR(std::abs(out.amplitude({1, 0, 0}) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.amplitude({0, 0, 1}) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(Isomorphism, LiftAndLowerPreserveInnerProducts) {
  Rng rng(7);
  for (int n = 1; n <= 4; ++n) {
    const auto iso = make_isomorphism(n);
    for (int t = 0; t < 10; ++t) {
      const auto x = random_state(iso.source, rng);
      const auto y = random_state(iso.source, rng);
      const auto lx = lift_state(x, iso);
      const auto ly = lift_state(y, iso);
      EXPECT_LT(std::abs(inner(lx, ly) - inner(x, y)), 1e-13);
      EXPECT_LT((lower_state(lx, iso).amplitudes() - x.amplitudes()).norm(), 1e-13);
      const auto rho = random_density(iso.source, rng);
      EXPECT_LT(max_abs(lower_state(lift_state(rho, iso), iso).matrix() - rho.matrix()), 1e-13);
    }
  }
}

TEST(Fidelity, BoundaryCases) {
  Rng rng(3);
  const auto s = FockSpace::build({"a"}, 3);
  const auto rho = random_density(s, rng);
  EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-10);
  const auto p0 = DensityOperator::pure(StateVector::basis(s, 0));
  const auto p1 = DensityOperator::pure(StateVector::basis(s, 1));
  EXPECT_NEAR(fidelity(p0, p1), 0.0, 1e-12);
}

TEST(Fidelity, CommutingStatesMatchClassicalOverlap) {
  Rng rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto s = FockSpace::build({"a"}, 3);
  for (int t = 0; t < 20; ++t) {
    Eigen::Vector4d p, q;
    for (int i = 0; i < 4; ++i) {
      p(i) = u(rng);
      q(i) = u(rng);
    }
    p /= p.sum();
    q /= q.sum();
    const Eigen::MatrixXcd v = random_unitary(4, rng);
    const DensityOperator rp(s, v * p.cast<cd>().asDiagonal() * v.adjoint());
    const DensityOperator rq(s, v * q.cast<cd>().asDiagonal() * v.adjoint());
    const double expect = std::pow((p.array() * q.array()).sqrt().sum(), 2);
    EXPECT_NEAR(fidelity(rp, rq), expect, 1e-10);
    EXPECT_NEAR(trace_distance(rp, rq), 0.5 * (p - q).cwiseAbs().sum(), 1e-10);
  }
}

TEST(Fidelity, PureReferenceIsExpectationValue) {
  Rng rng(5);
  const auto s = FockSpace::build({"a"}, 4);
  for (int t = 0; t < 10; ++t) {
    const auto psi = random_state(s, rng);
    const auto rho = random_density(s, rng);
    const double direct = (psi.amplitudes().adjoint() * rho.matrix() * psi.amplitudes())(0, 0).real();
    EXPECT_NEAR(fidelity(psi, rho), direct, 1e-12);
    EXPECT_NEAR(fidelity(DensityOperator::pure(psi), rho), direct, 1e-9);
  }
}

TEST(JsonDump, StateCarriesModesCutoffsSectorAndAmplitudes) {
  const auto s = FockSpace::build({"b0", "b1"}, 1, 1);
  const auto j = to_json(StateVector::basis(s, 1));
  EXPECT_EQ(j["modes"], Json({"b0", "b1"}));
  EXPECT_EQ(j["cutoffs"], Json({1, 1}));
  EXPECT_EQ(j["sector"], 1);
  ASSERT_EQ(j["amplitudes"].size(), 2u);
  EXPECT_EQ(j["amplitudes"][1], Json({1.0, 0.0}));
  const auto a = FockSpace::build({"a"}, 2);
  EXPECT_TRUE(to_json(StateVector::basis(a, 0))["sector"].is_null());
}

TEST(JsonDump, ComplexMatrixRoundTrip) {
  Rng rng(6);
  const Eigen::MatrixXcd m = random_ginibre(3, 3, rng);
  EXPECT_EQ(max_abs(matrix_from_json(to_json(m)) - m), 0.0);
  EXPECT_THROW(matrix_from_json(Json::parse("[[1,2],[3]]")), ConfigurationError);
}

}  // namespace
}  // namespace kerrconv
