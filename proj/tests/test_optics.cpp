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
#include <numeric>

#include "kerrconv/mesh.hpp"
#include "kerrconv/optics.hpp"
#include "kerrconv/oracle.hpp"
#include "kerrconv/polar.hpp"
#include "kerrconv/random.hpp"
#include "support.hpp"

namespace kerrconv {
namespace {

using testing::dense;
using testing::max_abs;

// <out|U|in> for the induced multi-photon action with b_l^dagger -> sum_k U_kl b_k^dagger:
// perm(U[rows of out, cols of in]) / sqrt(prod n! prod m!).
cd permanent_amplitude(const Eigen::MatrixXcd& u, const Occupation& out, const Occupation& in) {
  std::vector<int> rows, cols;
  double norm = 1.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (int r = 0; r < out[k]; ++r) rows.push_back(static_cast<int>(k));
    norm *= std::tgamma(out[k] + 1.0);
  }
  for (std::size_t k = 0; k < in.size(); ++k) {
    for (int r = 0; r < in[k]; ++r) cols.push_back(static_cast<int>(k));
    norm *= std::tgamma(in[k] + 1.0);
  }
  if (rows.size() != cols.size()) return 0.0;
  std::vector<int> perm(cols.size());
  std::iota(perm.begin(), perm.end(), 0);
  cd total{0.0};
  do {
    cd term{1.0};
    for (std::size_t i = 0; i < rows.size(); ++i) term *= u(rows[i], cols[static_cast<std::size_t>(perm[i])]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total / std::sqrt(norm);
}

TEST(CrossKerr, PhaseIsProductOfPhotonNumbers) {
  const auto s = FockSpace::build({"b", "a"}, 2);
  const Eigen::MatrixXcd m = dense(element_matrix(CrossKerrElement{"b", "a", kPi}, *s));
  const auto i11 = static_cast<Eigen::Index>(*s->index_of({1, 1}));
  EXPECT_NEAR(std::abs(m(i11, i11) + 1.0), 0.0, 1e-15);
  const double kappa = 0.37;
  const Eigen::MatrixXcd g = dense(element_matrix(CrossKerrElement{"b", "a", kappa}, *s));
  for (std::size_t i = 0; i < s->dimension(); ++i) {
    const auto& occ = s->occupation(i);
    const auto ii = static_cast<Eigen::Index>(i);
    EXPECT_NEAR(std::abs(g(ii, ii) - std::polar(1.0, kappa * occ[0] * occ[1])), 0.0, 1e-14);
    EXPECT_NEAR(g.row(ii).cwiseAbs().sum(), 1.0, 1e-14) << "Kerr coupling must be diagonal";
  }
}

TEST(CrossKerr, StrengthWrapsIntoOnePeriod) {
  EXPECT_NEAR((CrossKerrElement{"b", "a", -0.5}).wrapped_kappa(), 2 * kPi - 0.5, 1e-15);
  EXPECT_NEAR((CrossKerrElement{"b", "a", 2 * kPi + 0.25}).wrapped_kappa(), 0.25, 1e-14);
}

TEST(BeamSplitter, SinglePhotonMatrixIsTheTwoByTwoForm) {
  const cd t = std::polar(0.6, 0.3);
  const cd r = std::polar(0.8, -1.1);
  const BeamSplitterElement bs{"b", "c", t, r};
  const auto s = FockSpace::build({"b", "c"}, 1, 1);
  const Eigen::MatrixXcd m = dense(element_matrix(bs, *s));
  EXPECT_LT(max_abs(m - bs.matrix()), 1e-15);
  // The transmitted amplitude of the photon entering b.
  EXPECT_NEAR(std::abs(m(0, 0) - t), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m(0, 1) - r), 0.0, 1e-15);
}

TEST(BeamSplitter, RejectsNonUnitaryCoefficients) {
  const BeamSplitterElement bs{"b", "c", 0.9, 0.9};
  EXPECT_THROW(bs.validate(), ConfigurationError);
  const auto s = FockSpace::build({"b", "c"}, 1);
  EXPECT_THROW(element_matrix(BeamSplitterElement{"b", "q", 1.0, 0.0}, *s), UnknownMode);
}

TEST(Elements, UnitaryAndNumberConservingOnTwoPhotonSector) {
  Rng rng(11);
  const auto s = FockSpace::build({"x", "y", "z"}, 3, 2);
  const Eigen::MatrixXcd u3 = random_unitary(3, rng);
  const std::vector<CircuitElement> elems{
      BeamSplitterElement{"x", "y", std::polar(0.6, 0.2), std::polar(0.8, 1.3)},
      CrossKerrElement{"y", "z", 1.234},
      PhaseShifterElement{"z", 0.77},
      MultiportUnitary{{"x", "y", "z"}, u3},
  };
  const auto id = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(s->dimension()),
                                             static_cast<Eigen::Index>(s->dimension()));
  for (const auto& e : elems) {
    const Eigen::MatrixXcd m = dense(element_matrix(e, *s));
    EXPECT_LT(max_abs(m.adjoint() * m - id), 1e-12);
  }
}

TEST(Multiport, IdentityActsTriviallyOnEverySector) {
  for (int sector = 0; sector <= 3; ++sector) {
    const auto s = FockSpace::build({"x", "y", "z"}, 3, sector);
    const Eigen::MatrixXcd m = dense(multiport_matrix({{"x", "y", "z"}, Eigen::MatrixXcd::Identity(3, 3)}, *s));
    EXPECT_LT(max_abs(m - Eigen::MatrixXcd::Identity(m.rows(), m.cols())), 1e-15);
  }
}

TEST(Multiport, DftOnSinglePhotonSectorOfTwoModes) {
  const auto s = FockSpace::build({"b0", "b1"}, 1, 1);
  const Eigen::MatrixXcd m = dense(multiport_matrix({{"b0", "b1"}, dft_matrix(2)}, *s));
  Eigen::Matrix2cd expect;
  expect << 1.0, 1.0, 1.0, -1.0;
  EXPECT_LT(max_abs(m - expect / std::sqrt(2.0)), 1e-15);
}

TEST(Multiport, HigherSectorsMatchPermanents) {
  Rng rng(12);
  for (int modes = 2; modes <= 4; ++modes) {
    std::vector<std::string> labels;
    for (int k = 0; k < modes; ++k) labels.push_back("m" + std::to_string(k));
    const Eigen::MatrixXcd u = random_unitary(modes, rng);
    for (int sector = 1; sector <= 3; ++sector) {
      const auto s = FockSpace::build(labels, sector, sector);
      const Eigen::MatrixXcd m = dense(multiport_matrix({labels, u}, *s));
      double worst = 0.0;
      for (std::size_t i = 0; i < s->dimension(); ++i) {
        for (std::size_t j = 0; j < s->dimension(); ++j) {
          const cd expect = permanent_amplitude(u, s->occupation(i), s->occupation(j));
          worst = std::max(worst, std::abs(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - expect));
        }
      }
      EXPECT_LT(worst, 1e-12) << modes << " modes, sector " << sector;
    }
  }
}

TEST(Multiport, SectorTwoEqualsProductOfMeshFactors) {
  Rng rng(13);
  const std::vector<std::string> labels{"m0", "m1", "m2", "m3"};
  const Eigen::MatrixXcd u = random_unitary(4, rng);
  const auto s = FockSpace::build(labels, 2, 2);
  const Eigen::MatrixXcd direct = dense(multiport_matrix({labels, u}, *s));
  const Eigen::MatrixXcd composed = dense(circuit_matrix(mesh_elements(synthesize_mesh(u), labels), *s));
  EXPECT_LT(max_abs(direct - composed), 1e-12);
}

TEST(Multiport, RejectsNonUnitaryMatrix) {
  const auto s = FockSpace::build({"x", "y"}, 1, 1);
  Eigen::Matrix2cd m;
  m << 1.0, 0.1, 0.0, 1.0;
  EXPECT_THROW(multiport_matrix({{"x", "y"}, m}, *s), NotUnitary);
}

TEST(Mesh, TwoModeUnitaryNeedsOneSplitter) {
  Rng rng(14);
  const Eigen::MatrixXcd u = random_unitary(2, rng);
  const Mesh mesh = synthesize_mesh(u);
  EXPECT_EQ(mesh.splitters.size(), 1u);
  EXPECT_LT(max_abs(compose_mesh(mesh) - u), 1e-12);
}

TEST(Mesh, IdentityGivesEmptyMesh) {
  const Mesh mesh = synthesize_mesh(Eigen::MatrixXcd::Identity(5, 5));
  EXPECT_TRUE(mesh.splitters.empty());
  EXPECT_LT(mesh.phases.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Mesh, RecomposesDftAndRandomUnitaries) {
  EXPECT_LT(max_abs(compose_mesh(synthesize_mesh(dft_matrix(4))) - dft_matrix(4)), 1e-10);
  Rng rng(15);
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + t % 6;
    const Eigen::MatrixXcd u = random_unitary(d, rng);
    const Mesh mesh = synthesize_mesh(u);
    EXPECT_LE(mesh.splitters.size(), static_cast<std::size_t>(d * (d - 1) / 2));
    EXPECT_EQ(mesh.phases.size(), d);
    EXPECT_LT(max_abs(compose_mesh(mesh) - u), 1e-10);
  }
}

TEST(Mesh, RejectsNonUnitary) {
  EXPECT_THROW(synthesize_mesh(Eigen::MatrixXcd::Ones(3, 3)), NotUnitary);
}

TEST(VacuumProjection, ClosedFormExamples) {
  const auto s3 = FockSpace::build({"b"}, 3);
  EXPECT_LT(max_abs(vacuum_projected_splitter(1.0, *s3) - Eigen::MatrixXcd::Identity(4, 4)), 1e-15);
  Eigen::Vector4cd diag(1.0, 0.8, 0.64, 0.512);
  EXPECT_LT(max_abs(vacuum_projected_splitter(0.8, *s3) - Eigen::MatrixXcd(diag.asDiagonal())), 1e-15);
  EXPECT_THROW(vacuum_projected_splitter(1.1, *s3), ConfigurationError);
}

TEST(VacuumProjection, MatchesExplicitTwoModeSplitter) {
  Rng rng(16);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const int cutoff = t % 7;
    const cd tt = std::polar(u(rng), 2 * kPi * u(rng));
    const cd rr = std::polar(std::sqrt(1.0 - std::norm(tt)), 2 * kPi * u(rng));
    // Photon number is conserved, so n_b + n_c <= cutoff stays inside cutoff x cutoff.
    const auto two = FockSpace::build({"b", "c"}, cutoff);
    const Eigen::MatrixXcd full = dense(element_matrix(BeamSplitterElement{"b", "c", tt, rr}, *two));
    Eigen::MatrixXcd projected(cutoff + 1, cutoff + 1);
    for (int i = 0; i <= cutoff; ++i) {
      for (int j = 0; j <= cutoff; ++j) {
        projected(i, j) = full(static_cast<Eigen::Index>(*two->index_of({i, 0})),
                               static_cast<Eigen::Index>(*two->index_of({j, 0})));
      }
    }
    const auto single = FockSpace::build({"b"}, cutoff);
    EXPECT_LT(max_abs(vacuum_projected_splitter(tt, *single) - projected), 1e-12);
    EXPECT_LT(max_abs(oracle::vacuum_projected_splitter(tt, rr, cutoff) - projected), 1e-12);
  }
}

TEST(Polar, UnitaryInputHasIdentityPositiveFactor) {
  Rng rng(17);
  const Eigen::MatrixXcd u = random_unitary(4, rng);
  const PolarFactors f = polar_decompose(u);
  EXPECT_LT(max_abs(f.positive - Eigen::MatrixXcd::Identity(4, 4)), 1e-12);
  EXPECT_NEAR(f.trace_norm, 4.0, 1e-12);
  EXPECT_LT(max_abs(f.unitary - u), 1e-12);
}

TEST(Polar, RandomMatricesReconstruct) {
  Rng rng(18);
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + t % 4;
    const Eigen::MatrixXcd a = random_ginibre(d, d, rng);
    const PolarFactors f = polar_decompose(a);
    EXPECT_LT(max_abs(f.unitary * f.positive - a), 1e-10);
    EXPECT_LT(max_abs(f.unitary * f.unitary.adjoint() - Eigen::MatrixXcd::Identity(d, d)), 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(f.positive);
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-10);
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    EXPECT_NEAR(f.trace_norm, svd.singularValues().sum(), 1e-10);
    EXPECT_NEAR(std::abs(f.det_phase), 1.0, 1e-12);
    const Eigen::MatrixXcd rep = f.normalized_representative();
    const PolarFactors g = polar_decompose(rep);
    EXPECT_NEAR(g.positive.trace().real(), 1.0, 1e-10);
    EXPECT_NEAR(std::abs(g.unitary.determinant() - 1.0), 0.0, 1e-10);
  }
}

TEST(Polar, SingularInputCompletesDeterministically) {
  Eigen::Matrix3cd a = Eigen::Matrix3cd::Zero();
  a(0, 0) = 2.0;
  const PolarFactors f = polar_decompose(a);
  EXPECT_LT(max_abs(f.unitary * f.positive - a), 1e-12);
  EXPECT_LT(max_abs(f.unitary - Eigen::MatrixXcd::Identity(3, 3)), 1e-12);
  const PolarFactors again = polar_decompose(a);
  EXPECT_EQ(max_abs(again.unitary - f.unitary), 0.0);
  EXPECT_THROW(polar_decompose(Eigen::Matrix3cd::Zero()), ConfigurationError);
}

}  // namespace
}  // namespace kerrconv
