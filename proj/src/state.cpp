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

#include "kerrconv/state.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace kerrconv {

namespace {

double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Eigenvalues below this fraction of the trace are treated as exact zeros
// when taking matrix square roots.
constexpr double kSqrtCut = 1e-14;

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  const double scale = std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::VectorXd roots = es.eigenvalues().unaryExpr(
      [&](double x) { return x > kSqrtCut * scale ? std::sqrt(x) : 0.0; });
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

void require_same(const SpacePtr& a, const SpacePtr& b, const char* what) {
  if (!same_space(a, b)) {
    throw SpaceMismatch(std::string(what) + ": " + a->describe() + " vs " + b->describe());
  }
}

Occupation pick(const Occupation& occ, const std::vector<std::size_t>& idx) {
  Occupation out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(occ[i]);
  return out;
}

std::vector<std::string> complement(const FockSpace& space, const std::vector<std::string>& labels) {
  std::vector<std::string> rest;
  for (const auto& m : space.modes()) {
    if (std::find(labels.begin(), labels.end(), m) == labels.end()) rest.push_back(m);
  }
  return rest;
}

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(SpacePtr space, Eigen::VectorXcd amplitudes, Normalization norm)
    : space_(std::move(space)),
      amplitudes_(std::move(amplitudes)),
      normalized_(norm == Normalization::Normalized) {
  if (!space_) throw ConfigurationError("StateVector: null space");
  if (static_cast<std::size_t>(amplitudes_.size()) != space_->dimension()) {
    throw SpaceMismatch("StateVector: amplitude count does not match space dimension");
  }
  if (normalized_ && std::abs(amplitudes_.squaredNorm() - 1.0) > kNormTol) {
    std::ostringstream os;
    os << "StateVector: squared norm " << amplitudes_.squaredNorm() << " is not 1";
    throw ConfigurationError(os.str());
  }
}

StateVector StateVector::basis(SpacePtr space, const Occupation& occ) {
  auto idx = space->index_of(occ);
  if (!idx) throw SpaceMismatch("StateVector::basis: occupation not in space");
  return basis(std::move(space), *idx);
}

StateVector StateVector::basis(SpacePtr space, std::size_t index) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space->dimension()));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(space), std::move(v));
}

StateVector StateVector::normalized_from(SpacePtr space, Eigen::VectorXcd amplitudes) {
  const double n = amplitudes.norm();
  if (n == 0.0) throw ConfigurationError("StateVector: cannot normalize the zero vector");
  amplitudes /= n;
  return StateVector(std::move(space), std::move(amplitudes));
}

cd StateVector::amplitude(const Occupation& occ) const {
  auto idx = space_->index_of(occ);
  return idx ? amplitudes_(static_cast<Eigen::Index>(*idx)) : cd{0.0};
}

StateVector StateVector::normalized() const { return normalized_from(space_, amplitudes_); }

// ---------------------------------------------------------------------------
// DensityOperator

DensityOperator::DensityOperator(SpacePtr space, Eigen::MatrixXcd matrix, Normalization norm)
    : space_(std::move(space)), normalized_(norm == Normalization::Normalized) {
  if (!space_) throw ConfigurationError("DensityOperator: null space");
  const auto dim = static_cast<Eigen::Index>(space_->dimension());
  if (matrix.rows() != dim || matrix.cols() != dim) {
    throw SpaceMismatch("DensityOperator: matrix shape does not match space dimension");
  }
  const double scale = std::max(1.0, max_abs(matrix));
  if (max_abs(matrix - matrix.adjoint()) > kNormTol * scale) {
    throw ConfigurationError("DensityOperator: matrix is not Hermitian");
  }
  matrix_ = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kPsdTol * scale) {
    throw ConfigurationError("DensityOperator: matrix has a negative eigenvalue");
  }
  if (normalized_ && std::abs(matrix_.trace().real() - 1.0) > kNormTol) {
    throw ConfigurationError("DensityOperator: trace is not 1");
  }
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  const auto& v = psi.amplitudes();
  return DensityOperator(psi.space(), v * v.adjoint(),
                         psi.is_normalized() ? Normalization::Normalized
                                             : Normalization::Unnormalized);
}

DensityOperator DensityOperator::maximally_mixed(SpacePtr space) {
  const auto dim = static_cast<Eigen::Index>(space->dimension());
  return DensityOperator(space, Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityOperator::purity() const {
  return (matrix_ * matrix_).trace().real() / std::pow(trace(), 2);
}

DensityOperator DensityOperator::normalized() const {
  const double t = trace();
  if (t <= 0.0) throw ConfigurationError("DensityOperator: cannot normalize zero trace");
  return DensityOperator(space_, matrix_ / t);
}

// ---------------------------------------------------------------------------
// LinearMap

StateVector LinearMap::apply(const StateVector& psi) const {
  require_same(psi.space(), source, "LinearMap::apply");
  return StateVector(target, matrix * psi.amplitudes(), Normalization::Unnormalized);
}

DensityOperator LinearMap::apply(const DensityOperator& rho) const {
  require_same(rho.space(), source, "LinearMap::apply");
  return DensityOperator(target, matrix * rho.matrix() * matrix.adjoint(),
                         Normalization::Unnormalized);
}

LinearMap LinearMap::adjoint() const { return {target, source, matrix.adjoint()}; }

LinearMap LinearMap::then(const LinearMap& next) const {
  require_same(target, next.source, "LinearMap::then");
  return {source, next.target, next.matrix * matrix};
}

// ---------------------------------------------------------------------------
// Composition

namespace {

template <typename Fill>
void for_product(const FockSpace& a, const FockSpace& b, const FockSpace& prod, Fill fill) {
  Occupation occ(prod.num_modes());
  for (std::size_t j = 0; j < b.dimension(); ++j) {
    const auto& ob = b.occupation(j);
    std::copy(ob.begin(), ob.end(), occ.begin() + static_cast<std::ptrdiff_t>(a.num_modes()));
    for (std::size_t i = 0; i < a.dimension(); ++i) {
      const auto& oa = a.occupation(i);
      std::copy(oa.begin(), oa.end(), occ.begin());
      fill(i, j, *prod.index_of(occ));
    }
  }
}

}  // namespace

StateVector tensor(const StateVector& first, const StateVector& second) {
  auto prod = FockSpace::product(*first.space(), *second.space());
  Eigen::VectorXcd v(static_cast<Eigen::Index>(prod->dimension()));
  for_product(*first.space(), *second.space(), *prod, [&](std::size_t i, std::size_t j, std::size_t k) {
    v(static_cast<Eigen::Index>(k)) =
        first.amplitudes()(static_cast<Eigen::Index>(i)) * second.amplitudes()(static_cast<Eigen::Index>(j));
  });
  const bool both = first.is_normalized() && second.is_normalized();
  return StateVector(prod, std::move(v), both ? Normalization::Normalized : Normalization::Unnormalized);
}

DensityOperator tensor(const DensityOperator& first, const DensityOperator& second) {
  auto prod = FockSpace::product(*first.space(), *second.space());
  const auto& fa = *first.space();
  const auto& fb = *second.space();
  std::vector<std::size_t> index(fa.dimension() * fb.dimension());
  for_product(fa, fb, *prod, [&](std::size_t i, std::size_t j, std::size_t k) { index[i + fa.dimension() * j] = k; });
  const auto dim = static_cast<Eigen::Index>(prod->dimension());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t j1 = 0; j1 < fb.dimension(); ++j1)
    for (std::size_t i1 = 0; i1 < fa.dimension(); ++i1)
      for (std::size_t j2 = 0; j2 < fb.dimension(); ++j2)
        for (std::size_t i2 = 0; i2 < fa.dimension(); ++i2) {
          m(static_cast<Eigen::Index>(index[i1 + fa.dimension() * j1]),
            static_cast<Eigen::Index>(index[i2 + fa.dimension() * j2])) =
              first.matrix()(static_cast<Eigen::Index>(i1), static_cast<Eigen::Index>(i2)) *
              second.matrix()(static_cast<Eigen::Index>(j1), static_cast<Eigen::Index>(j2));
        }
  const bool both = first.is_normalized() && second.is_normalized();
  return DensityOperator(prod, std::move(m), both ? Normalization::Normalized : Normalization::Unnormalized);
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& keep) {
  const auto& space = *rho.space();
  if (keep.empty()) throw ConfigurationError("partial_trace: keep set is empty");
  for (const auto& k : keep) {
    if (!space.has_mode(k)) throw UnknownMode("partial_trace: '" + k + "' is not a mode of rho");
  }
  auto kept_space = space.restricted_to(keep);
  const auto kept_idx = space.mode_indices(kept_space->modes());
  const auto traced_labels = complement(space, kept_space->modes());
  const auto traced_idx = space.mode_indices(traced_labels);

  // Group basis states by the occupation of the traced modes.
  std::map<Occupation, std::vector<std::pair<Eigen::Index, Eigen::Index>>> groups;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const auto& occ = space.occupation(i);
    auto k = kept_space->index_of(pick(occ, kept_idx));
    groups[pick(occ, traced_idx)].emplace_back(static_cast<Eigen::Index>(i),
                                               static_cast<Eigen::Index>(*k));
  }
  const auto dim = static_cast<Eigen::Index>(kept_space->dimension());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [traced, members] : groups) {
    for (const auto& [fi, ki] : members)
      for (const auto& [fj, kj] : members) out(ki, kj) += rho.matrix()(fi, fj);
  }
  return DensityOperator(kept_space, std::move(out),
                         rho.is_normalized() ? Normalization::Normalized : Normalization::Unnormalized);
}

DensityOperator partial_trace(const StateVector& psi, const std::vector<std::string>& keep) {
  const auto& space = *psi.space();
  if (keep.empty()) throw ConfigurationError("partial_trace: keep set is empty");
  for (const auto& k : keep) {
    if (!space.has_mode(k)) throw UnknownMode("partial_trace: '" + k + "' is not a mode of psi");
  }
  auto kept_space = space.restricted_to(keep);
  const auto kept_idx = space.mode_indices(kept_space->modes());
  const auto traced_labels = complement(space, kept_space->modes());
  const auto traced_idx = space.mode_indices(traced_labels);

  // Columns of this matrix are the kept-mode vectors <t|psi> for each traced basis state t.
  std::map<Occupation, Eigen::Index> traced_col;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    traced_col.emplace(pick(space.occupation(i), traced_idx), 0);
  }
  Eigen::Index next = 0;
  for (auto& [occ, col] : traced_col) col = next++;
  Eigen::MatrixXcd blocks = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(kept_space->dimension()), next);
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const auto& occ = space.occupation(i);
    auto k = kept_space->index_of(pick(occ, kept_idx));
    blocks(static_cast<Eigen::Index>(*k), traced_col[pick(occ, traced_idx)]) +=
        psi.amplitudes()(static_cast<Eigen::Index>(i));
  }
  return DensityOperator(kept_space, blocks * blocks.adjoint(),
                         psi.is_normalized() ? Normalization::Normalized : Normalization::Unnormalized);
}

StateVector project(const StateVector& psi, const StateVector& bra) {
  const auto& space = *psi.space();
  const auto& bspace = *bra.space();
  const auto bra_idx = space.mode_indices(bspace.modes());
  const auto rest_labels = complement(space, bspace.modes());
  if (rest_labels.empty()) {
    throw ConfigurationError("project: bra covers every mode; use inner() instead");
  }
  auto rest = space.restricted_to(rest_labels);
  const auto rest_idx = space.mode_indices(rest_labels);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(rest->dimension()));
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const cd a = psi.amplitudes()(static_cast<Eigen::Index>(i));
    if (a == cd{0.0}) continue;
    const auto& occ = space.occupation(i);
    auto b = bspace.index_of(pick(occ, bra_idx));
    if (!b) continue;
    auto r = rest->index_of(pick(occ, rest_idx));
    out(static_cast<Eigen::Index>(*r)) += std::conj(bra.amplitudes()(static_cast<Eigen::Index>(*b))) * a;
  }
  return StateVector(rest, std::move(out), Normalization::Unnormalized);
}

LinearMap project_output(const LinearMap& map, const StateVector& bra) {
  const auto cols = map.matrix.cols();
  SpacePtr rest;
  Eigen::MatrixXcd out;
  for (Eigen::Index c = 0; c < cols; ++c) {
    StateVector col(map.target, map.matrix.col(c), Normalization::Unnormalized);
    auto p = project(col, bra);
    if (!rest) {
      rest = p.space();
      out.resize(static_cast<Eigen::Index>(rest->dimension()), cols);
    }
    out.col(c) = p.amplitudes();
  }
  return {map.source, rest, std::move(out)};
}

cd inner(const StateVector& bra, const StateVector& ket) {
  if (same_space(bra.space(), ket.space())) return bra.amplitudes().dot(ket.amplitudes());
  if (bra.space()->modes() != ket.space()->modes()) {
    throw SpaceMismatch("inner: states live on different modes");
  }
  cd acc{0.0};
  const auto& ks = *ket.space();
  for (std::size_t i = 0; i < ks.dimension(); ++i) {
    acc += std::conj(bra.amplitude(ks.occupation(i))) * ket.amplitudes()(static_cast<Eigen::Index>(i));
  }
  return acc;
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same(rho.space(), sigma.space(), "fidelity");
  const auto a = rho.normalized().matrix();
  const auto b = sigma.normalized().matrix();
  const Eigen::MatrixXcd s = psd_sqrt(a);
  const Eigen::MatrixXcd m = s * b * s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  const double scale = std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
  double tr = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double x = es.eigenvalues()(i);
    if (x > kSqrtCut * scale) tr += std::sqrt(x);
  }
  return std::clamp(tr * tr, 0.0, 1.0);
}

double fidelity(const StateVector& psi, const DensityOperator& rho) {
  require_same(psi.space(), rho.space(), "fidelity");
  const auto r = rho.normalized();
  const auto& v = psi.amplitudes();
  return std::clamp((v.adjoint() * r.matrix() * v)(0, 0).real() / v.squaredNorm(), 0.0, 1.0);
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same(rho.space(), sigma.space(), "trace_distance");
  const Eigen::MatrixXcd d = rho.matrix() - sigma.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// ---------------------------------------------------------------------------
// Operators on subsets of modes

SparseOperator local_operator(const FockSpace& space, const std::vector<std::string>& modes,
                              const LocalAction& action) {
  const auto idx = space.mode_indices(modes);
  std::map<Occupation, std::vector<std::pair<Occupation, cd>>> memo;
  std::vector<Eigen::Triplet<cd>> triplets;
  Occupation out_occ;
  for (std::size_t col = 0; col < space.dimension(); ++col) {
    const auto& occ = space.occupation(col);
    Occupation local = pick(occ, idx);
    auto it = memo.find(local);
    if (it == memo.end()) it = memo.emplace(local, action(local)).first;
    for (const auto& [lo, amp] : it->second) {
      if (amp == cd{0.0}) continue;
      out_occ = occ;
      for (std::size_t j = 0; j < idx.size(); ++j) out_occ[idx[j]] = lo[j];
      if (auto row = space.index_of(out_occ)) {
        triplets.emplace_back(static_cast<int>(*row), static_cast<int>(col), amp);
      }
    }
  }
  const auto dim = static_cast<Eigen::Index>(space.dimension());
  SparseOperator op(dim, dim);
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

SparseOperator diagonal_operator(const FockSpace& space,
                                 const std::function<cd(const Occupation&)>& entry) {
  std::vector<Eigen::Triplet<cd>> triplets;
  triplets.reserve(space.dimension());
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), entry(space.occupation(i)));
  }
  const auto dim = static_cast<Eigen::Index>(space.dimension());
  SparseOperator op(dim, dim);
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

}  // namespace kerrconv
